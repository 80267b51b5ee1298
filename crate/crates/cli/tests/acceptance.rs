//! Criteria 1 to 10 on the reference configuration, one line per criterion.

use std::collections::BTreeMap;
use std::time::Duration;

use twistlab_cli::report::{records, report_json, write_reports};
use twistlab_cli::suites::{run_selected, run_suite, SuiteOutcome, SUITES};
use twistlab_cli::{CheckRecord, RunConfig};

struct Line {
    ok: bool,
    detail: String,
}

fn elapsed(outcomes: &[SuiteOutcome], names: &[&str]) -> Duration {
    outcomes.iter().filter(|o| names.contains(&o.suite.as_str())).map(|o| o.elapsed).sum()
}

fn criterion_line(recs: &[&CheckRecord], budget: Option<(Duration, Duration)>) -> Line {
    let failed: Vec<String> =
        recs.iter().filter(|r| !r.passed).map(|r| format!("{} = {:.3e} vs {:.1e}", r.id(), r.residual, r.tolerance)).collect();
    let mut ok = !recs.is_empty() && failed.is_empty();
    let mut detail = format!("{} checks", recs.len());
    if let Some((took, limit)) = budget {
        ok &= took < limit;
        detail.push_str(&format!(", {:.1} s of {:.0} s", took.as_secs_f64(), limit.as_secs_f64()));
    }
    if !failed.is_empty() {
        detail.push_str(&format!("; failing: {}", failed.join("; ")));
    }
    Line { ok, detail }
}

#[test]
fn acceptance() {
    let cfg = RunConfig::default();
    cfg.validate().unwrap();
    // sequential, so the per-suite timings are not shared with other suites
    let outcomes: Vec<SuiteOutcome> = SUITES.iter().map(|s| run_suite(s, &cfg).unwrap()).collect();
    let all = records(&outcomes);
    let mut by: BTreeMap<u8, Vec<&CheckRecord>> = BTreeMap::new();
    for r in &all {
        if let Some(c) = r.criterion {
            by.entry(c).or_default().push(r);
        }
    }
    let budget = |names: &[&str], secs: u64| Some((elapsed(&outcomes, names), Duration::from_secs(secs)));
    let empty = Vec::new();
    let get = |c: u8| by.get(&c).unwrap_or(&empty).as_slice();

    let mut lines = vec![
        (1, "algebra suites", criterion_line(get(1), budget(&["lattice", "fermi", "bose"], 30))),
        (2, "twisted relations", criterion_line(get(2), budget(&["twisted"], 60))),
        (3, "gauge generator", criterion_line(get(3), None)),
        (4, "charged states", criterion_line(get(4), None)),
        (5, "non-equivalence", criterion_line(get(5), None)),
        (6, "m-point functions", criterion_line(get(6), None)),
        (7, "Yukawa and Coulomb states", criterion_line(get(7), None)),
        (8, "Coulomb gauge", criterion_line(get(8), None)),
        (9, "Hamiltonian", criterion_line(get(9), budget(&["hamiltonian"], 300))),
    ];

    // two full runs through the report writer, compared byte for byte
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut cfg2 = cfg.clone();
    cfg2.jobs = 4;
    let mut bytes = Vec::new();
    for (d, c) in dirs.iter().zip([&cfg, &cfg2]) {
        let o = run_selected(c).unwrap();
        write_reports(d.path(), &o).unwrap();
        bytes.push(std::fs::read(d.path().join("report.json")).unwrap());
    }
    let same = bytes[0] == bytes[1] && bytes[0] == report_json(&all).unwrap().into_bytes();
    lines.push((10, "determinism", Line { ok: same, detail: format!("report.json {} bytes, jobs 1 and 4", bytes[0].len()) }));

    for (c, name, l) in &lines {
        println!("criterion {c:>2} {:<26} {}  {}", name, if l.ok { "PASS" } else { "FAIL" }, l.detail);
    }
    let failed: Vec<u8> = lines.iter().filter(|l| !l.2.ok).map(|l| l.0).collect();
    assert!(failed.is_empty(), "criteria failing: {failed:?}");
}
