use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::CliResult;
use crate::record::{CheckKind, CheckRecord};
use crate::suites::SuiteOutcome;

pub fn records(outcomes: &[SuiteOutcome]) -> Vec<CheckRecord> {
    outcomes.iter().flat_map(|o| o.records.iter().cloned()).collect()
}

pub fn all_passed(records: &[CheckRecord]) -> bool {
    records.iter().all(|r| r.passed)
}

/// Pretty JSON array; byte-stable for a fixed config.
pub fn report_json(records: &[CheckRecord]) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(records)?;
    s.push('\n');
    Ok(s)
}

pub fn summary(outcomes: &[SuiteOutcome]) -> String {
    let mut s = String::new();
    let mut failed = 0;
    let mut total = 0;
    for o in outcomes {
        let _ = writeln!(s, "[{}] {} checks in {:.2} s", o.suite, o.records.len(), o.elapsed.as_secs_f64());
        for r in &o.records {
            total += 1;
            failed += usize::from(!r.passed);
            let op = match r.kind {
                CheckKind::Bound => "<=",
                CheckKind::Witness => ">",
            };
            let crit = r.criterion.map(|c| format!(" (criterion {c})")).unwrap_or_default();
            let _ = writeln!(
                s,
                "  {} {:<36} {:>11.3e} {op} {:<9.1e} {}{crit}",
                if r.passed { "PASS" } else { "FAIL" },
                r.name,
                r.residual,
                r.tolerance,
                r.anchor
            );
        }
    }
    let _ = writeln!(s, "{} of {} checks passed", total - failed, total);
    s
}

/// report.json and summary.txt under `dir`.
pub fn write_reports(dir: &Path, outcomes: &[SuiteOutcome]) -> CliResult<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.json"), report_json(&records(outcomes))?)?;
    fs::write(dir.join("summary.txt"), summary(outcomes))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

pub fn write_csv<R: Serialize>(path: &Path, header: &[&str], rows: impl IntoIterator<Item = R>) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;
    use crate::record::{Recorder, ALL_SECTORS};

    #[test]
    fn json_round_trips_and_summary_counts() {
        let cfg = RunConfig::default();
        let mut rec = Recorder::new("demo", &cfg, &[]);
        rec.bound("a", "x", Some(3), 1e-13, 1e-12, ALL_SECTORS);
        rec.bound("b", "x", None, 1.0, 1e-12, ALL_SECTORS);
        let o = vec![SuiteOutcome { suite: "demo".into(), records: rec.finish(), elapsed: Default::default() }];
        let text = report_json(&records(&o)).unwrap();
        let back: Vec<CheckRecord> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, records(&o));
        assert!(!all_passed(&back));
        let s = summary(&o);
        assert!(s.contains("FAIL b") && s.contains("1 of 2 checks passed"));
    }
}
