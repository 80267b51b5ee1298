//! Subcommand bodies. Each returns the process exit code on success.

use std::fs;
use std::path::Path;

use serde::Serialize;
use twistlab::hamiltonian::{gaussian_packet, CutoffFunction, OneFermionBosonSpace};
use twistlab::lattice::{gaussian, ScalarTestFunction, TwistKernel};
use twistlab::twisted::{ChargedVector, ModelConfig};

use crate::config::{RunConfig, Spacing};
use crate::error::{CliError, CliResult, Context};
use crate::report::{all_passed, records, write_csv, write_json, write_reports};
use crate::suites::{self, cut, random_test_function, random_wave, suite_rng, system, transverse_table};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    /// t·s for t in [0, 1]
    Scaled,
    /// s ≡ 0
    Zero,
    /// Gaussians away from the charge, Delta kernel
    Disjoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::Subcommand)]
pub enum HamiltonianCmd {
    /// H(g) on a random product state against the closed form
    Action {
        /// use g ≡ 0
        #[arg(long)]
        zero: bool,
    },
    /// momentum transfer from a cutoff bump
    Demo,
    /// I_p(R) for p = 2, 3, 4
    Scan {
        /// geometric radii instead of the configured spacing
        #[arg(long)]
        geometric: bool,
    },
}

fn out_dir(cfg: &RunConfig) -> CliResult<&Path> {
    fs::create_dir_all(&cfg.out)?;
    Ok(&cfg.out)
}

pub fn verify(cfg: &RunConfig) -> CliResult<i32> {
    let outcomes = suites::run_selected(cfg)?;
    write_reports(out_dir(cfg)?, &outcomes)?;
    let recs = records(&outcomes);
    for r in recs.iter().filter(|r| !r.passed) {
        eprintln!("FAIL {}: residual {:e} vs tolerance {:e}", r.id(), r.residual, r.tolerance);
    }
    Ok(if all_passed(&recs) { EXIT_PASS } else { EXIT_FAIL })
}

#[derive(Serialize)]
struct StateRow {
    id: usize,
    scale: f64,
    re: f64,
    im: f64,
    difference: f64,
    untwisted_re: f64,
    untwisted_im: f64,
}

pub fn state(cfg: &RunConfig, family: Family, count: usize) -> CliResult<i32> {
    cfg.validate()?;
    if count == 0 {
        return Err(CliError::Config("count must be at least 1".into()));
    }
    let g = cfg.grid.build()?;
    let n = g.len();
    let mut r = suite_rng(cfg, "state", 0);
    let (sys, omega, base, scales) = match family {
        Family::Disjoint => {
            let far = cut(gaussian(&g, 3 * n / 4, 0.6, 1.0), 1e-3);
            let sys = system(cfg, &g, std::slice::from_ref(&far), ModelConfig::new(TwistKernel::delta(&g)))?;
            let near = [n / 8, n / 8 + 1, n / 8 + 2];
            let omega = ChargedVector::electron(sys.fermi().space(), &random_wave(&mut r, &g, cfg.internal_dim, &near))
                .context("electron")?;
            let base = ScalarTestFunction::from_s0(far);
            (sys, omega, base, linspace(count))
        }
        Family::Scaled | Family::Zero => {
            let sys = suites::reference_system(cfg, cfg.model(&g)?)?;
            let omega =
                ChargedVector::electron(sys.fermi().space(), &random_wave(&mut r, &g, cfg.internal_dim, &[])).context("electron")?;
            let base = random_test_function(&mut r, &g, &cfg.generator_fields(&g), cfg.amplitude);
            let scales = if family == Family::Zero { vec![0.0] } else { linspace(count) };
            (sys, omega, base, scales)
        }
    };
    let mut rows = Vec::new();
    for (id, &t) in scales.iter().enumerate() {
        let s = base.scaled(t);
        let v = sys.charged_state_eval(&omega, &s).map_err(|source| CliError::Model { context: format!("test function {id}"), source })?;
        let u = sys.reference_value(&s).context("reference")?;
        rows.push(StateRow { id, scale: t, re: v.matrix.re, im: v.matrix.im, difference: v.difference(), untwisted_re: u.re, untwisted_im: u.im });
    }
    let dir = out_dir(cfg)?;
    write_csv(&dir.join("state.csv"), &["id", "scale", "re", "im", "difference", "untwisted_re", "untwisted_im"], rows)?;
    write_kernel(&dir.join("kernel.csv"), sys.sigma())?;
    Ok(EXIT_PASS)
}

fn linspace(count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![1.0];
    }
    (0..count).map(|i| i as f64 / (count - 1) as f64).collect()
}

pub fn write_kernel(path: &Path, sigma: &TwistKernel) -> CliResult<()> {
    let dim = sigma.grid().dim();
    let header: Vec<&str> = ["site", "x", "y", "z"][..=dim].iter().copied().chain(["value"]).collect();
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(&header)?;
    for (site, c, v) in sigma.table() {
        let mut row = vec![site.to_string()];
        row.extend(c[..dim].iter().map(|x| format!("{x:e}")));
        row.push(format!("{v:e}"));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct NPointRow {
    m: usize,
    re: f64,
    im: f64,
    oracle_re: f64,
    oracle_im: f64,
    difference: f64,
}

pub fn npoint(cfg: &RunConfig, max_m: usize) -> CliResult<i32> {
    cfg.validate()?;
    let g = cfg.grid.build()?;
    let sys = suites::reference_system(cfg, cfg.model(&g)?)?;
    let mut r = suite_rng(cfg, "npoint", 0);
    let omega = ChargedVector::electron(sys.fermi().space(), &random_wave(&mut r, &g, cfg.internal_dim, &[])).context("electron")?;
    let gens = cfg.generator_fields(&g);
    let fields: Vec<ScalarTestFunction> = (0..max_m).map(|_| random_test_function(&mut r, &g, &gens, cfg.amplitude)).collect();
    let mut rows = Vec::new();
    for m in 0..=max_m {
        let v = sys.npoint_both(&omega, &fields[..m]).context("npoint")?;
        rows.push(NPointRow { m, re: v.matrix.re, im: v.matrix.im, oracle_re: v.oracle.re, oracle_im: v.oracle.im, difference: v.difference() });
    }
    write_csv(&out_dir(cfg)?.join("npoint.csv"), &["m", "re", "im", "oracle_re", "oracle_im", "difference"], rows)?;
    Ok(EXIT_PASS)
}

#[derive(Serialize)]
struct ActionJson {
    cutoff: &'static str,
    modes: Vec<usize>,
    n_max: usize,
    residual: f64,
    residual_without_factor: f64,
    norm: f64,
    zero_vector: bool,
}

#[derive(Serialize)]
struct DemoJson {
    k_bullet: usize,
    k_e: usize,
    cutoff_width: f64,
    packet_width: f64,
    n_max: usize,
    modes: usize,
    overlap: f64,
    amplitude_one: f64,
    amplitude_zero: f64,
    ratio: f64,
    ratio_bare: f64,
    ratio_with_factor: f64,
    ratio_error_bare: f64,
    ratio_error_with_factor: f64,
    omega_bullet: f64,
}

#[derive(Serialize)]
struct FitJson {
    slope: f64,
    intercept: f64,
    r2: f64,
}

#[derive(Serialize)]
struct ScanJson {
    p: i32,
    linear: FitJson,
    log: FitJson,
    cauchy_increment: f64,
}

pub fn hamiltonian(cfg: &RunConfig, cmd: HamiltonianCmd) -> CliResult<i32> {
    cfg.validate()?;
    let dir = out_dir(cfg)?;
    let h = &cfg.hamiltonian;
    match cmd {
        HamiltonianCmd::Action { zero } => {
            let mg = suites::hamiltonian::momentum_grid(cfg)?;
            let (label, g) = if zero {
                ("zero", CutoffFunction::zero(&mg))
            } else {
                ("gaussian", suites::hamiltonian::cutoff(cfg, &mg, h.k_bullet % mg.len())?)
            };
            let sp = if zero {
                OneFermionBosonSpace::new(mg.clone(), vec![0], h.n_max, suites::hamiltonian::choice(cfg))
            } else {
                OneFermionBosonSpace::for_cutoff(mg.clone(), &g, h.n_max, suites::hamiltonian::choice(cfg))
            }
            .context("space")?;
            let w = gaussian_packet(&mg, h.k_e % mg.len(), h.packet_width * mg.grid().dk());
            let rep = sp.action_report(&g, &w).context("action")?;
            let out = ActionJson {
                cutoff: label,
                modes: sp.modes().to_vec(),
                n_max: h.n_max,
                residual: rep.residual,
                residual_without_factor: rep.residual_without_factor,
                norm: rep.norm,
                zero_vector: rep.norm == 0.0,
            };
            write_json(&dir.join("action.json"), &out)?;
        }
        HamiltonianCmd::Demo => {
            let d = suites::hamiltonian::demo(cfg)?;
            let out = DemoJson {
                k_bullet: h.k_bullet,
                k_e: h.k_e,
                cutoff_width: h.cutoff_width,
                packet_width: h.packet_width,
                n_max: h.n_max,
                modes: d.modes,
                overlap: d.overlap,
                amplitude_one: d.amplitude_one,
                amplitude_zero: d.amplitude_zero,
                ratio: d.ratio,
                ratio_bare: d.ratio_bare,
                ratio_with_factor: d.ratio_expected,
                ratio_error_bare: d.ratio_error_bare(),
                ratio_error_with_factor: d.ratio_error(),
                omega_bullet: d.omega_bullet,
            };
            write_json(&dir.join("demo.json"), &out)?;
        }
        HamiltonianCmd::Scan { geometric } => {
            let mut c = cfg.clone();
            if geometric {
                c.scan.spacing = Spacing::Geometric;
            }
            let reports = suites::hamiltonian::scans(&c)?;
            let mut fits = Vec::new();
            for s in &reports {
                let p = s.p;
                write_csv(&dir.join(format!("scan_p{p}.csv")), &["R", "I_p"], s.rows.iter().copied())?;
                let fit = |f: &twistlab::hamiltonian::LinearFit| FitJson { slope: f.slope, intercept: f.intercept, r2: f.r2 };
                fits.push(ScanJson { p, linear: fit(&s.linear), log: fit(&s.log), cauchy_increment: s.cauchy_increment });
            }
            write_json(&dir.join("scan.json"), &fits)?;
        }
    }
    Ok(EXIT_PASS)
}

#[derive(Serialize)]
struct BasisRow {
    mode: usize,
    component: usize,
    site: usize,
    re: f64,
    im: f64,
}

pub fn coulomb(cfg: &RunConfig) -> CliResult<i32> {
    let mut c = cfg.clone();
    c.suites = vec!["coulomb".into()];
    let code = verify(&c)?;
    let rows = transverse_table(cfg)?.into_iter().map(|(mode, component, site, re, im)| BasisRow { mode, component, site, re, im });
    write_csv(&out_dir(cfg)?.join("transverse_basis.csv"), &["mode", "component", "site", "re", "im"], rows)?;
    Ok(code)
}
