use twistlab::lattice::{apply_diffop, gaussian, DiffOp, Grid, ScalarTestFunction, SiteSet, SpectralMask};
use twistlab::twisted::{ModelConfig, TwistedSystem};

use super::{cut, random_test_function, random_wave, suite_rng, system};
use crate::config::RunConfig;
use crate::error::{CliResult, Context};
use crate::record::{worst, CheckRecord, Recorder, SAFE_SECTORS};

const CONVENTIONS: &[&str] = &["spectral fundamental solutions", "neglaplacian zero mode: mean-zero", "twist: ψ(w) ↦ ψ(e^{-iσ⋆s₀}w)"];

fn gauge_system(cfg: &RunConfig, g: &Grid, p: DiffOp, gens: &[Vec<f64>]) -> CliResult<TwistedSystem> {
    let all: Vec<Vec<f64>> = gens.iter().map(|f| apply_diffop(p, g, f)).collect();
    system(cfg, g, &all, ModelConfig::with_fundamental_solution(p, g).context("fundamental solution")?)
}

pub fn run(cfg: &RunConfig) -> CliResult<Vec<CheckRecord>> {
    let mut rec = Recorder::new("gauge", cfg, CONVENTIONS);
    let g = cfg.grid.build()?;
    let d = cfg.internal_dim;
    let n = g.len();
    let mask = SpectralMask::mean_zero(&g);
    let mut r = suite_rng(cfg, "gauge", 0);

    for (name, p) in [("helmholtz", DiffOp::Helmholtz(1.0)), ("neglaplacian", DiffOp::NegLaplacian)] {
        let base: Vec<Vec<f64>> = cfg.generator_fields(&g).iter().map(|f| mask.project(&g, f)).collect();
        let sys = gauge_system(cfg, &g, p, &base)?;
        let mut comm = Vec::new();
        let mut expo = Vec::new();
        for _ in 0..cfg.draws.min(5) {
            let s = random_test_function(&mut r, &g, &base, cfg.amplitude);
            let w = random_wave(&mut r, &g, d, &[]);
            let res = sys.verify_gauge(&s, &w).context("gauge generator")?;
            comm.push(res.commutator);
            expo.push(res.exponentiated);
        }
        rec.bound(&format!("commutator_{name}"), "gauge generator", Some(3), worst(comm), 1e-10, SAFE_SECTORS);
        rec.bound(&format!("exponentiated_{name}"), "gauge generator", Some(3), worst(expo), 1e-10, SAFE_SECTORS);
    }

    // bump equal to one on a three-site region holding the electron
    let region: SiteSet = [3 * n / 8, 3 * n / 8 + 1, 3 * n / 8 + 2].into_iter().collect();
    let bump = mask.bump(&g, &region).context("bump")?;
    let p = DiffOp::Helmholtz(1.0);
    let sys = gauge_system(cfg, &g, p, std::slice::from_ref(&bump))?;
    let sites: Vec<usize> = region.iter().copied().collect();
    let w = random_wave(&mut r, &g, d, &sites);
    let res = sys.charge_detection_residual(&ScalarTestFunction::from_s0(bump), &w).context("charge detection")?;
    rec.bound("bump_charge_detection", "gauge generator", Some(3), res, 1e-10, SAFE_SECTORS);

    let far = cut(gaussian(&g, 7 * n / 8, 0.4, 1.0), 1e-2);
    let sys = gauge_system(cfg, &g, p, std::slice::from_ref(&far))?;
    let w = random_wave(&mut r, &g, d, &[5 * n / 16, 6 * n / 16, 7 * n / 16]);
    let s = ScalarTestFunction::from_s0(far.iter().map(|v| 0.4 * v).collect());
    rec.bound("disjoint_commutes", "gauge generator", None, sys.gauge_commutator_norm(&s, &w).context("gauge")?, 1e-12, SAFE_SECTORS);
    Ok(rec.finish())
}
