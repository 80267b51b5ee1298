use rand::Rng;
use twistlab::lattice::{Grid, Sampling, ScalarTestFunction, TwistKernel};
use twistlab::twisted::ModelConfig;

use super::{random_test_function, random_wave, reference_system, suite_rng, system};
use crate::config::RunConfig;
use crate::error::{CliResult, Context};
use crate::record::{worst, CheckRecord, Recorder, ALL_SECTORS, INTERIOR_SHELLS, SAFE_SECTORS};

const CONVENTIONS: &[&str] = &[
    "twist: ψ(w) ↦ ψ(e^{-iσ⋆s₀}w)",
    "constant-kernel sign ε = +1",
    "cocycle W(s)W(t) = e^{+iη/2}W(s+t)",
];

/// Named kernels exercised by the relation sweep.
pub fn named_kernels(g: &Grid, r: &mut impl Rng) -> CliResult<Vec<(&'static str, TwistKernel)>> {
    let half: Vec<f64> = (0..g.len()).map(|_| r.random_range(-1.0..1.0)).collect();
    let tab: Vec<f64> = (0..g.len()).map(|x| 0.5 * (half[x] + half[g.reflect(x)])).collect();
    Ok(vec![
        ("delta", TwistKernel::delta(g)),
        ("constant", TwistKernel::constant(g)),
        ("yukawa_spectral", TwistKernel::yukawa(g, 1.0, Sampling::Spectral).context("yukawa")?),
        ("yukawa_pointwise", TwistKernel::yukawa(g, 1.0, Sampling::Pointwise).context("yukawa")?),
        ("coulomb_spectral", TwistKernel::coulomb(g, Sampling::Spectral).context("coulomb")?),
        ("tabulated", TwistKernel::tabulated(g, tab).context("tabulated")?),
    ])
}

pub fn run(cfg: &RunConfig) -> CliResult<Vec<CheckRecord>> {
    let mut rec = Recorder::new("twisted", cfg, CONVENTIONS);
    let g = cfg.grid.build()?;
    let gens = cfg.generator_fields(&g);
    let d = cfg.internal_dim;
    let amp = cfg.amplitude;
    let mut r = suite_rng(cfg, "twisted", 0);

    for (name, sigma) in named_kernels(&g, &mut r)? {
        let sys = reference_system(cfg, ModelConfig::new(sigma))?;
        let mut rel = Vec::new();
        let mut inf = Vec::new();
        for _ in 0..cfg.draws {
            let s = random_test_function(&mut r, &g, &gens, amp);
            let w = random_wave(&mut r, &g, d, &[]);
            rel.push(sys.verify_twisted_weyl_relation(&s, &w).context("twisted relation")?);
            let v = sys.fermi().space().electron(&w).context("electron")?;
            let i = sys.verify_infinitesimal(&s, &w, &v).context("infinitesimal relation")?;
            inf.push(i.field.max(i.selfdual));
        }
        rec.bound(&format!("relation_{name}"), "twisted Weyl relation", Some(2), worst(rel), 1e-11, SAFE_SECTORS);
        rec.bound(&format!("infinitesimal_{name}"), "infinitesimal relation", Some(2), worst(inf), 1e-11, SAFE_SECTORS);
    }

    let sys = reference_system(cfg, ModelConfig::new(TwistKernel::yukawa(&g, 1.0, Sampling::Spectral).context("yukawa")?))?;
    let s = random_test_function(&mut r, &g, &gens, amp);
    let t = random_test_function(&mut r, &g, &gens, amp);
    let w = random_wave(&mut r, &g, d, &[]);
    rec.bound("sector_shift", "charge-sector shift", None, sys.verify_sector_shift(&s, &w).context("sector shift")?, 1e-11, SAFE_SECTORS);
    let (n, q) = sys.conservation_residuals(&s).context("conservation")?;
    rec.bound("number_charge_conservation", "reducibility", None, n.max(q), 1e-12, ALL_SECTORS);
    let zero = ScalarTestFunction::zero(g.len());
    rec.bound("weyl_at_zero", "twisted Weyl operators", None, sys.twisted_weyl(&zero).context("weyl")?.sub(&sys.identity()).norm(), 1e-13, ALL_SECTORS);
    rec.bound("weyl_inverse", "twisted Weyl operators", None, sys.inverse_residual(&s).context("inverse")?, 1e-11, ALL_SECTORS);
    rec.bound("vacuum_restriction", "twisted Weyl operators", None, sys.vacuum_restriction_residual(&s).context("vacuum")?, 1e-13, ALL_SECTORS);
    rec.bound("field_commutator", "twisted field", None, sys.field_commutator_residual(&s, &t).context("field commutator")?, 1e-11, INTERIOR_SHELLS);
    let c = sys.cocycle_residual(&s.scaled(0.1), &t.scaled(0.1), 1).context("cocycle")?;
    rec.bound("twisted_cocycle", "twisted Weyl operators", None, c, 1e-12, "boson shells ≤ 1, amplitude × 0.1");
    let states: Vec<usize> = (0..sys.fermi().dim()).step_by(37).collect();
    rec.bound("exp_consistency", "twisted field", None, sys.exp_consistency(&s, &states).context("exp")?, 1e-10, ALL_SECTORS);
    rec.bound("annihilates_vacuum", "creation/annihilation split", None, sys.annihilates_vacuum(&s).context("vacuum")?, 1e-13, ALL_SECTORS);
    rec.bound("one_electron_mu", "explicit μ-action", None, sys.one_electron_mu_residual(&s).context("mu")?, 1e-12, ALL_SECTORS);

    let lsys = reference_system(cfg, ModelConfig::new(TwistKernel::constant(&g)))?;
    let lr = lsys.model_lebesgue_check(&s, &w).context("constant kernel")?;
    rec.bound("constant_kernel_identities", "constant kernel", None, lr.worst(), 1e-12, SAFE_SECTORS);
    rec.holds("constant_kernel_sign_plus", "constant kernel", None, lr.sign == 1.0);
    rec.witness("constant_kernel_other_sign", "constant kernel", None, lr.difference_other_sign.min(lr.intertwiner_other_sign), 1e-3, SAFE_SECTORS);

    let n = g.len();
    if g.dim() == 1 {
        use std::f64::consts::PI;
        let real: Vec<Vec<f64>> = vec![vec![1.0; n], (0..n).map(|x| (2.0 * PI * x as f64 / n as f64).cos()).collect(), (0..n).map(|x| (2.0 * PI * x as f64 / n as f64).sin()).collect()];
        let ysys = system(cfg, &g, &real, ModelConfig::new(TwistKernel::yukawa(&g, 1.0, Sampling::Spectral).context("yukawa")?))?;
        let s0: Vec<f64> = (0..n).map(|x| 0.1 + 0.15 * (2.0 * PI * x as f64 / n as f64).cos()).collect();
        let s1: Vec<f64> = (0..n).map(|x| 0.12 * (2.0 * PI * x as f64 / n as f64).sin()).collect();
        let sv = ScalarTestFunction::new(s0, s1).context("test function")?;
        let cov = worst([1i64, 3].iter().map(|&a| ysys.translation_covariance_check(&sv, &[a]).unwrap_or(f64::NAN)));
        rec.bound("translation_covariance", "translation covariance", None, cov, 1e-10, SAFE_SECTORS);
    }
    Ok(rec.finish())
}
