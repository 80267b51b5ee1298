use twistlab::coulomb::{divergence, eta_tr, gradient, laplacian, transverse_projector, CoulombSystem, TransverseSector, VectorTestFunction};
use twistlab::lattice::{gaussian, DiffOp, Grid, ScalarTestFunction, SiteSet, SpectralMask};
use twistlab::twisted::ModelConfig;

use super::{max_abs, random_real, random_wave, suite_rng, system};
use crate::config::RunConfig;
use crate::error::{CliResult, Context};
use crate::record::{worst, CheckRecord, Recorder, ALL_SECTORS, INTERIOR_SHELLS, SAFE_SECTORS};

const CONVENTIONS: &[&str] = &[
    "projector: modes with zero derivative wavenumber pass through",
    "σ = mean-zero fundamental solution of -Δ",
    "band-limited scalar labels",
];

/// Site at fractional position `frac` (eighths of the box) along the first two axes, centred on the rest.
fn site(g: &Grid, frac: [usize; 2]) -> usize {
    let n = g.n();
    let mut c: Vec<usize> = frac.iter().map(|f| f * n / 8).collect();
    c.resize(g.dim(), n / 2);
    g.site(&c)
}

/// Vector field with a Gaussian in component 0 at `a` and component 1 at `b`.
fn smooth_vector(g: &Grid, a: [usize; 2], b: [usize; 2], w: f64) -> Vec<f64> {
    let mut f = gaussian(g, site(g, a), w, 1.0);
    f.extend(gaussian(g, site(g, b), w, -0.7));
    f.resize(g.dim() * g.len(), 0.0);
    f
}

fn neg_lap(g: &Grid, s: &[f64]) -> CliResult<Vec<f64>> {
    Ok(laplacian(g, s).context("laplacian")?.iter().map(|v| -v).collect())
}

fn coulomb_system(cfg: &RunConfig, g: &Grid, scalar: &[Vec<f64>], transverse: &[Vec<f64>]) -> CliResult<CoulombSystem> {
    let model = ModelConfig::with_fundamental_solution(DiffOp::NegLaplacian, g).context("fundamental solution")?;
    let scalar_cfg = RunConfig { n_max: cfg.coulomb.n_max, ..cfg.clone() };
    let tw = system(&scalar_cfg, g, scalar, model)?;
    let tr = TransverseSector::new(g, transverse, cfg.coulomb.n_max).context("transverse sector")?;
    CoulombSystem::new(tw, tr).context("coulomb system")
}

pub fn transverse_generators(g: &Grid) -> Vec<Vec<f64>> {
    vec![smooth_vector(g, [2, 5], [5, 2], 0.9), smooth_vector(g, [6, 1], [1, 6], 1.1)]
}

/// Rows (mode, component, site, re, im) of the transverse basis on the configured grid.
pub fn transverse_table(cfg: &RunConfig) -> CliResult<Vec<(usize, usize, usize, f64, f64)>> {
    let g = cfg.coulomb.grid.build()?;
    Ok(TransverseSector::new(&g, &transverse_generators(&g), cfg.coulomb.n_max).context("transverse sector")?.table())
}

pub fn run(cfg: &RunConfig) -> CliResult<Vec<CheckRecord>> {
    let mut rec = Recorder::new("coulomb", cfg, CONVENTIONS);
    let g = cfg.coulomb.grid.build()?;
    let len = g.dim() * g.len();
    let mut r = suite_rng(cfg, "coulomb", 0);
    let mask = SpectralMask::band_limited(&g);
    let d = cfg.internal_dim;

    let mut proj = Vec::new();
    let mut eta = Vec::new();
    for _ in 0..cfg.draws.min(5) {
        let f = random_real(&mut r, len);
        let h = random_real(&mut r, len);
        let p = transverse_projector(&g, &f).context("projector")?;
        let pp = transverse_projector(&g, &p).context("projector")?;
        proj.push(max_abs(&p.iter().zip(&pp).map(|(a, b)| a - b).collect::<Vec<_>>()));
        proj.push(max_abs(&divergence(&g, &p).context("divergence")?));
        let ph = transverse_projector(&g, &h).context("projector")?;
        let a: f64 = p.iter().zip(&h).map(|(x, y)| x * y).sum();
        let b: f64 = f.iter().zip(&ph).map(|(x, y)| x * y).sum();
        proj.push((a - b).abs());
        let vf = VectorTestFunction::new(&g, f.clone(), h.clone()).context("vector")?;
        let vh = VectorTestFunction::new(&g, random_real(&mut r, len), random_real(&mut r, len)).context("vector")?;
        eta.push((eta_tr(&g, &vf, &vh).context("eta")? + eta_tr(&g, &vh, &vf).context("eta")?).abs());
    }
    let s0 = SpectralMask::mean_zero(&g).project(&g, &gaussian(&g, site(&g, [1, 1]), 0.8, 1.0));
    proj.push(max_abs(&transverse_projector(&g, &gradient(&g, &s0).context("gradient")?).context("projector")?));
    rec.bound("projector_identities", "transverse projector", Some(8), worst(proj), 1e-12, ALL_SECTORS);
    rec.bound("eta_tr_antisymmetry", "transverse symplectic form", None, worst(eta), 1e-12, ALL_SECTORS);

    let t = transverse_generators(&g);
    let tr = TransverseSector::new(&g, &t, cfg.coulomb.n_max).context("transverse sector")?;
    rec.bound("transverse_modes_divergence_free", "transverse sector", None, tr.max_divergence().context("divergence")?, 1e-12, ALL_SECTORS);
    let f0: Vec<f64> = t[0].iter().map(|v| 0.4 * v).collect();
    let f1: Vec<f64> = t[1].iter().zip(&t[0]).map(|(a, b)| 0.3 * a - 0.2 * b).collect();
    rec.bound("transverse_ccr", "transverse sector", None, tr.ccr_residual(&f0, &f1).context("ccr")?, 1e-11, INTERIOR_SHELLS);

    // gauge relations with a local electron
    let sites = [site(&g, [2, 2]), g.shift(site(&g, [2, 2]), &[0, 1, 0][..g.dim()])];
    let supp: SiteSet = sites.iter().copied().collect();
    let w = random_wave(&mut r, &g, d, &sites);
    let u1 = mask.project(&g, &gaussian(&g, sites[0], 0.8, 0.5));
    let u2 = mask.project(&g, &gaussian(&g, site(&g, [5, 4]), 1.0, 0.4));
    let bump = mask.bump(&g, &supp).context("bump")?;
    let scalar = vec![neg_lap(&g, &u1)?, neg_lap(&g, &u2)?, neg_lap(&g, &bump)?];
    let sys = coulomb_system(cfg, &g, &scalar, &t)?;

    let s = ScalarTestFunction::from_s0(scalar[0].iter().map(|v| 0.1 * v).collect());
    let ft = VectorTestFunction::new(&g, t[0].iter().map(|v| 0.3 * v).collect(), t[1].iter().map(|v| 0.2 * v).collect()).context("vector")?;
    let indep = sys.scalar_transverse_commutator(&s, &t[0]).context("commutator")?.is_zero()
        && sys.psi_weyl_tr_commutator(&w, &ft).context("commutator")?.is_zero();
    rec.holds("sectors_commute", "Coulomb gauge", None, indep);

    rec.bound("gauge_relation", "Coulomb gauge", Some(8), sys.gauge_relation_residual(&u1, &w).context("gauge")?, 1e-9, SAFE_SECTORS);
    let tf: Vec<f64> = transverse_projector(&g, &t[1]).context("projector")?.iter().map(|v| 0.3 * v).collect();
    rec.bound("divergence_free_relation", "Coulomb gauge", Some(8), sys.divergence_free_residual(&tf).context("divergence free")?, 1e-9, SAFE_SECTORS);
    let grad = gradient(&g, &u2).context("gradient")?;
    let pt = transverse_projector(&g, &t[0]).context("projector")?;
    let f: Vec<f64> = grad.iter().zip(&pt).map(|(a, b)| a + 0.2 * b).collect();
    rec.bound("e_commutator", "Coulomb gauge", Some(8), sys.e_commutator_residual(&f, &w).context("E")?, 1e-9, SAFE_SECTORS);
    let mut div = Vec::new();
    let mut div_a = Vec::new();
    let mut cond = Vec::new();
    for s0 in [&u1, &u2] {
        let res = sys.div_e_residual(s0, &w).context("div E")?;
        div.push(res.commutator.max(res.exponentiated));
        div.push(sys.div_e_reduction_residual(s0).context("div E")?);
        div_a.push(sys.div_e_a_commutator(s0, &t[0]).context("div E")?);
        let (a, ad) = sys.coulomb_condition(s0).context("coulomb condition")?;
        cond.push(a.max(ad));
    }
    rec.bound("div_e_relations", "Coulomb gauge", Some(8), worst(div), 1e-9, SAFE_SECTORS);
    rec.bound("div_e_a_commutator", "Coulomb gauge", Some(8), worst(div_a), 1e-11, ALL_SECTORS);
    rec.bound("coulomb_condition", "Coulomb gauge", None, worst(cond), 1e-12, ALL_SECTORS);
    rec.bound("div_e_charge_detection", "Coulomb gauge", None, sys.charge_detection_residual(&bump, &w).context("charge")?, 1e-10, SAFE_SECTORS);

    // locality contrast: E^λ(f) sees the electron through σ, div E^λ does not
    let far = site(&g, [6, 6]);
    let unit = |a: usize| -> Vec<i64> { (0..g.dim()).map(|b| if a == b { 1 } else { 0 }).collect() };
    let mut fl = vec![0.0; len];
    for (i, x) in [far, g.shift(far, &unit(0)), g.shift(far, &unit(1))].into_iter().enumerate() {
        fl[x] = 1.0 - 0.3 * i as f64;
        fl[g.len() + x] = 0.5;
    }
    let disjoint: SiteSet = (0..g.len()).filter(|&x| (0..g.dim()).any(|a| fl[a * g.len() + x] != 0.0)).collect();
    let z = mask.pinned(&g, &gaussian(&g, far, 1.2, 1.0), &supp, 0.0).context("pinned")?;
    let lsys = coulomb_system(cfg, &g, &[divergence(&g, &fl).context("divergence")?, neg_lap(&g, &z)?], std::slice::from_ref(&fl))?;
    rec.holds("locality_supports_disjoint", "Coulomb gauge", Some(8), disjoint.is_disjoint(&supp) && supp.iter().all(|&x| z[x].abs() <= 1e-13));
    rec.witness("e_nonlocal", "Coulomb gauge", Some(8), lsys.e_commutator_norm(&fl, &w).context("E")?, 1e-3, SAFE_SECTORS);
    rec.bound("div_e_local", "Coulomb gauge", Some(8), lsys.div_e_commutator_norm(&z, &w).context("div E")?, 1e-11, SAFE_SECTORS);
    Ok(rec.finish())
}
