use rand::Rng;
use twistlab::hamiltonian::{
    gaussian_packet, hmu_scalar, momentum_transfer_demo, one_electron_consistency, pair_oracle_residual, two_fermion_mu,
    uv_divergence_scan, w_sym, CutoffFunction, DemoParams, DemoReport, MomentumGrid, MuChoice, OneFermionBosonSpace,
    ScanReport,
};
use twistlab::Complex64;

use super::{random_wave, suite_rng};
use crate::config::{ChoiceConfig, RunConfig};
use crate::error::{CliResult, Context};
use crate::record::{worst, CheckRecord, Recorder, ALL_SECTORS};

const CONVENTIONS: &[&str] = &[
    "interaction term carries 2^{-1/2}",
    "σ̂ = 4π/ϖ²",
    "boson vacuum and single electron",
];

pub fn choice(cfg: &RunConfig) -> MuChoice {
    match cfg.hamiltonian.choice {
        ChoiceConfig::Standard => MuChoice::Standard,
        ChoiceConfig::Mirrored => MuChoice::Mirrored,
    }
}

pub fn momentum_grid(cfg: &RunConfig) -> CliResult<MomentumGrid> {
    let h = &cfg.hamiltonian;
    MomentumGrid::new(h.grid.build()?, h.mass).context("momentum grid")
}

pub fn cutoff(cfg: &RunConfig, mg: &MomentumGrid, center: usize) -> CliResult<CutoffFunction> {
    let h = &cfg.hamiltonian;
    CutoffFunction::gaussian(mg, center, h.cutoff_width * mg.grid().dk(), h.cut).context("cutoff")
}

pub fn demo(cfg: &RunConfig) -> CliResult<DemoReport> {
    let h = &cfg.hamiltonian;
    let mg = momentum_grid(cfg)?;
    let dk = mg.grid().dk();
    let p = DemoParams {
        k_bullet: h.k_bullet,
        k_e: h.k_e,
        cutoff_width: h.cutoff_width * dk,
        packet_width: h.packet_width * dk,
        cut: h.cut,
        n_max: h.n_max,
    };
    momentum_transfer_demo(&mg, &p).context("momentum transfer demo")
}

/// Scans for p = 2, 3, 4 on the scan grid.
pub fn scans(cfg: &RunConfig) -> CliResult<Vec<ScanReport>> {
    let s = &cfg.scan;
    let g = s.grid.build()?;
    let mg = MomentumGrid::new(g.clone(), s.mass * g.dk()).context("momentum grid")?;
    let radii = s.radii(g.dk());
    (2..=4).map(|p| uv_divergence_scan(&mg, p, &radii).context("divergence scan")).collect()
}

pub fn run(cfg: &RunConfig) -> CliResult<Vec<CheckRecord>> {
    let mut rec = Recorder::new("hamiltonian", cfg, CONVENTIONS);
    let mg = momentum_grid(cfg)?;
    let n = mg.len();
    let n_max = cfg.hamiltonian.n_max;
    let mut r = suite_rng(cfg, "hamiltonian", 0);
    let centers = [0, cfg.hamiltonian.k_bullet % n, (n / 3).max(1)];

    let mut action = Vec::new();
    let mut bare = Vec::new();
    let mut hmu = Vec::new();
    let mut scalar = Vec::new();
    let mut sa = Vec::new();
    for &c in &centers {
        let g = cutoff(cfg, &mg, c)?;
        for ch in [MuChoice::Standard, MuChoice::Mirrored] {
            let sp = OneFermionBosonSpace::for_cutoff(mg.clone(), &g, n_max, ch).context("space")?;
            let w = random_wave(&mut r, mg.grid(), 1, &[]);
            let rep = sp.action_report(&g, &w).context("action")?;
            action.push(rep.residual / rep.norm.max(1.0));
            bare.push(rep.residual_without_factor);
            let (a, b) = sp.hmu_commutators(&g).context("commutators")?;
            hmu.push(a.max(b));
            scalar.push(sp.hmu_scalar_residual(&g));
            sa.push(sp.build(&g).context("terms")?.selfadjoint_defect());
        }
    }
    rec.bound("action", "Hamiltonian action", Some(9), worst(action), 1e-10, ALL_SECTORS);
    rec.witness("action_needs_factor", "Hamiltonian action", None, bare.into_iter().fold(f64::INFINITY, f64::min), 1e-3, ALL_SECTORS);
    rec.bound("hmu_commutators", "scalar term", Some(9), worst(hmu), 1e-11, ALL_SECTORS);
    rec.bound("hmu_scalar", "scalar term", None, worst(scalar), 1e-12, ALL_SECTORS);
    rec.bound("selfadjoint", "Hamiltonian action", None, worst(sa), 1e-12, ALL_SECTORS);

    let zero = CutoffFunction::zero(&mg);
    let zsp = OneFermionBosonSpace::new(mg.clone(), vec![0, 1], 2, choice(cfg)).context("space")?;
    let zrep = zsp.action_report(&zero, &gaussian_packet(&mg, n / 4, 0.5)).context("action")?;
    rec.bound("zero_cutoff", "Hamiltonian action", None, zsp.build(&zero).context("terms")?.total.norm().max(zrep.norm), 0.0, ALL_SECTORS);

    let g = cutoff(cfg, &mg, cfg.hamiltonian.k_bullet % n)?;
    let sp = OneFermionBosonSpace::for_cutoff(mg.clone(), &g, n_max, choice(cfg)).context("space")?;
    rec.witness("number_changing", "Hamiltonian action", None, sp.number_commutator_norm(&g).context("number")?, 1e-3, ALL_SECTORS);
    let gp = CutoffFunction::new(g.values().iter().enumerate().map(|(k, v)| v * (1.0 + 0.1 * k as f64)).collect()).context("cutoff")?;
    let dc = sp.density_commutator(&gp, &g).context("density commutator")?;
    rec.bound("density_commutator", "density commutator", None, dc.residual / dc.norm.max(1.0), 1e-10, ALL_SECTORS);
    rec.witness("density_commutator_alternative", "density commutator", None, dc.residual_alternative, 1e-3, ALL_SECTORS);

    let dk = mg.grid().dk();
    let flat: Vec<f64> = (0..6).map(|i| hmu_scalar(&mg, &CutoffFunction::flat(&mg, i as f64 * dk))).collect();
    rec.holds("hmu_monotone", "scalar term", None, flat.windows(2).all(|p| p[1] > p[0]));

    let mut cont = Vec::new();
    for _ in 0..cfg.draws {
        let w = random_wave(&mut r, mg.grid(), 1, &[]);
        let rep = mg.continuity_check(r.random_range(0..n), r.random_range(0..n), &w).context("continuity")?;
        cont.push(rep.lhs - rep.bound * (1.0 + 1e-12));
    }
    rec.bound("continuity", "strong continuity", None, worst(cont).max(0.0), 0.0, ALL_SECTORS);

    let mut pair = Vec::new();
    for _ in 0..3 {
        let w1 = random_wave(&mut r, mg.grid(), 1, &[2, 3, 4]);
        let w2 = random_wave(&mut r, mg.grid(), 1, &[n / 2 + 1, n / 2 + 2]);
        let s0: Vec<f64> = (0..n).map(|_| r.random_range(-0.5..0.5)).collect();
        pair.push(pair_oracle_residual(&mg, &w1, &w2, &s0).context("pair")?);
        pair.push(one_electron_consistency(&mg, &w1, &s0).context("pair")?);
        let s = w_sym(&w1, &w2);
        pair.push((&s - s.transpose()).norm());
    }
    rec.bound("pair_oracle", "two-fermion density", None, worst(pair), 1e-10, ALL_SECTORS);
    let f = nalgebra::DMatrix::from_fn(n, n, |_, _| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)));
    rec.bound("zero_momenta_cancel", "two-fermion density", None, two_fermion_mu(&mg, 0, 0, &f).norm(), 1e-12, ALL_SECTORS);

    let d = demo(cfg)?;
    rec.witness("demo_overlap", "momentum transfer", Some(9), d.overlap, 0.99, ALL_SECTORS);
    rec.bound("demo_ratio", "momentum transfer", Some(9), d.ratio_error_bare(), 0.05, ALL_SECTORS);
    rec.bound("demo_ratio_with_factor", "momentum transfer", None, d.ratio_error(), 0.05, ALL_SECTORS);

    let s = scans(cfg)?;
    rec.witness("scan_p2_linear_r2", "UV divergence", Some(9), s[0].linear.r2, 0.99, ALL_SECTORS);
    rec.witness("scan_p3_log_r2", "UV divergence", Some(9), s[1].log.r2, 0.99, ALL_SECTORS);
    rec.bound("scan_p4_increment", "UV divergence", Some(9), s[2].cauchy_increment, 0.01, ALL_SECTORS);
    Ok(rec.finish())
}
