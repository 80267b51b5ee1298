use twistlab::lattice::{apply_diffop, gaussian, DiffOp, KernelKind, Sampling, ScalarTestFunction, TwistKernel};
use twistlab::twisted::{ChargedVector, ModelConfig};

use super::{cut, random_test_function, random_wave, reference_system, suite_rng, system};
use crate::config::RunConfig;
use crate::error::{CliResult, Context};
use crate::record::{worst, CheckRecord, Recorder, ALL_SECTORS};

const CONVENTIONS: &[&str] = &["charged functional: determinant form", "electron charge -1", "one-electron state built directly"];

pub fn run(cfg: &RunConfig) -> CliResult<Vec<CheckRecord>> {
    let mut rec = Recorder::new("states", cfg, CONVENTIONS);
    let g = cfg.grid.build()?;
    let n = g.len();
    let d = cfg.internal_dim;
    let gens = cfg.generator_fields(&g);
    let amp = cfg.amplitude;
    let mut r = suite_rng(cfg, "states", 0);
    let yukawa = || TwistKernel::yukawa(&g, 1.0, Sampling::Spectral).context("yukawa");
    let sys = reference_system(cfg, ModelConfig::new(yukawa()?))?;
    let space = sys.fermi().space().clone();

    let mut det = Vec::new();
    for trial in 0..6 {
        let s = random_test_function(&mut r, &g, &gens, amp);
        let a = space.electron(&random_wave(&mut r, &g, d, &[])).context("electron")?;
        let b = random_wave(&mut r, &g, d, &[]);
        let factors = match (trial % 3, cfg.f_max) {
            (0, _) | (_, 1) => vec![a],
            (1, _) => vec![a, space.positron(&b).context("positron")?],
            _ => vec![a, space.electron(&b).context("electron")?],
        };
        let omega = ChargedVector::new(&space, factors).context("charged vector")?;
        det.push(sys.charged_state_eval(&omega, &s).context("charged state")?.difference());
    }
    rec.bound("determinant_form", "charged states", Some(4), worst(det), 1e-11, ALL_SECTORS);

    // localization on constructed disjoint supports
    let far = cut(gaussian(&g, 3 * n / 4, 0.6, 1.0), 1e-3);
    let near = [n / 8, n / 8 + 1, n / 8 + 2];
    let local = system(cfg, &g, std::slice::from_ref(&far), ModelConfig::new(TwistKernel::delta(&g)))?;
    let omega = ChargedVector::electron(local.fermi().space(), &random_wave(&mut r, &g, d, &near)).context("electron")?;
    let s = ScalarTestFunction::from_s0(far.iter().map(|v| 0.5 * v).collect());
    let rep = local.localization_report(&omega, &s, 1e-14).context("localization")?;
    rec.holds("localization_disjoint", "charged-state localization", Some(4), rep.disjoint);
    rec.bound("localization_delta", "charged-state localization", Some(4), rep.difference(), 1e-11, ALL_SECTORS);

    let p = DiffOp::Helmholtz(1.0);
    let psys = system(cfg, &g, &[apply_diffop(p, &g, &far)], ModelConfig::with_fundamental_solution(p, &g).context("fundamental solution")?)?;
    let ps = ScalarTestFunction::from_s0(far.iter().map(|v| 0.3 * v).collect());
    let prep = psys.localization_report_p(&omega, &ps, 1e-14).context("localization")?;
    rec.holds("localization_p_disjoint", "charged-state localization", Some(4), prep.disjoint);
    rec.bound("localization_p", "charged-state localization", Some(4), prep.difference(), 1e-11, ALL_SECTORS);

    let csys = system(cfg, &g, std::slice::from_ref(&far), ModelConfig::new(TwistKernel::constant(&g)))?;
    let crep = csys.localization_report(&omega, &s, 1e-14).context("localization")?;
    rec.witness("constant_nonlocal", "charged-state localization", Some(4), crep.difference(), 1e-3, ALL_SECTORS);

    // non-equivalence and external potential
    let fields: Vec<ScalarTestFunction> = (0..4).map(|_| random_test_function(&mut r, &g, &gens, amp)).collect();
    let spread = ChargedVector::electron(&space, &random_wave(&mut r, &g, d, &[])).context("electron")?;
    let w1 = sys.multiplication_moment(&spread, &[&fields[0]]).context("moment")?;
    rec.witness("one_point_nonzero", "non-equivalence", Some(5), w1.norm(), 0.01, ALL_SECTORS);
    let s_ext = ScalarTestFunction::from_s0(gens[1 % gens.len()].clone());
    let gap = sys.external_potential_gap(&spread, &s_ext, &s_ext).context("gap")?;
    rec.witness("external_potential_gap", "external potential", Some(5), gap, 1e-3, ALL_SECTORS);
    let peaked = ChargedVector::electron(&space, &random_wave(&mut r, &g, d, &[n / 2])).context("electron")?;
    let pg = sys.external_potential_gap(&peaked, &fields[0], &fields[1]).context("gap")?;
    rec.bound("single_site_gap", "external potential", None, pg, 1e-10, ALL_SECTORS);

    // m-point functions
    let mut np = Vec::new();
    for m in 1..=4.min(cfg.n_max) {
        np.push(sys.npoint_both(&spread, &fields[..m]).context("npoint")?.difference());
    }
    rec.bound("npoint_oracle", "m-point decomposition", Some(6), worst(np), 1e-9, ALL_SECTORS);
    let zsys = reference_system(cfg, ModelConfig::new(TwistKernel::zero(&g)))?;
    let odd = worst([1usize, 3].iter().map(|&m| zsys.npoint(&spread, &fields[..m]).map(|z| z.norm()).unwrap_or(f64::NAN)));
    rec.bound("odd_moments_vanish", "m-point decomposition", Some(6), odd, 1e-12, ALL_SECTORS);

    // Yukawa and Coulomb states
    for sigma in [yukawa()?, TwistKernel::coulomb(&g, Sampling::Spectral).context("coulomb")?] {
        let coulomb = matches!(sigma.kind(), KernelKind::Coulomb { .. });
        let ksys = reference_system(cfg, ModelConfig::new(sigma))?;
        let w = random_wave(&mut r, &g, d, &[]);
        let mut diffs = Vec::new();
        for _ in 0..5 {
            let s = random_test_function(&mut r, &g, &gens, amp);
            let v = if coulomb { ksys.model_coulomb_state(&w, &s) } else { ksys.model_yukawa_state(&w, &s) }.context("state")?;
            diffs.push(v.difference());
        }
        let name = if coulomb { "coulomb_state" } else { "yukawa_state" };
        rec.bound(name, "charged-state examples", Some(7), worst(diffs), 1e-6, ALL_SECTORS);
    }
    Ok(rec.finish())
}
