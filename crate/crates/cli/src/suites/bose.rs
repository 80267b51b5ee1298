use twistlab::bose::{BosonField, BosonModeBasis};
use twistlab::lattice::symplectic_form;
use twistlab::twisted::masked_dense_norm;
use twistlab::Complex64;

use super::{random_test_function, suite_rng};
use crate::config::RunConfig;
use crate::error::{CliResult, Context};
use crate::record::{worst, CheckRecord, Recorder, ALL_SECTORS, INTERIOR_SHELLS};

const CONVENTIONS: &[&str] = &["segal field (b + b*)/sqrt(2)", "cocycle W(s)W(t) = e^{+iη/2}W(s+t)", "truncated exponential"];

/// Amplitude used for the cocycle, where truncation error stays below round-off.
const COCYCLE_AMPLITUDE: f64 = 0.05;

/// Errors below this are not resolved.
const ROUND_OFF: f64 = 1e-13;

pub fn run(cfg: &RunConfig) -> CliResult<Vec<CheckRecord>> {
    let mut rec = Recorder::new("bose", cfg, CONVENTIONS);
    let g = cfg.grid.build()?;
    let gens = cfg.generator_fields(&g);
    let c: Vec<Vec<Complex64>> = gens.iter().map(|v| v.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
    let basis = BosonModeBasis::from_generators(&g, &c, 1e-10).context("mode basis")?;
    let field = BosonField::new(basis.clone(), cfg.n_max);
    let fock = field.fock();
    let interior = fock.shell_mask(cfg.n_max - 1);
    let mut r = suite_rng(cfg, "bose", 0);
    let amp = cfg.amplitude;

    let mut ccr = Vec::new();
    let mut num = Vec::new();
    for _ in 0..cfg.draws.min(6) {
        let f = random_test_function(&mut r, &g, &gens, amp).complexified();
        let h = random_test_function(&mut r, &g, &gens, amp).complexified();
        let b = field.annihilation(&f).context("annihilation")?;
        let bd = field.creation(&h).context("creation")?;
        let cf = basis.coefficients(&f).context("coefficients")?;
        let ch = basis.coefficients(&h).context("coefficients")?;
        let inner: Complex64 = cf.iter().zip(&ch).map(|(x, y)| x.conj() * y).sum();
        let comm = &b * &bd - &bd * &b - field.identity() * inner;
        ccr.push(masked_dense_norm(&comm, Some(&interior)));
        let b2 = field.annihilation(&h).context("annihilation")?;
        ccr.push(masked_dense_norm(&(&b * &b2 - &b2 * &b), Some(&interior)));
        let nb = field.number();
        let bb = b.adjoint() * &b;
        num.push((&nb * &bb - &bb * &nb).norm());
    }
    rec.bound("ccr", "canonical commutation", Some(1), worst(ccr), 1e-12, INTERIOR_SHELLS);
    rec.bound("number_commutes", "canonical commutation", None, worst(num), 1e-13, ALL_SECTORS);

    let mut cocycle = Vec::new();
    let mut unitary = Vec::new();
    for _ in 0..cfg.draws.min(6) {
        let s = random_test_function(&mut r, &g, &gens, COCYCLE_AMPLITUDE);
        let t = random_test_function(&mut r, &g, &gens, COCYCLE_AMPLITUDE);
        let eta = symplectic_form(&s, &t, &g).context("symplectic form")?;
        let ws = field.weyl(&s).context("weyl")?;
        let d = &ws * field.weyl(&t).context("weyl")? - field.weyl(&s.add(&t)).context("weyl")? * Complex64::from_polar(1.0, eta / 2.0);
        cocycle.push(masked_dense_norm(&d, Some(&fock.shell_mask(1))));
        unitary.push((ws.adjoint() * &ws - field.identity()).norm());
        unitary.push((&ws * field.weyl(&s.neg()).context("weyl")? - field.identity()).norm());
    }
    rec.bound("weyl_cocycle", "Weyl relations", Some(1), worst(cocycle), 1e-12, "boson shells ≤ 1, ‖s‖ = 0.05");
    rec.bound("weyl_unitary", "Weyl relations", Some(1), worst(unitary), 1e-12, ALL_SECTORS);

    // vacuum expectation against e^{−¼‖f‖²} for N_max = 2..=8
    let s = random_test_function(&mut r, &g, &gens, amp.min(0.5));
    let exact = (-0.25 * s.norm(&g).powi(2)).exp();
    let errors: Vec<f64> = (2..=8)
        .map(|n_max| {
            let f = BosonField::new(basis.clone(), n_max);
            Ok((f.weyl(&s).context("weyl")?[(0, 0)] - exact).norm())
        })
        .collect::<CliResult<_>>()?;
    // ratios e(N+2)/e(N), only while both sit above round-off
    let live: Vec<f64> = errors.iter().copied().take_while(|&e| e > ROUND_OFF).collect();
    let ratios: Vec<f64> = live.windows(3).map(|w| w[2] / w[0]).collect();
    let converging = live.len() >= 4 && live.windows(2).all(|w| w[1] < w[0]) && ratios.windows(2).all(|w| w[1] < w[0]);
    rec.holds("characteristic_convergence", "Fock vacuum", None, converging);
    rec.bound("characteristic_value", "Fock vacuum", None, errors[errors.len() - 1], 1e-8, "N_max = 8");
    Ok(rec.finish())
}
