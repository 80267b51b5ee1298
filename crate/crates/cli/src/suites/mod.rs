//! Verification suites. Each is a pure function of the config.

mod bose;
mod coulomb;
mod fermi;
mod gauge;
pub mod hamiltonian;
mod lattice;
mod states;
mod twisted;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use twistlab::lattice::{Grid, ScalarTestFunction};
use twistlab::twisted::{ModelConfig, TwistedSystem};
use twistlab::Complex64;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult, Context};
use crate::record::CheckRecord;

pub use coulomb::transverse_table;

/// Run order, which is also report order.
pub const SUITES: [&str; 8] = ["lattice", "fermi", "bose", "twisted", "gauge", "states", "coulomb", "hamiltonian"];

pub struct SuiteOutcome {
    pub suite: String,
    pub records: Vec<CheckRecord>,
    pub elapsed: Duration,
}

pub fn run_suite(name: &str, cfg: &RunConfig) -> CliResult<SuiteOutcome> {
    let start = Instant::now();
    let records = match name {
        "lattice" => lattice::run(cfg),
        "fermi" => fermi::run(cfg),
        "bose" => bose::run(cfg),
        "twisted" => twisted::run(cfg),
        "gauge" => gauge::run(cfg),
        "states" => states::run(cfg),
        "coulomb" => coulomb::run(cfg),
        "hamiltonian" => hamiltonian::run(cfg),
        other => Err(CliError::UnknownSuite(other.into(), SUITES.join(", "))),
    }?;
    Ok(SuiteOutcome { suite: name.to_string(), records, elapsed: start.elapsed() })
}

/// Selected suites in canonical order, run on a pool of `cfg.jobs` threads.
pub fn run_selected(cfg: &RunConfig) -> CliResult<Vec<SuiteOutcome>> {
    cfg.validate()?;
    let names: Vec<&str> = SUITES.iter().copied().filter(|s| cfg.suites.iter().any(|x| x == s)).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    pool.install(|| names.par_iter().map(|n| run_suite(n, cfg)).collect())
}

/// Per-suite stream: the run seed mixed with the suite name and a salt.
pub fn suite_rng(cfg: &RunConfig, suite: &str, salt: u64) -> ChaCha8Rng {
    let h = suite.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    ChaCha8Rng::seed_from_u64(cfg.seed ^ h ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// s₀ + i s₁ in the span of `gens`, rescaled to norm `amp`.
pub fn random_test_function(r: &mut ChaCha8Rng, grid: &Grid, gens: &[Vec<f64>], amp: f64) -> ScalarTestFunction {
    let n = grid.len();
    let mut s0 = vec![0.0; n];
    let mut s1 = vec![0.0; n];
    for g in gens {
        let a: f64 = r.random_range(-1.0..1.0);
        let b: f64 = r.random_range(-1.0..1.0);
        for x in 0..n {
            s0[x] += a * g[x];
            s1[x] += b * g[x];
        }
    }
    let s = ScalarTestFunction::new(s0, s1).expect("finite");
    let norm = s.norm(grid);
    s.scaled(amp / norm)
}

/// Normalized electron wave function with D·N entries, nonzero on `sites` (all if empty).
pub fn random_wave(r: &mut ChaCha8Rng, grid: &Grid, internal: usize, sites: &[usize]) -> Vec<Complex64> {
    let n = grid.len();
    let mut w: Vec<Complex64> = (0..internal * n)
        .map(|m| {
            let z = Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
            if sites.is_empty() || sites.contains(&(m % n)) { z } else { Complex64::new(0.0, 0.0) }
        })
        .collect();
    let norm = (grid.cell_volume() * w.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt();
    w.iter_mut().for_each(|z| *z /= norm);
    w
}

pub fn random_real(r: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| r.random_range(-1.0..1.0)).collect()
}

/// Zero below `tol` in absolute value.
pub fn cut(f: Vec<f64>, tol: f64) -> Vec<f64> {
    f.into_iter().map(|v| if v.abs() > tol { v } else { 0.0 }).collect()
}

pub fn system(cfg: &RunConfig, grid: &Grid, gens: &[Vec<f64>], model: ModelConfig) -> CliResult<TwistedSystem> {
    let c: Vec<Vec<Complex64>> = gens.iter().map(|g| g.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
    TwistedSystem::from_parts(grid, cfg.internal_dim, cfg.f_max, &c, cfg.n_max, model).context("twisted system")
}

pub fn reference_system(cfg: &RunConfig, model: ModelConfig) -> CliResult<TwistedSystem> {
    let grid = cfg.grid.build()?;
    system(cfg, &grid, &cfg.generator_fields(&grid), model)
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn diff_norm(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}
