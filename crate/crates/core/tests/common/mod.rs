#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twistlab::lattice::{gaussian, Grid, ScalarTestFunction};
use twistlab::twisted::{ModelConfig, TwistedSystem};
use twistlab::Complex64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// dim 1, n 16, Δx 0.5.
pub fn reference_grid() -> Grid {
    Grid::new(1, 16, 0.5).unwrap()
}

pub fn real_generators(grid: &Grid) -> Vec<Vec<f64>> {
    let n = grid.len();
    vec![gaussian(grid, n / 4, 1.0, 1.0), gaussian(grid, n / 2, 0.7, 1.0), gaussian(grid, 3 * n / 4, 1.2, 1.0)]
}

pub fn complexify(gens: &[Vec<f64>]) -> Vec<Vec<Complex64>> {
    gens.iter().map(|g| g.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect()
}

pub fn system_with(grid: &Grid, gens: &[Vec<f64>], model: ModelConfig, f_max: usize, n_max: usize) -> TwistedSystem {
    TwistedSystem::from_parts(grid, 1, f_max, &complexify(gens), n_max, model).unwrap()
}

pub fn reference_system(model: ModelConfig) -> TwistedSystem {
    let g = reference_grid();
    system_with(&g, &real_generators(&g), model, 2, 8)
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
    let s = ScalarTestFunction::new(s0, s1).unwrap();
    let norm = s.norm(grid);
    s.scaled(amp / norm)
}

/// Normalized complex wave function on `sites` (all sites if empty).
pub fn random_wave(r: &mut ChaCha8Rng, grid: &Grid, sites: &[usize]) -> Vec<Complex64> {
    let n = grid.len();
    let mut w: Vec<Complex64> = (0..n)
        .map(|x| {
            if sites.is_empty() || sites.contains(&x) {
                Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let norm = (grid.cell_volume() * w.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt();
    w.iter_mut().for_each(|z| *z /= norm);
    w
}
