mod common;

use common::{complexify, random_test_function, real_generators, reference_grid, rng};
use twistlab::bose::{BosonField, BosonModeBasis};
use twistlab::lattice::symplectic_form;
use twistlab::Complex64;

/// ‖(W(s)W(t) − e^{iη/2}W(s+t))Ω_b‖ at truncation `n_max`.
fn vacuum_cocycle(n_max: usize, amp: f64, seed: u64) -> f64 {
    let g = reference_grid();
    let gens = real_generators(&g);
    let field = BosonField::new(BosonModeBasis::from_generators(&g, &complexify(&gens), 1e-10).unwrap(), n_max);
    let mut r = rng(seed);
    let s = random_test_function(&mut r, &g, &gens, amp);
    let t = random_test_function(&mut r, &g, &gens, amp);
    let eta = symplectic_form(&s, &t, &g).unwrap();
    let d = field.weyl(&s).unwrap() * field.weyl(&t).unwrap()
        - field.weyl(&s.add(&t)).unwrap() * Complex64::from_polar(1.0, eta / 2.0);
    d.column(0).norm()
}

#[test]
fn truncation_sweep() {
    let rows: Vec<(usize, f64)> = (6..=12).map(|n| (n, vacuum_cocycle(n, 0.5, 3))).collect();
    for (n, e) in &rows {
        println!("N_max {n:>2}  vacuum cocycle {e:.2e}");
    }
    assert!(rows.windows(2).all(|w| w[1].1 < w[0].1));
    let first = rows.iter().find(|(_, e)| *e < 1e-8).map(|(n, _)| *n);
    assert!(first.is_some_and(|n| n <= 12), "{rows:?}");
}

#[test]
fn small_amplitude_meets_bound_at_eight() {
    assert!(vacuum_cocycle(8, 0.1, 3) < 1e-8);
}
