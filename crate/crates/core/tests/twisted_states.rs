mod common;

use common::*;
use twistlab::lattice::{apply_diffop, gaussian, DiffOp, Sampling, ScalarTestFunction, TwistKernel};
use twistlab::twisted::{ChargedVector, ModelConfig};
use twistlab::Complex64;

fn cut(f: Vec<f64>, tol: f64) -> Vec<f64> {
    f.into_iter().map(|v| if v.abs() > tol { v } else { 0.0 }).collect()
}

#[test]
fn determinant_form_matches_matrix() {
    let g = reference_grid();
    let gens = real_generators(&g);
    let sys = reference_system(ModelConfig::new(TwistKernel::yukawa(&g, 1.0, Sampling::Spectral).unwrap()));
    let space = sys.fermi().space();
    let mut r = rng(21);
    for trial in 0..6 {
        let s = random_test_function(&mut r, &g, &gens, 0.5);
        let a = random_wave(&mut r, &g, &[]);
        let b = random_wave(&mut r, &g, &[]);
        let omega = match trial % 3 {
            0 => ChargedVector::electron(space, &a).unwrap(),
            1 => ChargedVector::new(space, vec![space.electron(&a).unwrap(), space.positron(&b).unwrap()]).unwrap(),
            _ => ChargedVector::new(space, vec![space.electron(&a).unwrap(), space.electron(&b).unwrap()]).unwrap(),
        };
        let v = sys.charged_state_eval(&omega, &s).unwrap();
        assert!(v.difference() <= 1e-11, "{v:?}");
    }
    let omega = ChargedVector::electron(space, &random_wave(&mut r, &g, &[])).unwrap();
    assert_eq!(omega.charge(), -1);
    let one = sys.charged_state_eval(&omega, &ScalarTestFunction::zero(g.len())).unwrap();
    assert!((one.matrix - 1.0).norm() <= 1e-12 && (one.closed_form - 1.0).norm() <= 1e-12);
}

#[test]
fn localization_delta_and_constant() {
    let g = reference_grid();
    let far = cut(gaussian(&g, 12, 0.6, 1.0), 1e-3);
    let sys = system_with(&g, &[far.clone()], ModelConfig::new(TwistKernel::delta(&g)), 2, 8);
    let mut r = rng(22);
    let omega = ChargedVector::electron(sys.fermi().space(), &random_wave(&mut r, &g, &[2, 3, 4])).unwrap();
    let s = ScalarTestFunction::from_s0(far.iter().map(|v| 0.5 * v).collect());
    let rep = sys.localization_report(&omega, &s, 1e-14).unwrap();
    assert!(rep.disjoint);
    assert!(rep.difference() <= 1e-12, "{rep:?}");

    let sys = system_with(&g, &[far.clone()], ModelConfig::new(TwistKernel::constant(&g)), 2, 8);
    let rep = sys.localization_report(&omega, &s, 1e-14).unwrap();
    assert!(!rep.disjoint);
    assert!(rep.difference() > 1e-3, "{rep:?}");
}

#[test]
fn localization_p_subalgebra() {
    let g = reference_grid();
    let p = DiffOp::Helmholtz(1.0);
    let far = cut(gaussian(&g, 12, 0.6, 1.0), 1e-3);
    let sys = system_with(&g, &[apply_diffop(p, &g, &far)], ModelConfig::with_fundamental_solution(p, &g).unwrap(), 2, 8);
    let mut r = rng(23);
    let omega = ChargedVector::electron(sys.fermi().space(), &random_wave(&mut r, &g, &[2, 3, 4])).unwrap();
    let s = ScalarTestFunction::from_s0(far.iter().map(|v| 0.3 * v).collect());
    let rep = sys.localization_report_p(&omega, &s, 1e-14).unwrap();
    assert!(rep.disjoint);
    assert!(rep.difference() <= 1e-11, "{rep:?}");
    let whole = sys.localization_report(&omega, &s.apply(p, &g), 1e-14).unwrap();
    assert!(!whole.disjoint);
}

#[test]
fn npoint_matches_partition_sum() {
    let g = reference_grid();
    let gens = real_generators(&g);
    let sys = reference_system(ModelConfig::new(TwistKernel::yukawa(&g, 1.0, Sampling::Spectral).unwrap()));
    let mut r = rng(24);
    let omega = ChargedVector::electron(sys.fermi().space(), &random_wave(&mut r, &g, &[])).unwrap();
    let fields: Vec<ScalarTestFunction> = (0..4).map(|_| random_test_function(&mut r, &g, &gens, 0.5)).collect();
    for m in 1..=4 {
        let v = sys.npoint_both(&omega, &fields[..m]).unwrap();
        assert!(v.difference() <= 1e-9, "m = {m}: {v:?}");
    }
    let one = sys.npoint(&omega, &fields[..1]).unwrap();
    let w1 = sys.multiplication_moment(&omega, &[&fields[0]]).unwrap();
    assert!((one - w1).norm() <= 1e-12 && w1.norm() > 0.01, "{one} {w1}");
}

#[test]
fn odd_untwisted_moments_vanish() {
    let g = reference_grid();
    let gens = real_generators(&g);
    let sys = reference_system(ModelConfig::new(TwistKernel::zero(&g)));
    let mut r = rng(25);
    let omega = ChargedVector::electron(sys.fermi().space(), &random_wave(&mut r, &g, &[])).unwrap();
    let fields: Vec<ScalarTestFunction> = (0..3).map(|_| random_test_function(&mut r, &g, &gens, 0.5)).collect();
    assert!(sys.npoint(&omega, &fields[..1]).unwrap().norm() <= 1e-12);
    assert!(sys.npoint(&omega, &fields).unwrap().norm() <= 1e-12);
}

#[test]
fn external_potential_gap() {
    let g = reference_grid();
    let gens = real_generators(&g);
    let sys = reference_system(ModelConfig::new(TwistKernel::yukawa(&g, 1.0, Sampling::Spectral).unwrap()));
    let space = sys.fermi().space();
    let mut r = rng(26);
    let s1 = random_test_function(&mut r, &g, &gens, 0.5);
    let s2 = random_test_function(&mut r, &g, &gens, 0.5);
    let peaked = ChargedVector::electron(space, &random_wave(&mut r, &g, &[5])).unwrap();
    assert!(sys.external_potential_gap(&peaked, &s1, &s2).unwrap() <= 1e-10);
    let spread = ChargedVector::electron(space, &random_wave(&mut r, &g, &[])).unwrap();
    let s = ScalarTestFunction::from_s0(gens[1].clone());
    let gap = sys.external_potential_gap(&spread, &s, &s).unwrap();
    assert!(gap > 1e-3, "{gap:e}");

    let far = cut(gaussian(&g, 12, 0.6, 1.0), 1e-3);
    let local = system_with(&g, &[far.clone()], ModelConfig::new(TwistKernel::delta(&g)), 2, 8);
    let omega = ChargedVector::electron(local.fermi().space(), &random_wave(&mut r, &g, &[2, 3, 4])).unwrap();
    let t = ScalarTestFunction::from_s0(far);
    assert!(local.external_potential_gap(&omega, &t, &s2).unwrap() <= 1e-12);
}

#[test]
fn lebesgue_example() {
    let g = reference_grid();
    let gens = real_generators(&g);
    let sys = reference_system(ModelConfig::new(TwistKernel::constant(&g)));
    let mut r = rng(27);
    let s = random_test_function(&mut r, &g, &gens, 0.5);
    let w = random_wave(&mut r, &g, &[]);
    let rep = sys.model_lebesgue_check(&s, &w).unwrap();
    assert_eq!(rep.sign, 1.0);
    assert!(rep.worst() <= 1e-12, "{rep:?}");
    assert!(rep.difference_other_sign > 1e-3 && rep.intertwiner_other_sign > 1e-3);

    let sector0: Vec<usize> = (0..sys.fermi().dim()).filter(|&j| sys.fermi().charge(j) == 0).collect();
    let phi = sys.twisted_field(&s).unwrap();
    let bare = sys.bose().segal(&s).unwrap();
    for j in sector0 {
        assert!((phi.fermion_diagonal_block(j) - &bare).norm() <= 1e-12);
    }

    let n = g.len();
    let zero_mean: Vec<f64> = (0..n).map(|x| gens[0][x] - gens[0][(x + n / 2) % n]).collect();
    let zs = ScalarTestFunction::from_s0(zero_mean.clone());
    let shifted = system_with(&g, &[zero_mean], ModelConfig::new(TwistKernel::constant(&g)), 2, 8);
    let d = shifted.twisted_field(&zs).unwrap().sub(&shifted.bose_op(shifted.bose().segal(&zs).unwrap()));
    assert!(d.norm() <= 1e-12);
}

#[test]
fn yukawa_and_coulomb_states() {
    let g = reference_grid();
    let gens = real_generators(&g);
    let mut r = rng(28);
    for sigma in [TwistKernel::yukawa(&g, 1.0, Sampling::Spectral).unwrap(), TwistKernel::coulomb(&g, Sampling::Spectral).unwrap()] {
        let coulomb = matches!(sigma.kind(), twistlab::lattice::KernelKind::Coulomb { .. });
        let sys = reference_system(ModelConfig::new(sigma));
        let w = random_wave(&mut r, &g, &[]);
        let eval = |s: &ScalarTestFunction| {
            if coulomb { sys.model_coulomb_state(&w, s) } else { sys.model_yukawa_state(&w, s) }.unwrap()
        };
        let zero = eval(&ScalarTestFunction::zero(g.len()));
        assert!((zero.matrix - 1.0).norm() <= 1e-12 && (zero.quadrature - 1.0).norm() <= 1e-12);
        for _ in 0..5 {
            let s = random_test_function(&mut r, &g, &gens, 0.5);
            let v = eval(&s);
            assert!(v.difference() <= 1e-6, "{v:?}");
        }
    }
    let far = cut(gaussian(&g, 12, 0.6, 1.0), 1e-3);
    let local = system_with(&g, &[far.clone()], ModelConfig::new(TwistKernel::delta(&g)), 2, 8);
    let w = random_wave(&mut r, &g, &[2, 3, 4]);
    let s = ScalarTestFunction::from_s0(far.iter().map(|v| 0.4 * v).collect());
    let v = local.one_electron_state(&w, &s).unwrap();
    let bare = local.reference_value(&s).unwrap();
    assert!((v.matrix - bare).norm() <= 1e-12);
    assert!(local.model_yukawa_state(&w, &s).is_err());
    let _ = Complex64::new(0.0, 0.0);
}
