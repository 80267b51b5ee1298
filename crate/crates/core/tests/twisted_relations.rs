mod common;

use common::*;
use twistlab::lattice::{DiffOp, Sampling, ScalarTestFunction, SiteSet, SpectralMask, TwistKernel};
use twistlab::twisted::{ModelConfig, TwistedSystem};
use twistlab::Complex64;

fn kernels(g: &twistlab::lattice::Grid) -> Vec<TwistKernel> {
    let mut r = rng(99);
    let tab: Vec<f64> = {
        use rand::Rng;
        let half: Vec<f64> = (0..g.len()).map(|_| r.random_range(-1.0..1.0)).collect();
        (0..g.len()).map(|x| 0.5 * (half[x] + half[g.reflect(x)])).collect()
    };
    vec![
        TwistKernel::delta(g),
        TwistKernel::constant(g),
        TwistKernel::yukawa(g, 1.0, Sampling::Spectral).unwrap(),
        TwistKernel::yukawa(g, 1.0, Sampling::Pointwise).unwrap(),
        TwistKernel::coulomb(g, Sampling::Spectral).unwrap(),
        TwistKernel::tabulated(g, tab).unwrap(),
    ]
}

#[test]
fn twisted_relation_all_kernels_random_draws() {
    let g = reference_grid();
    let gens = real_generators(&g);
    for (k, sigma) in kernels(&g).into_iter().enumerate() {
        let sys = reference_system(ModelConfig::new(sigma));
        let mut r = rng(100 + k as u64);
        for _ in 0..20 {
            let s = random_test_function(&mut r, &g, &gens, 0.5);
            let w = random_wave(&mut r, &g, &[]);
            let res = sys.verify_twisted_weyl_relation(&s, &w).unwrap();
            assert!(res <= 1e-11, "{} twisted relation {res:e}", sys.sigma().name());
            let v = sys.fermi().space().electron(&w).unwrap();
            let inf = sys.verify_infinitesimal(&s, &w, &v).unwrap();
            assert!(inf.field <= 1e-11 && inf.selfdual <= 1e-11, "{} {inf:?}", sys.sigma().name());
        }
    }
}

#[test]
fn sector_shift_holds() {
    let g = reference_grid();
    let gens = real_generators(&g);
    let sys = reference_system(ModelConfig::new(TwistKernel::yukawa(&g, 1.0, Sampling::Spectral).unwrap()));
    let mut r = rng(3);
    let s = random_test_function(&mut r, &g, &gens, 0.5);
    let w = random_wave(&mut r, &g, &[]);
    assert!(sys.verify_sector_shift(&s, &w).unwrap() <= 1e-11);
}

#[test]
fn delta_disjoint_supports_commute() {
    let g = reference_grid();
    let gens = vec![twistlab::lattice::gaussian(&g, 12, 0.5, 1.0).iter().map(|v| if *v > 1e-3 { *v } else { 0.0 }).collect::<Vec<_>>()];
    let sys = system_with(&g, &gens, ModelConfig::new(TwistKernel::delta(&g)), 2, 8);
    let s = ScalarTestFunction::from_s0(gens[0].iter().map(|v| 0.4 * v).collect());
    let mut r = rng(4);
    let w = random_wave(&mut r, &g, &[1, 2, 3]);
    assert!(sys.verify_twisted_weyl_relation(&s, &w).unwrap() <= 1e-12);
    let wl = sys.twisted_weyl(&s).unwrap();
    let comm = wl.commutator(&sys.psi(&w).unwrap()).norm_cols(&sys.safe_domain());
    assert!(comm <= 1e-12, "{comm:e}");
}

#[test]
fn zero_kernel_untwists() {
    let g = reference_grid();
    let gens = real_generators(&g);
    let sys = reference_system(ModelConfig::new(TwistKernel::zero(&g)));
    let mut r = rng(5);
    let s = random_test_function(&mut r, &g, &gens, 0.5);
    let w = random_wave(&mut r, &g, &[]);
    let comm = sys.twisted_weyl(&s).unwrap().commutator(&sys.psi(&w).unwrap()).norm_cols(&sys.safe_domain());
    assert!(comm <= 1e-12);
}

#[test]
fn delta_commutator_is_local_multiplication() {
    let g = reference_grid();
    let gens = real_generators(&g);
    let sys = reference_system(ModelConfig::new(TwistKernel::delta(&g)));
    let mut r = rng(6);
    let s = random_test_function(&mut r, &g, &gens, 0.5);
    let w = random_wave(&mut r, &g, &[]);
    let v = sys.fermi().space().electron(&w).unwrap();
    assert!(sys.verify_infinitesimal(&s, &w, &v).unwrap().field <= 1e-12);
}

#[test]
fn constant_action_on_support() {
    let g = reference_grid();
    let gens = real_generators(&g);
    let sys = reference_system(ModelConfig::new(TwistKernel::constant(&g)));
    let mut r = rng(8);
    let s = random_test_function(&mut r, &g, &gens, 0.5);
    let w = random_wave(&mut r, &g, &[]);
    let c = s.integral_s0(&g);
    assert!(sys.scalar_action_residual(&s, &w, c).unwrap() <= 1e-12);
}

#[test]
fn weyl_identities() {
    let g = reference_grid();
    let gens = real_generators(&g);
    let sys = reference_system(ModelConfig::new(TwistKernel::yukawa(&g, 1.0, Sampling::Spectral).unwrap()));
    let mut r = rng(9);
    let s = random_test_function(&mut r, &g, &gens, 0.5);
    let t = random_test_function(&mut r, &g, &gens, 0.5);
    let zero = ScalarTestFunction::zero(g.len());
    assert!(sys.twisted_weyl(&zero).unwrap().sub(&sys.identity()).norm() <= 1e-13);
    assert!(sys.inverse_residual(&s).unwrap() <= 1e-11);
    assert!(sys.vacuum_restriction_residual(&s).unwrap() <= 1e-13);
    assert!(sys.field_commutator_residual(&s, &t).unwrap() <= 1e-11);
    let c = sys.cocycle_residual(&s.scaled(0.1), &t.scaled(0.1), 1).unwrap();
    assert!(c <= 1e-12, "cocycle {c:e}");
    let states: Vec<usize> = (0..sys.fermi().dim()).step_by(37).collect();
    assert!(sys.exp_consistency(&s, &states).unwrap() <= 1e-10);
    let (n, q) = sys.conservation_residuals(&s).unwrap();
    assert!(n <= 1e-12 && q <= 1e-12);
    assert!(sys.annihilates_vacuum(&s).unwrap() <= 1e-13);
    assert!(sys.one_electron_mu_residual(&s).unwrap() <= 1e-12);
}

fn gauge_system(p: DiffOp, gens: &[Vec<f64>]) -> TwistedSystem {
    let g = reference_grid();
    let all: Vec<Vec<f64>> = gens.iter().map(|f| twistlab::lattice::apply_diffop(p, &g, f)).collect();
    system_with(&g, &all, ModelConfig::with_fundamental_solution(p, &g).unwrap(), 2, 8)
}

#[test]
fn gauge_generator_helmholtz_and_laplacian() {
    let g = reference_grid();
    let mask = SpectralMask::mean_zero(&g);
    for p in [DiffOp::Helmholtz(1.0), DiffOp::NegLaplacian] {
        let base: Vec<Vec<f64>> = real_generators(&g).iter().map(|f| mask.project(&g, f)).collect();
        let sys = gauge_system(p, &base);
        let mut r = rng(11);
        for _ in 0..5 {
            let s = random_test_function(&mut r, &g, &base, 0.5);
            let w = random_wave(&mut r, &g, &[]);
            let res = sys.verify_gauge(&s, &w).unwrap();
            assert!(res.commutator <= 1e-10 && res.exponentiated <= 1e-10, "{p:?} {res:?}");
        }
    }
}

#[test]
fn bump_detects_charge_and_disjoint_commutes() {
    let g = reference_grid();
    let region: SiteSet = [6, 7, 8].into_iter().collect();
    let mask = SpectralMask::mean_zero(&g);
    let bump = mask.bump(&g, &region).unwrap();
    let p = DiffOp::Helmholtz(1.0);
    let sys = gauge_system(p, &[bump.clone()]);
    let mut r = rng(12);
    let w = random_wave(&mut r, &g, &[6, 7, 8]);
    let s = ScalarTestFunction::from_s0(bump);
    assert!(sys.charge_detection_residual(&s, &w).unwrap() <= 1e-10);

    let far = twistlab::lattice::gaussian(&g, 14, 0.4, 1.0).iter().map(|v| if *v > 1e-2 { *v } else { 0.0 }).collect::<Vec<_>>();
    let sys = gauge_system(p, &[far.clone()]);
    let w = random_wave(&mut r, &g, &[5, 6, 7]);
    let c = sys.gauge_commutator_norm(&ScalarTestFunction::from_s0(far.iter().map(|v| 0.4 * v).collect()), &w).unwrap();
    assert!(c <= 1e-12, "{c:e}");
}

#[test]
fn missing_diffop_is_an_error() {
    let g = reference_grid();
    let sys = reference_system(ModelConfig::new(TwistKernel::delta(&g)));
    assert!(sys.gauge_generator(&ScalarTestFunction::zero(g.len())).is_err());
}

#[test]
fn mismatched_fundamental_solution_rejected() {
    let g = reference_grid();
    let model = ModelConfig { sigma: TwistKernel::delta(&g), diffop: Some(DiffOp::Helmholtz(1.0)) };
    let r = TwistedSystem::from_parts(&g, 1, 2, &complexify(&real_generators(&g)), 4, model);
    assert!(r.is_err());
}

#[test]
fn translation_covariance() {
    let g = reference_grid();
    let n = g.len();
    let fourier: Vec<Vec<Complex64>> = [0i64, 1, -1]
        .iter()
        .map(|&k| (0..n).map(|x| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 * x as f64 / n as f64)).collect())
        .collect();
    let sigma = TwistKernel::yukawa(&g, 1.0, Sampling::Spectral).unwrap();
    let sys = TwistedSystem::from_parts(&g, 1, 2, &fourier, 8, ModelConfig::new(sigma)).unwrap();
    let s0: Vec<f64> = (0..n).map(|x| 0.1 + 0.15 * (2.0 * std::f64::consts::PI * x as f64 / n as f64).cos()).collect();
    let s1: Vec<f64> = (0..n).map(|x| 0.12 * (2.0 * std::f64::consts::PI * x as f64 / n as f64).sin()).collect();
    let s = ScalarTestFunction::new(s0, s1).unwrap();
    assert!(sys.translation_covariance_check(&s, &[0]).unwrap() <= 1e-12);
    assert!(sys.translation_covariance_check(&s, &[n as i64]).unwrap() <= 1e-12);
    let res = sys.translation_covariance_check(&s, &[3]).unwrap();
    assert!(res <= 1e-10, "{res:e}");

    let gens = real_generators(&g);
    let local = reference_system(ModelConfig::new(TwistKernel::delta(&g)));
    let _ = gens;
    assert!(local.translation_covariance_check(&s, &[1]).is_err());
}
