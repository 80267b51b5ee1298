use proptest::prelude::*;
use twistlab::bose::{BosonField, BosonModeBasis};
use twistlab::coulomb::{divergence, eta_tr, transverse_projector, VectorTestFunction};
use twistlab::fermi::{FermionFockSpace, OneParticleSpace};
use twistlab::hamiltonian::{hmu_scalar, CutoffFunction, MomentumGrid, MuChoice, OneFermionBosonSpace};
use twistlab::lattice::{fft, symplectic_form, Grid, ScalarTestFunction};
use twistlab::Complex64;

fn reals(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n)
}

fn complexes(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)), n)
}

fn plane() -> Grid {
    Grid::new(2, 8, 0.5).unwrap()
}

fn line() -> Grid {
    Grid::new(1, 4, 0.5).unwrap()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn projector_idempotent_and_divergence_free(f in reals(128)) {
        let g = plane();
        let p = transverse_projector(&g, &f).unwrap();
        let pp = transverse_projector(&g, &p).unwrap();
        prop_assert!(dist(&p, &pp) <= 1e-12);
        let d = divergence(&g, &p).unwrap();
        prop_assert!(d.iter().all(|v| v.abs() <= 1e-12));
    }

    #[test]
    fn projector_is_symmetric(f in reals(128), h in reals(128)) {
        let g = plane();
        let pf = transverse_projector(&g, &f).unwrap();
        let ph = transverse_projector(&g, &h).unwrap();
        let a: f64 = pf.iter().zip(&h).map(|(x, y)| x * y).sum();
        let b: f64 = f.iter().zip(&ph).map(|(x, y)| x * y).sum();
        prop_assert!((a - b).abs() <= 1e-11);
    }

    #[test]
    fn transverse_form_is_antisymmetric(a in reals(128), b in reals(128), c in reals(128), d in reals(128)) {
        let g = plane();
        let f = VectorTestFunction::new(&g, a, b).unwrap();
        let h = VectorTestFunction::new(&g, c, d).unwrap();
        let x = eta_tr(&g, &f, &h).unwrap();
        let y = eta_tr(&g, &h, &f).unwrap();
        prop_assert!((x + y).abs() <= 1e-12 * (1.0 + x.abs()));
    }

    #[test]
    fn symplectic_form_is_antisymmetric(a in reals(16), b in reals(16), c in reals(16), d in reals(16)) {
        let g = Grid::new(1, 16, 0.5).unwrap();
        let s = ScalarTestFunction::new(a, b).unwrap();
        let t = ScalarTestFunction::new(c, d).unwrap();
        let x = symplectic_form(&s, &t, &g).unwrap();
        prop_assert!((x + symplectic_form(&t, &s, &g).unwrap()).abs() <= 1e-14);
        prop_assert!(symplectic_form(&s, &s, &g).unwrap().abs() <= 1e-14);
    }

    #[test]
    fn fourier_round_trip(f in complexes(64)) {
        let g = Grid::new(2, 8, 0.3).unwrap();
        let back = fft::inverse(&g, &fft::forward(&g, &f));
        prop_assert!(back.iter().zip(&f).all(|(a, b)| (a - b).norm() <= 1e-13));
    }

    #[test]
    fn canonical_anticommutation(v in complexes(8), w in complexes(8)) {
        let space = OneParticleSpace::new(line(), 1).unwrap();
        let fock = FermionFockSpace::new(space.clone(), 2);
        let a = fock.annihilation(&v).unwrap();
        let c = fock.creation(&w).unwrap();
        let anti = a.matmul(&c).add(&c.matmul(&a));
        let expect = twistlab::sparse::CsrMatrix::identity(fock.dim()).scale(space.inner(&v, &w));
        let safe = fock.safe_mask();
        prop_assert!(anti.sub(&expect).masked_norm(None, Some(&safe)) <= 1e-13);
        let cc = c.matmul(&fock.creation(&v).unwrap());
        let cc2 = fock.creation(&v).unwrap().matmul(&c);
        prop_assert!(cc.add(&cc2).frobenius_norm() <= 1e-13);
    }

    #[test]
    fn boson_field_is_selfadjoint_and_weyl_unitary(a in reals(3), b in reals(3)) {
        let g = Grid::new(1, 16, 0.5).unwrap();
        let gens: Vec<Vec<f64>> = (0..3).map(|j| twistlab::lattice::gaussian(&g, 4 * j + 2, 1.0, 1.0)).collect();
        let field = BosonField::new(BosonModeBasis::from_real(&g, &gens, 1e-10).unwrap(), 4);
        let mut s0 = vec![0.0; 16];
        let mut s1 = vec![0.0; 16];
        for j in 0..3 {
            for x in 0..16 {
                s0[x] += 0.2 * a[j] * gens[j][x];
                s1[x] += 0.2 * b[j] * gens[j][x];
            }
        }
        let s = ScalarTestFunction::new(s0, s1).unwrap();
        let phi = field.segal(&s).unwrap();
        prop_assert!((&phi - phi.adjoint()).norm() <= 1e-12);
        let w = field.weyl(&s).unwrap();
        prop_assert!((w.adjoint() * &w - field.identity()).norm() <= 1e-10);
    }

    #[test]
    fn mu_hat_adjoint(k in 0usize..16, choice in prop_oneof![Just(MuChoice::Standard), Just(MuChoice::Mirrored)]) {
        let mg = MomentumGrid::new(Grid::new(1, 16, 0.5).unwrap(), 0.7).unwrap();
        let d = mg.mu_hat(k, choice).sub(&mg.mu_hat_star(k, choice).adjoint());
        prop_assert!(d.frobenius_norm() <= 1e-13);
    }

    #[test]
    fn hmu_matches_scalar(vals in prop::collection::vec(0.0f64..1.0, 3), start in 0usize..13) {
        let mg = MomentumGrid::new(Grid::new(1, 16, 0.5).unwrap(), 1.0).unwrap();
        let mut g = vec![0.0; 16];
        for (j, v) in vals.iter().enumerate() {
            g[start + j] = *v;
        }
        let g = CutoffFunction::new(g).unwrap();
        let sp = OneFermionBosonSpace::new(mg.clone(), (start..start + 3).collect(), 2, MuChoice::Standard).unwrap();
        prop_assert!(sp.hmu_scalar_residual(&g) <= 1e-12 * (1.0 + hmu_scalar(&mg, &g)));
        prop_assert!(sp.build(&g).unwrap().selfadjoint_defect() <= 1e-12);
    }
}
