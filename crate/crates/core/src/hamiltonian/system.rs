use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::momentum::{CutoffFunction, MomentumGrid, MuChoice};
use crate::bose::{BosonFockSpace, MAX_MODES};
use crate::composite::{product_vector, CompositeOperator, Dims};
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// h₊ on the dual grid ⊗ 𝓕_s over sharp modes |k_j⟩, [b_j, b*_l] = δ_jl.
/// The continuum operator b(k_j) is b_j/√ΔV_k.
#[derive(Debug, Clone)]
pub struct OneFermionBosonSpace {
    mg: MomentumGrid,
    modes: Vec<usize>,
    fock: BosonFockSpace,
    lower: Vec<DMatrix<Complex64>>,
    choice: MuChoice,
    dims: Dims,
}

/// H⁰, 𝔥^{μφ}, 𝔥^μ and their sum for one cutoff.
#[derive(Debug, Clone)]
pub struct HamiltonianTerms {
    pub h0: CompositeOperator,
    pub hmuphi: CompositeOperator,
    pub hmu: CompositeOperator,
    pub total: CompositeOperator,
}

impl HamiltonianTerms {
    /// Largest ‖A − A*‖ over the four operators.
    pub fn selfadjoint_defect(&self) -> f64 {
        [&self.h0, &self.hmuphi, &self.hmu, &self.total].iter().map(|a| a.sub(&a.adjoint()).norm()).fold(0.0, f64::max)
    }
}

/// Matrix application against the closed form, with and without the 2^{−1/2}
/// carried by 𝔥^{μφ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionReport {
    pub residual: f64,
    pub residual_without_factor: f64,
    pub norm: f64,
}

/// [H⁰(g'), 𝔥^{μφ}(g)] against 2^{−1/2}Σϖ²g'g√ΔV(μ̂*b − μ̂b*) and against the
/// form 2^{−1/2}Σϖg'g√ΔV(μ̂b* − μ̂*b).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityCommutator {
    pub residual: f64,
    pub residual_alternative: f64,
    pub norm: f64,
}

impl OneFermionBosonSpace {
    pub fn new(mg: MomentumGrid, modes: Vec<usize>, n_max: usize, choice: MuChoice) -> Result<Self> {
        if modes.len() > MAX_MODES {
            return Err(Error::Unsupported(format!("{} boson modes exceed the limit of {MAX_MODES}", modes.len())));
        }
        let mut sorted = modes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != modes.len() || modes.iter().any(|&k| k >= mg.len()) {
            return Err(Error::Unsupported("boson modes must be distinct dual sites".into()));
        }
        let fock = BosonFockSpace::new(modes.len(), n_max);
        let lower = (0..modes.len()).map(|j| fock.lowering(j)).collect();
        let dims = Dims { fermi: mg.len(), bose: vec![fock.dim()] };
        Ok(Self { mg, modes, fock, lower, choice, dims })
    }

    /// Modes on the support of `g`.
    pub fn for_cutoff(mg: MomentumGrid, g: &CutoffFunction, n_max: usize, choice: MuChoice) -> Result<Self> {
        Self::new(mg, g.support(), n_max, choice)
    }

    pub fn momentum_grid(&self) -> &MomentumGrid {
        &self.mg
    }

    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    pub fn fock(&self) -> &BosonFockSpace {
        &self.fock
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn choice(&self) -> MuChoice {
        self.choice
    }

    fn coverage(&self, g: &CutoffFunction) -> Result<()> {
        if g.values().len() != self.mg.len() {
            return Err(Error::DimensionMismatch { expected: self.mg.len(), got: g.values().len() });
        }
        match g.support().into_iter().find(|k| !self.modes.contains(k)) {
            Some(k) => Err(Error::Unsupported(format!("cutoff support at dual site {k} is not a boson mode"))),
            None => Ok(()),
        }
    }

    /// |k_j⟩ normalized one-boson state.
    pub fn one_boson(&self, j: usize) -> Vec<Complex64> {
        let mut occ = vec![0u8; self.modes.len()];
        occ[j] = 1;
        let mut v = vec![Complex64::new(0.0, 0.0); self.fock.dim()];
        v[self.fock.state_index(&occ).expect("one-boson state")] = Complex64::new(1.0, 0.0);
        v
    }

    /// ŵ ⊗ Ω_b.
    pub fn product_state(&self, w: &[Complex64]) -> Vec<Complex64> {
        product_vector(w, &[&self.fock.vacuum()])
    }

    fn lowering_sum(&self, weights: &[f64]) -> Vec<(usize, f64)> {
        self.modes.iter().enumerate().map(|(j, &k)| (j, weights[k])).filter(|(_, c)| *c != 0.0).collect()
    }

    pub fn h0(&self, g: &CutoffFunction) -> Result<CompositeOperator> {
        self.coverage(g)?;
        let mut m = DMatrix::zeros(self.fock.dim(), self.fock.dim());
        for (j, gk) in self.lowering_sum(g.values()) {
            let b = &self.lower[j];
            m += b.adjoint() * b * Complex64::new(self.mg.omega(self.modes[j]) * gk, 0.0);
        }
        Ok(CompositeOperator::bose(self.dims.clone(), 0, m))
    }

    /// −2^{−1/2} Σ ϖ g √ΔV (μ̂*(k) b_k + μ̂(k) b*_k).
    pub fn hmuphi(&self, g: &CutoffFunction) -> Result<CompositeOperator> {
        self.coverage(g)?;
        let mut out = CompositeOperator::zero(self.dims.clone());
        let rt = self.mg.measure().sqrt();
        for (j, gk) in self.lowering_sum(g.values()) {
            let k = self.modes[j];
            let c = Complex64::new(-FRAC_1_SQRT_2 * self.mg.omega(k) * gk * rt, 0.0);
            let b = self.lower[j].clone();
            let bd = b.adjoint();
            let t1 = CompositeOperator::product(self.dims.clone(), self.mg.mu_hat_star(k, self.choice), vec![b]);
            let t2 = CompositeOperator::product(self.dims.clone(), self.mg.mu_hat(k, self.choice), vec![bd]);
            out = out.add(&t1.add(&t2).scale(c));
        }
        Ok(out)
    }

    /// Σ ϖ g ½ μ̂*(k)μ̂(k) ΔV_k over every dual site, as a fermion operator.
    pub fn hmu_matrix(&self, g: &CutoffFunction) -> CsrMatrix {
        let n = self.mg.len();
        let mut acc = CsrMatrix::zeros(n, n);
        for k in g.support() {
            let p = self.mg.mu_hat_star(k, self.choice).matmul(&self.mg.mu_hat(k, self.choice));
            let c = Complex64::new(0.5 * self.mg.omega(k) * g.get(k) * self.mg.measure(), 0.0);
            acc = acc.lin_comb(Complex64::new(1.0, 0.0), &p, c);
        }
        acc
    }

    pub fn hmu(&self, g: &CutoffFunction) -> Result<CompositeOperator> {
        Ok(CompositeOperator::fermi(self.dims.clone(), self.hmu_matrix(g)))
    }

    pub fn build(&self, g: &CutoffFunction) -> Result<HamiltonianTerms> {
        let h0 = self.h0(g)?;
        let hmuphi = self.hmuphi(g)?;
        let hmu = self.hmu(g)?;
        let total = h0.add(&hmuphi).add(&hmu);
        Ok(HamiltonianTerms { h0, hmuphi, hmu, total })
    }

    /// 2^{−1/2}Σ (4πg/ϖ)√ΔV ŵ_k ⊗ |k_j⟩ + (Σ 8π²gΔV/ϖ³) ŵ ⊗ Ω_b; `factor` replaces 2^{−1/2}.
    fn closed_form_with(&self, g: &CutoffFunction, w: &[Complex64], factor: f64) -> Result<Vec<Complex64>> {
        self.coverage(g)?;
        let rt = self.mg.measure().sqrt();
        let mut out = self.product_state(w);
        let c0 = Complex64::new(hmu_scalar(&self.mg, g), 0.0);
        out.iter_mut().for_each(|z| *z *= c0);
        for (j, gk) in self.lowering_sum(g.values()) {
            let k = self.modes[j];
            let shift = match self.choice {
                MuChoice::Standard => k,
                MuChoice::Mirrored => self.mg.negate(k),
            };
            let wk = self.mg.shifted(w, shift);
            let c = factor * 4.0 * PI * gk / self.mg.omega(k) * rt;
            let term = product_vector(&wk, &[&self.one_boson(j)]);
            out.iter_mut().zip(&term).for_each(|(o, t)| *o += t * c);
        }
        Ok(out)
    }

    pub fn closed_form(&self, g: &CutoffFunction, w: &[Complex64]) -> Result<Vec<Complex64>> {
        self.closed_form_with(g, w, FRAC_1_SQRT_2)
    }

    pub fn action_report(&self, g: &CutoffFunction, w: &[Complex64]) -> Result<ActionReport> {
        let h = self.build(g)?.total.apply(&self.product_state(w));
        let dist = |v: &[Complex64]| h.iter().zip(v).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        Ok(ActionReport {
            residual: dist(&self.closed_form_with(g, w, FRAC_1_SQRT_2)?),
            residual_without_factor: dist(&self.closed_form_with(g, w, 1.0)?),
            norm: h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
        })
    }

    pub fn density_commutator(&self, g_prime: &CutoffFunction, g: &CutoffFunction) -> Result<DensityCommutator> {
        let comm = self.h0(g_prime)?.commutator(&self.hmuphi(g)?);
        let rt = self.mg.measure().sqrt();
        let mut derived = CompositeOperator::zero(self.dims.clone());
        let mut alternative = CompositeOperator::zero(self.dims.clone());
        for (j, gk) in self.lowering_sum(g.values()) {
            let k = self.modes[j];
            let w = self.mg.omega(k);
            let b = self.lower[j].clone();
            let bd = b.adjoint();
            let star_b = CompositeOperator::product(self.dims.clone(), self.mg.mu_hat_star(k, self.choice), vec![b]);
            let mu_bd = CompositeOperator::product(self.dims.clone(), self.mg.mu_hat(k, self.choice), vec![bd]);
            let c = FRAC_1_SQRT_2 * g_prime.get(k) * gk * rt;
            derived = derived.add(&star_b.sub(&mu_bd).scale(Complex64::new(c * w * w, 0.0)));
            alternative = alternative.add(&mu_bd.sub(&star_b).scale(Complex64::new(c * w, 0.0)));
        }
        Ok(DensityCommutator {
            residual: comm.sub(&derived).norm(),
            residual_alternative: comm.sub(&alternative).norm(),
            norm: comm.norm(),
        })
    }

    /// (‖[𝔥^μ, H⁰]‖, ‖[𝔥^μ, 𝔥^{μφ}]‖).
    pub fn hmu_commutators(&self, g: &CutoffFunction) -> Result<(f64, f64)> {
        let t = self.build(g)?;
        Ok((t.hmu.commutator(&t.h0).norm(), t.hmu.commutator(&t.hmuphi).norm()))
    }

    /// ‖𝔥^μ − c·I‖ with c the closed-form scalar.
    pub fn hmu_scalar_residual(&self, g: &CutoffFunction) -> f64 {
        let n = self.mg.len();
        let c = Complex64::new(hmu_scalar(&self.mg, g), 0.0);
        self.hmu_matrix(g).sub(&CsrMatrix::identity(n).scale(c)).frobenius_norm() / (n as f64).sqrt()
    }

    /// ‖[H^λ_g, N_b]‖.
    pub fn number_commutator_norm(&self, g: &CutoffFunction) -> Result<f64> {
        let n = CompositeOperator::bose(self.dims.clone(), 0, self.fock.number());
        Ok(self.build(g)?.total.commutator(&n).norm())
    }
}

/// Σ_k (8π²/ϖ³) g ΔV_k.
pub fn hmu_scalar(mg: &MomentumGrid, g: &CutoffFunction) -> f64 {
    g.support().iter().map(|&k| 8.0 * PI * PI / mg.omega(k).powi(3) * g.get(k) * mg.measure()).sum()
}
