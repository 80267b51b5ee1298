use nalgebra::DMatrix;
use num_complex::Complex64;

use super::transverse::TransverseSector;
use super::vector::{divergence, gradient, laplacian, VectorTestFunction};
use crate::composite::{CompositeOperator, Dims, Domain};
use crate::error::{Error, Result};
use crate::lattice::ScalarTestFunction;
use crate::twisted::{field_multiply, phase_multiply, GaugeResidual, TwistedSystem};

/// 𝓕_a(h) ⊗ 𝓕_s(scalar span) ⊗ 𝓕_s(transverse span).
#[derive(Debug, Clone)]
pub struct CoulombSystem {
    scalar: TwistedSystem,
    transverse: TransverseSector,
    dims: Dims,
}

impl CoulombSystem {
    pub fn new(scalar: TwistedSystem, transverse: TransverseSector) -> Result<Self> {
        scalar.grid().check_same(transverse.grid())?;
        if scalar.grid().dim() < 2 {
            return Err(Error::Unsupported("the Coulomb gauge needs dim ≥ 2".into()));
        }
        let mut dims = scalar.dims().clone();
        dims.bose.push(transverse.dim());
        Ok(Self { scalar, transverse, dims })
    }

    pub fn scalar(&self) -> &TwistedSystem {
        &self.scalar
    }

    pub fn transverse(&self) -> &TransverseSector {
        &self.transverse
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    fn lift(&self, op: &CompositeOperator) -> CompositeOperator {
        op.extended(&self.dims)
    }

    fn tr_op(&self, m: DMatrix<Complex64>) -> CompositeOperator {
        CompositeOperator::bose(self.dims.clone(), 1, m)
    }

    fn scalar_s0(&self, s0: Vec<f64>) -> ScalarTestFunction {
        ScalarTestFunction::from_s0(s0)
    }

    /// Fermion safe sectors, both boson factors on shells ≤ N_max − 2.
    pub fn safe_domain(&self) -> Domain {
        let shell = |f: &crate::bose::BosonField| Some(f.fock().shell_mask(f.fock().n_max().saturating_sub(2)));
        Domain {
            fermi: Some(self.scalar.fermi().safe_mask()),
            bose: vec![shell(self.scalar.bose()), shell(self.transverse.field())],
        }
    }

    pub fn identity(&self) -> CompositeOperator {
        CompositeOperator::identity(self.dims.clone())
    }

    pub fn psi(&self, w: &[Complex64]) -> Result<CompositeOperator> {
        Ok(self.lift(&self.scalar.psi(w)?))
    }

    /// φ^λ(s) ⊗ I.
    pub fn twisted_field(&self, s: &ScalarTestFunction) -> Result<CompositeOperator> {
        Ok(self.lift(&self.scalar.twisted_field(s)?))
    }

    pub fn a_field(&self, f0: &[f64]) -> Result<CompositeOperator> {
        Ok(self.tr_op(self.transverse.a_field(f0)?))
    }

    pub fn a_dot(&self, f1: &[f64]) -> Result<CompositeOperator> {
        Ok(self.tr_op(self.transverse.a_dot(f1)?))
    }

    pub fn weyl_tr(&self, f: &VectorTestFunction) -> Result<CompositeOperator> {
        Ok(self.tr_op(self.transverse.weyl_tr(f)?))
    }

    /// V^λ(𝐟) = W^λ(div 𝐟, 0) ⊗ W_tr(−𝐟, 0).
    pub fn v_lambda(&self, f: &[f64]) -> Result<CompositeOperator> {
        let div = self.scalar_s0(divergence(self.scalar.grid(), f)?);
        let wl = self.lift(&self.scalar.twisted_weyl(&div)?);
        let neg = VectorTestFunction::from_f0(self.scalar.grid(), f.iter().map(|v| -v).collect())?;
        Ok(wl.mul(&self.weyl_tr(&neg)?))
    }

    /// E^λ(𝐟) = φ^λ(div 𝐟, 0) − 𝐀̇(𝐟).
    pub fn e_lambda(&self, f: &[f64]) -> Result<CompositeOperator> {
        let div = self.scalar_s0(divergence(self.scalar.grid(), f)?);
        Ok(self.twisted_field(&div)?.sub(&self.a_dot(f)?))
    }

    /// div E^λ(s₀) = −E^λ(∇s₀).
    pub fn div_e(&self, s0: &[f64]) -> Result<CompositeOperator> {
        Ok(self.e_lambda(&gradient(self.scalar.grid(), s0)?)?.scale(Complex64::new(-1.0, 0.0)))
    }

    /// −φ^λ(Δs₀, 0), the Coulomb-condition form of div E^λ(s₀).
    pub fn div_e_reduced(&self, s0: &[f64]) -> Result<CompositeOperator> {
        let lap = self.scalar_s0(laplacian(self.scalar.grid(), s0)?);
        Ok(self.twisted_field(&lap)?.scale(Complex64::new(-1.0, 0.0)))
    }

    /// (‖𝐀(∇s₀)‖, ‖𝐀̇(∇s₀)‖) on the transverse factor.
    pub fn coulomb_condition(&self, s0: &[f64]) -> Result<(f64, f64)> {
        let g = gradient(self.scalar.grid(), s0)?;
        Ok((self.transverse.a_field(&g)?.norm(), self.transverse.a_dot(&g)?.norm()))
    }

    /// [φ^λ(s), 𝐀(𝐟₀)]; zero by construction, returned as an operator.
    pub fn scalar_transverse_commutator(&self, s: &ScalarTestFunction, f0: &[f64]) -> Result<CompositeOperator> {
        Ok(self.twisted_field(s)?.commutator(&self.a_field(f0)?))
    }

    pub fn psi_weyl_tr_commutator(&self, w: &[Complex64], f: &VectorTestFunction) -> Result<CompositeOperator> {
        Ok(self.psi(w)?.commutator(&self.weyl_tr(f)?))
    }

    /// V^λ(−∇s₀)ψ(w) − ψ(e^{−is₀}w)V^λ(−∇s₀) on safe sectors.
    pub fn gauge_relation_residual(&self, s0: &[f64], w: &[Complex64]) -> Result<f64> {
        let f: Vec<f64> = gradient(self.scalar.grid(), s0)?.iter().map(|v| -v).collect();
        let v = self.v_lambda(&f)?;
        let neg: Vec<f64> = s0.iter().map(|x| -x).collect();
        let rhs = self.psi(&phase_multiply(self.scalar.grid(), w, &neg))?.mul(&v);
        Ok(v.mul(&self.psi(w)?).sub(&rhs).norm_cols(&self.safe_domain()))
    }

    /// ‖V^λ(𝐟) − I ⊗ I ⊗ W_tr(−𝐟, 0)‖ for divergence-free 𝐟.
    pub fn divergence_free_residual(&self, f: &[f64]) -> Result<f64> {
        let neg = VectorTestFunction::from_f0(self.scalar.grid(), f.iter().map(|v| -v).collect())?;
        Ok(self.v_lambda(f)?.sub(&self.weyl_tr(&neg)?).norm_cols(&self.safe_domain()))
    }

    /// [E^λ(𝐟), ψ(w)] + ψ((σ⋆div 𝐟)w).
    pub fn e_commutator_residual(&self, f: &[f64], w: &[Complex64]) -> Result<f64> {
        let c = self.scalar.sigma().convolve(&divergence(self.scalar.grid(), f)?)?;
        let comm = self.e_lambda(f)?.commutator(&self.psi(w)?);
        Ok(comm.add(&self.psi(&field_multiply(self.scalar.grid(), w, &c))?).norm_cols(&self.safe_domain()))
    }

    pub fn e_commutator_norm(&self, f: &[f64], w: &[Complex64]) -> Result<f64> {
        Ok(self.e_lambda(f)?.commutator(&self.psi(w)?).norm_cols(&self.safe_domain()))
    }

    /// [div E^λ(s₀), ψ(w)] + ψ(s₀w) and e^{i div E^λ(s₀)}ψ(w)e^{−i div E^λ(s₀)} − ψ(e^{−is₀}w).
    pub fn div_e_residual(&self, s0: &[f64], w: &[Complex64]) -> Result<GaugeResidual> {
        let rho = self.div_e(s0)?;
        let psi = self.psi(w)?;
        let grid = self.scalar.grid();
        let commutator = rho.commutator(&psi).add(&self.psi(&field_multiply(grid, w, s0))?).norm_cols(&self.safe_domain());
        let e = rho.exp_i_separable().ok_or_else(|| Error::Unsupported("div E is not separable".into()))?;
        let neg: Vec<f64> = s0.iter().map(|v| -v).collect();
        let conj = e.mul(&psi).mul(&e.adjoint());
        let exponentiated = conj.sub(&self.psi(&phase_multiply(grid, w, &neg))?).norm_cols(&self.safe_domain());
        Ok(GaugeResidual { commutator, exponentiated })
    }

    /// ‖[div E^λ(s₀), ψ(w)] + ψ(w)‖: charge detection with s₀ ≡ 1 on supp(w).
    pub fn charge_detection_residual(&self, s0: &[f64], w: &[Complex64]) -> Result<f64> {
        let psi = self.psi(w)?;
        Ok(self.div_e(s0)?.commutator(&psi).add(&psi).norm_cols(&self.safe_domain()))
    }

    pub fn div_e_commutator_norm(&self, s0: &[f64], w: &[Complex64]) -> Result<f64> {
        Ok(self.div_e(s0)?.commutator(&self.psi(w)?).norm_cols(&self.safe_domain()))
    }

    /// ‖[div E^λ(s₀), 𝐀(𝐟)]‖.
    pub fn div_e_a_commutator(&self, s0: &[f64], f0: &[f64]) -> Result<f64> {
        Ok(self.div_e(s0)?.commutator(&self.a_field(f0)?).norm())
    }

    /// ‖div E^λ(s₀) + φ^λ(Δs₀, 0)‖.
    pub fn div_e_reduction_residual(&self, s0: &[f64]) -> Result<f64> {
        Ok(self.div_e(s0)?.sub(&self.div_e_reduced(s0)?).norm_cols(&self.safe_domain()))
    }
}
