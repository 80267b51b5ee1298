use std::collections::BTreeSet;

use num_complex::Complex64;

use super::charged::ChargedVector;
use super::model::TwistedSystem;
use crate::composite::Domain;
use crate::error::{Error, Result};
use crate::lattice::{KernelKind, ScalarTestFunction};
use crate::sparse::CsrMatrix;

/// Residuals of the constant-kernel identities, all written with one sign ε:
/// φ^λ(s) − φ(s) = ε⟨s₀⟩Q, φ^{λ,q}(s) = φ(s) + εq⟨s₀⟩,
/// [φ^λ(s), ψ(w)] = −ε⟨s₀⟩ψ(w), ψ(w)W^{λ,q}(s) = e^{iε⟨s₀⟩}W^{λ,q−1}(s)ψ(w).
#[derive(Debug, Clone, PartialEq)]
pub struct LebesgueReport {
    /// The sign ε that held; the other choice is reported alongside.
    pub sign: f64,
    pub integral: f64,
    pub difference: f64,
    pub difference_other_sign: f64,
    pub sectors: f64,
    pub commutator: f64,
    pub intertwiner: f64,
    pub intertwiner_other_sign: f64,
}

impl LebesgueReport {
    pub fn worst(&self) -> f64 {
        self.difference.max(self.sectors).max(self.commutator).max(self.intertwiner)
    }
}

/// One-electron charged state: composite matrix value against grid quadrature
/// ΔV Σ|w|²e^{−iσ⋆s₀} / ‖w‖² · e^{−¼‖s₀+is₁‖²}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureComparison {
    pub matrix: Complex64,
    pub quadrature: Complex64,
}

impl QuadratureComparison {
    pub fn difference(&self) -> f64 {
        (self.matrix - self.quadrature).norm()
    }
}

impl TwistedSystem {
    fn charge_projector(&self, q: i32) -> CsrMatrix {
        let d: Vec<Complex64> =
            (0..self.fermi().dim()).map(|i| Complex64::new(if self.fermi().charge(i) == q { 1.0 } else { 0.0 }, 0.0)).collect();
        CsrMatrix::from_diagonal(&d)
    }

    fn intertwiner_residual(&self, s: &ScalarTestFunction, w: &[Complex64], sign: f64, c: f64) -> Result<f64> {
        let wl = self.twisted_weyl(s)?;
        let psi = self.psi(w)?;
        let safe = self.safe_domain();
        let charges: BTreeSet<i32> = (0..self.fermi().dim()).map(|i| self.fermi().charge(i)).collect();
        let phase = Complex64::from_polar(1.0, sign * c);
        let mut worst = 0.0f64;
        for q in charges {
            let lhs = psi.mul(&wl).mul(&self.fermi_op(self.charge_projector(q)));
            let rhs = wl.mul(&self.fermi_op(self.charge_projector(q - 1))).mul(&psi).scale(phase);
            worst = worst.max(lhs.sub(&rhs).norm_on(&safe, &Domain::all(1)));
        }
        Ok(worst)
    }

    /// Example with σ ≡ 1.
    pub fn model_lebesgue_check(&self, s: &ScalarTestFunction, w: &[Complex64]) -> Result<LebesgueReport> {
        if !matches!(self.sigma().kind(), KernelKind::Constant) {
            return Err(Error::Unsupported("Lebesgue check needs the constant kernel".into()));
        }
        let c = s.integral_s0(self.grid());
        let phi = self.twisted_field(s)?;
        let bare = self.bose_op(self.bose().segal(s)?);
        let q = self.fermi_op(self.fermi().charge_operator());
        let diff = |eps: f64| phi.sub(&bare).sub(&q.scale(Complex64::new(eps * c, 0.0))).norm();
        let (dp, dm) = (diff(1.0), diff(-1.0));
        let sign = if dp <= dm { 1.0 } else { -1.0 };
        let (difference, difference_other_sign) = if sign > 0.0 { (dp, dm) } else { (dm, dp) };

        let phi_b = self.bose().segal(s)?;
        let mut sectors = 0.0f64;
        for j in 0..self.fermi().dim() {
            let expect = &phi_b + self.bose().identity() * Complex64::new(sign * self.fermi().charge(j) as f64 * c, 0.0);
            sectors = sectors.max((phi.fermion_diagonal_block(j) - expect).norm());
        }

        let commutator = self.scalar_action_residual(s, w, sign * c)?;
        let intertwiner = self.intertwiner_residual(s, w, sign, c)?;
        let intertwiner_other_sign = self.intertwiner_residual(s, w, -sign, c)?;
        Ok(LebesgueReport {
            sign,
            integral: c,
            difference,
            difference_other_sign,
            sectors,
            commutator,
            intertwiner,
            intertwiner_other_sign,
        })
    }

    /// Matrix expectation in the one-electron state with wave function w against grid quadrature.
    pub fn one_electron_state(&self, w: &[Complex64], s: &ScalarTestFunction) -> Result<QuadratureComparison> {
        let omega = ChargedVector::electron(self.fermi().space(), w)?;
        let v = self.charged_vector(&omega)?;
        let matrix = self.twisted_weyl(s)?.matrix_element(&v, &v);
        let c = self.sigma().convolve(&s.s0)?;
        let n = self.grid().len();
        let dv = self.grid().cell_volume();
        let norm2: f64 = dv * w.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let integral: Complex64 =
            w.iter().enumerate().map(|(m, z)| dv * z.norm_sqr() * Complex64::from_polar(1.0, -c[m % n])).sum::<Complex64>() / norm2;
        let gauss = (-0.25 * s.norm(self.grid()).powi(2)).exp();
        Ok(QuadratureComparison { matrix, quadrature: integral * gauss })
    }

    /// The Yukawa charged state; σ must be a Yukawa kernel.
    pub fn model_yukawa_state(&self, w: &[Complex64], s: &ScalarTestFunction) -> Result<QuadratureComparison> {
        if !matches!(self.sigma().kind(), KernelKind::Yukawa { .. }) {
            return Err(Error::Unsupported("Yukawa state needs a Yukawa kernel".into()));
        }
        self.one_electron_state(w, s)
    }

    /// The q = −1 Coulomb state; σ must be a Coulomb kernel.
    pub fn model_coulomb_state(&self, w: &[Complex64], s: &ScalarTestFunction) -> Result<QuadratureComparison> {
        if !matches!(self.sigma().kind(), KernelKind::Coulomb { .. }) {
            return Err(Error::Unsupported("Coulomb state needs a Coulomb kernel".into()));
        }
        self.one_electron_state(w, s)
    }
}
