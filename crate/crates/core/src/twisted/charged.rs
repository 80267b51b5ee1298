use nalgebra::DMatrix;
use num_complex::Complex64;

use super::model::TwistedSystem;
use crate::error::{Error, Result};
use crate::fermi::{OneParticleSpace, OneParticleVector};
use crate::lattice::{minkowski_sum, support, support_by, DiffOp, ScalarTestFunction, SiteSet};

/// Normalized antisymmetrized product Ω¹_f ∧ … ∧ Ω^k_f of one-particle vectors.
#[derive(Debug, Clone)]
pub struct ChargedVector {
    factors: Vec<OneParticleVector>,
    charge: i32,
}

impl ChargedVector {
    /// Each factor must lie in a single charge sector.
    pub fn new(space: &OneParticleSpace, factors: Vec<OneParticleVector>) -> Result<Self> {
        let mut charge = 0;
        for v in &factors {
            space.check_len(v.len())?;
            let e = space.electron_part(v).iter().any(|c| c.norm() > 0.0);
            let p = space.positron_part(v).iter().any(|c| c.norm() > 0.0);
            charge += match (e, p) {
                (true, false) => -1,
                (false, true) => 1,
                _ => return Err(Error::Unsupported("charged-vector factor must lie in h₊ or h₋".into())),
            };
        }
        Ok(Self { factors, charge })
    }

    pub fn electron(space: &OneParticleSpace, w: &[Complex64]) -> Result<Self> {
        Self::new(space, vec![space.electron(w)?])
    }

    pub fn factors(&self) -> &[OneParticleVector] {
        &self.factors
    }

    pub fn charge(&self) -> i32 {
        self.charge
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Sites carrying weight in any factor, any sector or internal index.
    pub fn support(&self, space: &OneParticleSpace, tol: f64) -> SiteSet {
        let n = space.grid().len();
        let mut out = SiteSet::new();
        for v in &self.factors {
            out.extend(support_by(v, tol, |c| c.norm()).into_iter().map(|m| m % n));
        }
        out
    }

    /// Gram matrix of ⟨Ω^i, A Ω^j⟩ for a one-particle operator given by its matrix.
    pub fn gram_with(&self, space: &OneParticleSpace, a: Option<&DMatrix<Complex64>>) -> DMatrix<Complex64> {
        let k = self.factors.len();
        DMatrix::from_fn(k, k, |i, j| {
            let rhs: Vec<Complex64> = match a {
                Some(a) => (a * nalgebra::DVector::from_column_slice(&self.factors[j])).iter().copied().collect(),
                None => self.factors[j].clone(),
            };
            space.inner(&self.factors[i], &rhs)
        })
    }
}

/// ⟨Ω^q, W^λ(s)Ω^q⟩ computed two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateValue {
    pub matrix: Complex64,
    pub closed_form: Complex64,
}

impl StateValue {
    pub fn difference(&self) -> f64 {
        (self.matrix - self.closed_form).norm()
    }
}

/// Outcome of the localization comparison for one test function.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationReport {
    /// supp(s) ∩ (supp(Ω) + supp(σ)) = ∅
    pub disjoint: bool,
    pub charged: Complex64,
    pub reference: Complex64,
}

impl LocalizationReport {
    pub fn difference(&self) -> f64 {
        (self.charged - self.reference).norm()
    }
}

impl TwistedSystem {
    pub fn charged_vector(&self, omega: &ChargedVector) -> Result<Vec<Complex64>> {
        if omega.len() > self.fermi().f_max() {
            return Err(Error::Truncation(format!("|q| = {} exceeds F_max", omega.len())));
        }
        Ok(self.with_boson_vacuum(&self.fermi().wedge(omega.factors())?))
    }

    /// ⟨Ω_b, W(s)Ω_b⟩ on the truncated boson space.
    pub fn reference_value(&self, s: &ScalarTestFunction) -> Result<Complex64> {
        Ok(self.bose().weyl(s)?[(0, 0)])
    }

    /// (a) the composite matrix expectation, (b) det[⟨Ω^i,uΩ^j⟩]/det[⟨Ω^i,Ω^j⟩]·⟨Ω_b,W(s)Ω_b⟩.
    pub fn charged_state_eval(&self, omega: &ChargedVector, s: &ScalarTestFunction) -> Result<StateValue> {
        let v = self.charged_vector(omega)?;
        let matrix = self.twisted_weyl(s)?.matrix_element(&v, &v);
        let space = self.fermi().space();
        let u = self.twist_unitary(s)?;
        let num = omega.gram_with(space, Some(u.matrix())).determinant();
        let den = omega.gram_with(space, None).determinant();
        if den.norm() < 1e-300 {
            return Err(Error::Normalization);
        }
        Ok(StateValue { matrix, closed_form: num / den * self.reference_value(s)? })
    }

    /// ω_{σ,q}(W(s)) against ω(W(s)), with the support disjointness flag.
    pub fn localization_report(&self, omega: &ChargedVector, s: &ScalarTestFunction, tol: f64) -> Result<LocalizationReport> {
        let space = self.fermi().space();
        let supp_s = s.support(tol);
        let supp_sigma = support(self.sigma().values(), tol);
        let region = minkowski_sum(self.grid(), &omega.support(space, tol), &supp_sigma);
        let disjoint = supp_s.is_disjoint(&region);
        let charged = self.charged_state_eval(omega, s)?.matrix;
        Ok(LocalizationReport { disjoint, charged, reference: self.reference_value(s)? })
    }

    /// The P-subalgebra variant: compares at W(Ps), disjointness of supp(s) and supp(Ω) only.
    pub fn localization_report_p(&self, omega: &ChargedVector, s: &ScalarTestFunction, tol: f64) -> Result<LocalizationReport> {
        let p: DiffOp = self.model().diffop.ok_or(Error::MissingDiffOp)?;
        let space = self.fermi().space();
        let disjoint = s.support(tol).is_disjoint(&omega.support(space, tol));
        let ps = s.apply(p, self.grid());
        let charged = self.charged_state_eval(omega, &ps)?.matrix;
        Ok(LocalizationReport { disjoint, charged, reference: self.reference_value(&ps)? })
    }
}
