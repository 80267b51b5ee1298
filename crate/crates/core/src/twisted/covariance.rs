use super::model::TwistedSystem;
use crate::composite::CompositeOperator;
use crate::error::Result;
use crate::lattice::ScalarTestFunction;

impl TwistedSystem {
    /// V_a = Γ_a(U_a) ⊗ Γ_s(T_a restricted to the mode span).
    pub fn translation_operator(&self, a: &[i64]) -> Result<CompositeOperator> {
        let f = self.fermi().translate_fock(a)?;
        let v = self.bose().basis().shift_matrix(a)?;
        Ok(CompositeOperator::product(self.dims().clone(), f, vec![self.bose().second_quantize(&v)]))
    }

    /// ‖W^λ(T_a s) − V_a W^λ(s) V_a*‖ on the whole truncated space.
    pub fn translation_covariance_check(&self, s: &ScalarTestFunction, a: &[i64]) -> Result<f64> {
        let v = self.translation_operator(a)?;
        let lhs = self.twisted_weyl(&s.shifted(self.grid(), a))?;
        let rhs = v.mul(&self.twisted_weyl(s)?).mul(&v.adjoint());
        Ok(lhs.sub(&rhs).norm())
    }
}
