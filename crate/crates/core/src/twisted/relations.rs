use nalgebra::DMatrix;
use num_complex::Complex64;

use super::model::{field_multiply, phase_multiply, TwistedSystem};
use crate::composite::Domain;
use crate::error::Result;
use crate::lattice::{symplectic_form, ScalarTestFunction};

/// Residuals of the infinitesimal relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfinitesimalResidual {
    /// [φ^λ(s), ψ(w)] + ψ((σ⋆s₀)w)
    pub field: f64,
    /// [𝛍^a_σ(s), ψ̂(v)] − ψ̂(𝛍_{σ,s}v) for v ∈ h
    pub selfdual: f64,
}

/// Residuals of the gauge-generator relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeResidual {
    /// [ρ(s), ψ(w)] + ψ(s₀w)
    pub commutator: f64,
    /// e^{iρ(s)}ψ(w)e^{−iρ(s)} − ψ(e^{−is₀}w)
    pub exponentiated: f64,
}

impl TwistedSystem {
    fn sigma_s0(&self, s: &ScalarTestFunction) -> Result<Vec<f64>> {
        self.sigma().convolve(&s.s0)
    }

    /// W^λ(s)ψ(w) − ψ(e^{−iσ⋆s₀}w)W^λ(s) on safe sectors.
    pub fn verify_twisted_weyl_relation(&self, s: &ScalarTestFunction, w: &[Complex64]) -> Result<f64> {
        let wl = self.twisted_weyl(s)?;
        let c = self.sigma_s0(s)?;
        let neg: Vec<f64> = c.iter().map(|v| -v).collect();
        let lhs = wl.mul(&self.psi(w)?);
        let rhs = self.psi(&phase_multiply(self.grid(), w, &neg))?.mul(&wl);
        Ok(lhs.sub(&rhs).norm_cols(&self.safe_domain()))
    }

    /// Charge-sector form: ψ(e^{−iσ⋆s₀}w)W^{λ,q}(s) − W^{λ,q−1}(s)ψ(w), worst sector q.
    pub fn verify_sector_shift(&self, s: &ScalarTestFunction, w: &[Complex64]) -> Result<f64> {
        let wl = self.twisted_weyl(s)?;
        let c = self.sigma_s0(s)?;
        let neg: Vec<f64> = c.iter().map(|v| -v).collect();
        let diff = self.psi(&phase_multiply(self.grid(), w, &neg))?.mul(&wl).sub(&wl.mul(&self.psi(w)?));
        let safe = self.safe_domain();
        let mut worst = 0.0f64;
        let charges: std::collections::BTreeSet<i32> = (0..self.fermi().dim()).map(|i| self.fermi().charge(i)).collect();
        for q in charges {
            let mask: Vec<bool> = (0..self.fermi().dim())
                .map(|i| self.fermi().charge(i) == q && safe.fermi.as_ref().is_none_or(|m| m[i]))
                .collect();
            let dom = Domain { fermi: Some(mask), bose: safe.bose.clone() };
            worst = worst.max(diff.norm_cols(&dom));
        }
        Ok(worst)
    }

    pub fn verify_infinitesimal(&self, s: &ScalarTestFunction, w: &[Complex64], v: &[Complex64]) -> Result<InfinitesimalResidual> {
        let c = self.sigma_s0(s)?;
        let comm = self.twisted_field(s)?.commutator(&self.psi(w)?);
        let field = comm.add(&self.psi(&field_multiply(self.grid(), w, &c))?).norm_cols(&self.safe_domain());

        let mu = self.stone_generator(s)?;
        let dg = self.mu_fock(s)?;
        let ph = self.fermi().psi_selfdual(v)?;
        let lhs = dg.matmul(&ph).sub(&ph.matmul(&dg));
        let rhs = self.fermi().psi_selfdual(&mu.apply(v))?;
        let safe = self.fermi().safe_mask();
        let selfdual = lhs.sub(&rhs).masked_norm(None, Some(&safe));
        Ok(InfinitesimalResidual { field, selfdual })
    }

    /// ‖[φ^λ(s), ψ(w)] + c ψ(w)‖ for a scalar c, the constant-action case.
    pub fn scalar_action_residual(&self, s: &ScalarTestFunction, w: &[Complex64], c: f64) -> Result<f64> {
        let comm = self.twisted_field(s)?.commutator(&self.psi(w)?);
        Ok(comm.add(&self.psi(w)?.scale(Complex64::new(c, 0.0))).norm_cols(&self.safe_domain()))
    }

    pub fn verify_gauge(&self, s: &ScalarTestFunction, w: &[Complex64]) -> Result<GaugeResidual> {
        let rho = self.gauge_generator(s)?;
        let psi = self.psi(w)?;
        let commutator =
            rho.commutator(&psi).add(&self.psi(&field_multiply(self.grid(), w, &s.s0))?).norm_cols(&self.safe_domain());
        let e = rho.exp_i_separable().expect("ρ(s) splits into fermion-diagonal and boson parts");
        let neg: Vec<f64> = s.s0.iter().map(|v| -v).collect();
        let conj = e.mul(&psi).mul(&e.adjoint());
        let exponentiated = conj.sub(&self.psi(&phase_multiply(self.grid(), w, &neg))?).norm_cols(&self.safe_domain());
        Ok(GaugeResidual { commutator, exponentiated })
    }

    /// ‖[ρ(s), ψ(w)] + ψ(w)‖: charge detection when s₀ ≡ 1 on supp(w).
    pub fn charge_detection_residual(&self, s: &ScalarTestFunction, w: &[Complex64]) -> Result<f64> {
        let rho = self.gauge_generator(s)?;
        let psi = self.psi(w)?;
        Ok(rho.commutator(&psi).add(&psi).norm_cols(&self.safe_domain()))
    }

    /// ‖[ρ(s), ψ(w)]‖ on safe sectors.
    pub fn gauge_commutator_norm(&self, s: &ScalarTestFunction, w: &[Complex64]) -> Result<f64> {
        Ok(self.gauge_generator(s)?.commutator(&self.psi(w)?).norm_cols(&self.safe_domain()))
    }

    /// ‖[φ^λ(s), φ^λ(t)] + iη(s,t)‖ on boson shells ≤ N_max − 1.
    pub fn field_commutator_residual(&self, s: &ScalarTestFunction, t: &ScalarTestFunction) -> Result<f64> {
        let eta = symplectic_form(s, t, self.grid())?;
        let c = self.twisted_field(s)?.commutator(&self.twisted_field(t)?);
        let r = c.add(&self.identity().scale(Complex64::new(0.0, eta)));
        Ok(r.norm_cols(&self.interior_domain(self.bose().fock().n_max() - 1)))
    }

    /// W^λ(s)W^λ(t) − e^{iη(s,t)/2}W^λ(s+t): worst fermion sector, columns on boson shells ≤ `shell`.
    pub fn cocycle_residual(&self, s: &ScalarTestFunction, t: &ScalarTestFunction, shell: usize) -> Result<f64> {
        let eta = symplectic_form(s, t, self.grid())?;
        let lhs = self.twisted_weyl(s)?.mul(&self.twisted_weyl(t)?);
        let rhs = self.twisted_weyl(&s.add(t))?.scale(Complex64::from_polar(1.0, eta / 2.0));
        let d = lhs.sub(&rhs);
        let cols = self.bose().fock().shell_mask(shell);
        Ok((0..self.fermi().dim())
            .map(|j| masked_dense_norm(&d.fermion_diagonal_block(j), Some(&cols)))
            .fold(0.0, f64::max))
    }

    /// W^λ(s)W^λ(−s) − I on the whole truncated space.
    pub fn inverse_residual(&self, s: &ScalarTestFunction) -> Result<f64> {
        let p = self.twisted_weyl(s)?.mul(&self.twisted_weyl(&s.neg())?);
        Ok(p.sub(&self.identity()).norm())
    }

    /// max over the given fermion basis states of ‖exp(i·φ^λ(s)_jj) − W^λ(s)_jj‖,
    /// both operators being diagonal in the fermion basis.
    pub fn exp_consistency(&self, s: &ScalarTestFunction, fermion_states: &[usize]) -> Result<f64> {
        let phi = self.twisted_field(s)?;
        let w = self.twisted_weyl(s)?;
        assert!(phi.is_fermion_diagonal() && w.is_fermion_diagonal());
        let mut worst = 0.0f64;
        for &j in fermion_states {
            let e = (phi.fermion_diagonal_block(j) * Complex64::i()).exp();
            worst = worst.max((e - w.fermion_diagonal_block(j)).norm());
        }
        Ok(worst)
    }

    /// ‖W^λ(s) restricted to Ω_f − W(s)‖.
    pub fn vacuum_restriction_residual(&self, s: &ScalarTestFunction) -> Result<f64> {
        let w = self.twisted_weyl(s)?;
        Ok((w.fermion_diagonal_block(0) - self.bose().weyl(s)?).norm())
    }

    /// (‖[φ^λ(s), N_f]‖, ‖[φ^λ(s), Q]‖).
    pub fn conservation_residuals(&self, s: &ScalarTestFunction) -> Result<(f64, f64)> {
        let phi = self.twisted_field(s)?;
        let n = self.fermi_op(self.fermi().number_operator());
        let q = self.fermi_op(self.fermi().charge_operator());
        Ok((phi.commutator(&n).norm(), phi.commutator(&q).norm()))
    }

    /// ‖a_{b,σ}(s)(Ω_f ⊗ Ω_b)‖.
    pub fn annihilates_vacuum(&self, s: &ScalarTestFunction) -> Result<f64> {
        let a = self.twisted_annihilation(s)?;
        Ok(a.apply(&self.vacuum()).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
    }

    /// On one-electron states 𝛍^a_σ(s) must act as multiplication by −σ⋆s₀.
    pub fn one_electron_mu_residual(&self, s: &ScalarTestFunction) -> Result<f64> {
        let c = self.sigma_s0(s)?;
        let mu = self.mu_fock(s)?;
        let f = self.fermi();
        let h = f.space();
        let n = self.grid().len();
        let mut acc = 0.0;
        for m in 0..h.sector_len() {
            let j = f.state_index(&[m as u32]).expect("one-particle state");
            for i in 0..f.dim() {
                let expect = if i == j { Complex64::new(-c[m % n], 0.0) } else { Complex64::new(0.0, 0.0) };
                acc += (mu.get(i, j) - expect).norm_sqr();
            }
        }
        Ok(acc.sqrt())
    }

    /// Generic twisted-field block used by sweeps: ⟨u, φ^λ(s) v⟩.
    pub fn field_matrix_element(&self, s: &ScalarTestFunction, u: &[Complex64], v: &[Complex64]) -> Result<Complex64> {
        Ok(self.twisted_field(s)?.matrix_element(u, v))
    }
}

/// ‖A‖_F restricted to column and row masks, for dense boson-only checks.
pub fn masked_dense_norm(m: &DMatrix<Complex64>, cols: Option<&[bool]>) -> f64 {
    let mut acc = 0.0;
    for j in 0..m.ncols() {
        if cols.is_none_or(|c| c[j]) {
            acc += m.column(j).norm_squared();
        }
    }
    acc.sqrt()
}
