//! Truncated bosonic Fock space over a small mode set, Segal fields and Weyl operators.

mod fock;
mod modes;

pub use fock::BosonFockSpace;
pub use modes::{BosonModeBasis, MAX_MODES};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::Result;
use crate::lattice::ScalarTestFunction;

/// Ladder operators of a [`BosonFockSpace`] built over a [`BosonModeBasis`].
#[derive(Debug, Clone)]
pub struct BosonField {
    basis: BosonModeBasis,
    fock: BosonFockSpace,
    lower: Vec<DMatrix<Complex64>>,
}

impl BosonField {
    pub fn new(basis: BosonModeBasis, n_max: usize) -> Self {
        let fock = BosonFockSpace::new(basis.len(), n_max);
        let lower = (0..basis.len()).map(|k| fock.lowering(k)).collect();
        Self { basis, fock, lower }
    }

    pub fn basis(&self) -> &BosonModeBasis {
        &self.basis
    }

    pub fn fock(&self) -> &BosonFockSpace {
        &self.fock
    }

    pub fn dim(&self) -> usize {
        self.fock.dim()
    }

    pub fn identity(&self) -> DMatrix<Complex64> {
        DMatrix::identity(self.dim(), self.dim())
    }

    /// b(f) = Σ ⟨f, e_k⟩ b_k.
    pub fn annihilation(&self, f: &[Complex64]) -> Result<DMatrix<Complex64>> {
        let c = self.basis.coefficients(f)?;
        Ok(self.annihilation_coords(&c))
    }

    pub fn annihilation_coords(&self, c: &[Complex64]) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim(), self.dim());
        for (ck, bk) in c.iter().zip(&self.lower) {
            m += bk * ck.conj();
        }
        m
    }

    /// b*(f) = Σ ⟨e_k, f⟩ b*_k; maps the top shell to 0.
    pub fn creation(&self, f: &[Complex64]) -> Result<DMatrix<Complex64>> {
        Ok(self.annihilation(f)?.adjoint())
    }

    /// φ(s) = 2^{−1/2}(b(f) + b*(f)), f = s₀ + i s₁.
    pub fn segal(&self, s: &ScalarTestFunction) -> Result<DMatrix<Complex64>> {
        self.segal_label(&s.complexified())
    }

    /// Segal field for an already complexified label f.
    pub fn segal_label(&self, f: &[Complex64]) -> Result<DMatrix<Complex64>> {
        let b = self.annihilation(f)?;
        Ok((&b + b.adjoint()) * Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0))
    }

    /// W(s) = exp(iφ(s)) on the truncated space.
    pub fn weyl(&self, s: &ScalarTestFunction) -> Result<DMatrix<Complex64>> {
        self.weyl_label(&s.complexified())
    }

    pub fn weyl_label(&self, f: &[Complex64]) -> Result<DMatrix<Complex64>> {
        Ok((self.segal_label(f)? * Complex64::i()).exp())
    }

    pub fn number(&self) -> DMatrix<Complex64> {
        self.fock.number()
    }

    pub fn vacuum(&self) -> DVector<Complex64> {
        DVector::from_vec(self.fock.vacuum())
    }

    /// Γ_s(V) for a K×K unitary on the mode span:
    /// Π_k (b*(Ve_k))^{n_k}/√(n_k!) Ω_b.
    pub fn second_quantize(&self, v: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let k = self.basis.len();
        let raised: Vec<DMatrix<Complex64>> = (0..k)
            .map(|l| {
                let mut m = DMatrix::zeros(self.dim(), self.dim());
                for j in 0..k {
                    m += self.lower[j].adjoint() * v[(j, l)];
                }
                m
            })
            .collect();
        let mut out = DMatrix::zeros(self.dim(), self.dim());
        for (col, occ) in self.fock.states().iter().enumerate() {
            let mut x = self.vacuum();
            let mut norm = 1.0;
            for (l, &n) in occ.iter().enumerate() {
                for i in 0..n {
                    x = &raised[l] * x;
                    norm *= (i + 1) as f64;
                }
            }
            out.set_column(col, &(x / Complex64::new(norm.sqrt(), 0.0)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{symplectic_form, Grid};

    fn field() -> (Grid, BosonField, Vec<ScalarTestFunction>) {
        let g = Grid::new(1, 8, 0.5).unwrap();
        let gens: Vec<Vec<f64>> = (0..3).map(|k| (0..8).map(|x| ((k + 1) as f64 * (x as f64 + 0.5)).sin()).collect()).collect();
        let basis = BosonModeBasis::from_real(&g, &gens, 1e-10).unwrap();
        let s = ScalarTestFunction::new(gens[0].iter().map(|v| 0.2 * v).collect(), gens[1].iter().map(|v| 0.1 * v).collect()).unwrap();
        let t = ScalarTestFunction::new(gens[2].iter().map(|v| -0.15 * v).collect(), gens[0].iter().map(|v| 0.2 * v).collect()).unwrap();
        (g, BosonField::new(basis, 8), vec![s, t])
    }

    fn masked(m: &DMatrix<Complex64>, rows: &[bool], cols: &[bool]) -> f64 {
        let mut acc = 0.0;
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if rows[i] && cols[j] {
                    acc += m[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    #[test]
    fn segal_commutator_is_symplectic() {
        let (g, b, st) = field();
        let (s, t) = (&st[0], &st[1]);
        let ps = b.segal(s).unwrap();
        let pt = b.segal(t).unwrap();
        let eta = symplectic_form(s, t, &g).unwrap();
        let comm = &ps * &pt - &pt * &ps + b.identity() * Complex64::new(0.0, eta);
        let inner = b.fock().shell_mask(b.fock().n_max() - 1);
        assert!(masked(&comm, &inner, &inner) < 1e-12);
    }

    #[test]
    fn vacuum_two_point() {
        let (g, b, st) = field();
        let s = &st[0];
        let p = b.segal(s).unwrap();
        let v = b.vacuum();
        let val = (v.adjoint() * &p * &p * &v)[(0, 0)];
        let n2 = s.norm(&g).powi(2);
        assert!((val.re - n2 / 2.0).abs() < 1e-12 && val.im.abs() < 1e-14);
    }

    #[test]
    fn weyl_vacuum_expectation() {
        let (g, b, st) = field();
        let s = &st[0];
        let w = b.weyl(s).unwrap();
        let v = b.vacuum();
        let val = (v.adjoint() * &w * &v)[(0, 0)];
        let expect = (-0.25 * s.norm(&g).powi(2)).exp();
        assert!((val - Complex64::new(expect, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn second_quantized_identity() {
        let (_, b, _) = field();
        let q = b.second_quantize(&DMatrix::identity(3, 3));
        assert!((q - b.identity()).norm() < 1e-13);
    }
}
