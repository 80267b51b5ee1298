use num_complex::Complex64;

use super::charged::ChargedVector;
use super::model::TwistedSystem;
use crate::error::{Error, Result};
use crate::lattice::ScalarTestFunction;

/// m-point function from the matrices and from the partition sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NPointValue {
    pub matrix: Complex64,
    pub oracle: Complex64,
}

impl NPointValue {
    pub fn difference(&self) -> f64 {
        (self.matrix - self.oracle).norm()
    }
}

/// Sum over perfect pairings of `idx` (kept in order), each pair weighted by `pair(a, b)`, a < b.
fn wick(idx: &[usize], pair: &dyn Fn(usize, usize) -> Complex64) -> Complex64 {
    if idx.is_empty() {
        return Complex64::new(1.0, 0.0);
    }
    if idx.len() % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    let first = idx[0];
    (1..idx.len())
        .map(|k| {
            let rest: Vec<usize> = idx[1..].iter().enumerate().filter(|&(j, _)| j + 1 != k).map(|(_, &v)| v).collect();
            pair(first, idx[k]) * wick(&rest, pair)
        })
        .sum()
}

impl TwistedSystem {
    /// ⟨Ω^q, φ^λ(s¹)···φ^λ(s^m)Ω^q⟩.
    pub fn npoint(&self, omega: &ChargedVector, fields: &[ScalarTestFunction]) -> Result<Complex64> {
        if fields.len() > self.bose().fock().n_max() {
            return Err(Error::Truncation(format!("m = {} exceeds N_max", fields.len())));
        }
        let v = self.charged_vector(omega)?;
        let mut x = v.clone();
        for s in fields.iter().rev() {
            x = self.twisted_field(s)?.apply(&x);
        }
        Ok(v.iter().zip(&x).map(|(a, b)| a.conj() * b).sum())
    }

    /// w^σ_K = ⟨Ω¹_f, Π_{j∈K} 𝛍_{σ,s^j} Ω¹_f⟩/‖Ω¹_f‖².
    pub fn multiplication_moment(&self, omega: &ChargedVector, fields: &[&ScalarTestFunction]) -> Result<Complex64> {
        let [v] = omega.factors() else {
            return Err(Error::Unsupported("multiplication moments need a one-particle vector".into()));
        };
        let gens = fields.iter().map(|s| Ok(self.stone_generator(s)?.diagonal())).collect::<Result<Vec<_>>>()?;
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for (m, c) in v.iter().enumerate() {
            let p: Complex64 = gens.iter().map(|d| d[m]).product();
            num += c.norm_sqr() * p;
            den += c.norm_sqr();
        }
        Ok(num / den)
    }

    /// Untwisted Fock moment ⟨Ω_b, φ(s¹)···φ(s^m)Ω_b⟩ by Wick pairings, ⟨φ(f)φ(g)⟩ = ½⟨f,g⟩.
    pub fn fock_moment(&self, fields: &[&ScalarTestFunction]) -> Result<Complex64> {
        let coeffs = fields.iter().map(|s| self.bose().basis().coefficients(&s.complexified())).collect::<Result<Vec<_>>>()?;
        let pair = |a: usize, b: usize| -> Complex64 {
            0.5 * coeffs[a].iter().zip(&coeffs[b]).map(|(x, y)| x.conj() * y).sum::<Complex64>()
        };
        let idx: Vec<usize> = (0..fields.len()).collect();
        Ok(wick(&idx, &pair))
    }

    /// Σ over subsets K of {1..m}: (Fock moment on the complement)·w^σ_K.
    pub fn npoint_oracle(&self, omega: &ChargedVector, fields: &[ScalarTestFunction]) -> Result<Complex64> {
        let m = fields.len();
        let mut total = Complex64::new(0.0, 0.0);
        for mask in 0u32..(1 << m) {
            let (inside, outside): (Vec<_>, Vec<_>) = fields.iter().enumerate().partition(|(j, _)| mask & (1 << j) != 0);
            let inside: Vec<&ScalarTestFunction> = inside.into_iter().map(|(_, s)| s).collect();
            let outside: Vec<&ScalarTestFunction> = outside.into_iter().map(|(_, s)| s).collect();
            total += self.fock_moment(&outside)? * self.multiplication_moment(omega, &inside)?;
        }
        Ok(total)
    }

    pub fn npoint_both(&self, omega: &ChargedVector, fields: &[ScalarTestFunction]) -> Result<NPointValue> {
        Ok(NPointValue { matrix: self.npoint(omega, fields)?, oracle: self.npoint_oracle(omega, fields)? })
    }

    /// |w^σ_2(s¹,s²) − w^σ_1(s¹)w^σ_1(s²)|.
    pub fn external_potential_gap(&self, omega: &ChargedVector, s1: &ScalarTestFunction, s2: &ScalarTestFunction) -> Result<f64> {
        let w2 = self.multiplication_moment(omega, &[s1, s2])?;
        let a = self.multiplication_moment(omega, &[s1])?;
        let b = self.multiplication_moment(omega, &[s2])?;
        Ok((w2 - a * b).norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wick_counts_pairings() {
        let one = |_: usize, _: usize| Complex64::new(1.0, 0.0);
        assert_eq!(wick(&[0, 1, 2, 3], &one).re, 3.0);
        assert_eq!(wick(&[0, 1, 2, 3, 4, 5], &one).re, 15.0);
        assert_eq!(wick(&[0, 1, 2], &one).re, 0.0);
    }
}
