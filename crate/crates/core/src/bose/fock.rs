use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Occupations (n₁,…,n_K) with Σn ≤ N_max, ordered by shell then
/// lexicographically.
#[derive(Debug, Clone)]
pub struct BosonFockSpace {
    k: usize,
    n_max: usize,
    states: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl BosonFockSpace {
    pub fn new(k: usize, n_max: usize) -> Self {
        let mut states = Vec::new();
        for shell in 0..=n_max {
            let mut block = Vec::new();
            compositions(k, shell, &mut Vec::new(), &mut block);
            block.sort();
            block.reverse();
            states.extend(block);
        }
        let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Self { k, n_max, states, index }
    }

    pub fn modes(&self) -> usize {
        self.k
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Vec<u8>] {
        &self.states
    }

    pub fn state_index(&self, occ: &[u8]) -> Option<usize> {
        self.index.get(occ).copied()
    }

    pub fn shell(&self, i: usize) -> usize {
        self.states[i].iter().map(|&n| n as usize).sum()
    }

    /// States with shell ≤ `n`.
    pub fn shell_mask(&self, n: usize) -> Vec<bool> {
        (0..self.dim()).map(|i| self.shell(i) <= n).collect()
    }

    pub fn vacuum(&self) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim()];
        v[0] = Complex64::new(1.0, 0.0);
        v
    }

    /// b_k with b_k|…n_k…⟩ = √n_k |…n_k−1…⟩.
    pub fn lowering(&self, k: usize) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim(), self.dim());
        for (j, s) in self.states.iter().enumerate() {
            if s[k] > 0 {
                let mut t = s.clone();
                t[k] -= 1;
                m[(self.index[&t], j)] = Complex64::new((s[k] as f64).sqrt(), 0.0);
            }
        }
        m
    }

    pub fn number(&self) -> DMatrix<Complex64> {
        let d: Vec<Complex64> = (0..self.dim()).map(|i| Complex64::new(self.shell(i) as f64, 0.0)).collect();
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d))
    }
}

fn compositions(k: usize, total: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if cur.len() + 1 == k {
        cur.push(total as u8);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    if k == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for n in 0..=total {
        cur.push(n as u8);
        compositions(k, total - n, cur, out);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn dimension() {
        for (k, n) in [(1, 5), (3, 8), (2, 4), (0, 3)] {
            assert_eq!(BosonFockSpace::new(k, n).dim(), binom(k + n, k));
        }
    }

    #[test]
    fn ladder_factor() {
        let f = BosonFockSpace::new(3, 4);
        let b = f.lowering(0);
        let bd = b.adjoint();
        let v = &bd * &bd * nalgebra::DVector::from_vec(f.vacuum());
        let idx = f.state_index(&[2, 0, 0]).unwrap();
        assert!((v[idx] - Complex64::new(2f64.sqrt(), 0.0)).norm() < 1e-14);
        assert!((v.norm() - 2f64.sqrt()).abs() < 1e-14);
    }
}
