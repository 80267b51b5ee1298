//! Compressed sparse row matrices over ℂ.

use nalgebra::DMatrix;
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<Complex64>,
}

impl CsrMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, indptr: vec![0; rows + 1], indices: Vec::new(), data: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn from_diagonal(d: &[Complex64]) -> Self {
        let n = d.len();
        Self { rows: n, cols: n, indptr: (0..=n).collect(), indices: (0..n).collect(), data: d.to_vec() }
    }

    /// Duplicates are summed; exact zeros are dropped.
    pub fn from_triplets(rows: usize, cols: usize, mut t: Vec<(usize, usize, Complex64)>) -> Self {
        t.sort_by_key(|&(r, c, _)| (r, c));
        let mut indptr = vec![0usize; rows + 1];
        let mut indices = Vec::with_capacity(t.len());
        let mut data: Vec<Complex64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in t {
            debug_assert!(r < rows && c < cols);
            if last == Some((r, c)) {
                *data.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                data.push(v);
                indptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..rows {
            indptr[r + 1] += indptr[r];
        }
        Self { rows, cols, indptr, indices, data }.pruned()
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> Self {
        let mut t = Vec::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if m[(i, j)] != ZERO {
                    t.push((i, j, m[(i, j)]));
                }
            }
        }
        Self::from_triplets(m.nrows(), m.ncols(), t)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.iter() {
            m[(i, j)] += v;
        }
        m
    }

    fn pruned(self) -> Self {
        if self.data.iter().all(|v| *v != ZERO) {
            return self;
        }
        let t = self.iter().filter(|(_, _, v)| *v != ZERO).collect::<Vec<_>>();
        let mut indptr = vec![0usize; self.rows + 1];
        let mut indices = Vec::with_capacity(t.len());
        let mut data = Vec::with_capacity(t.len());
        for (r, c, v) in t {
            indptr[r + 1] += 1;
            indices.push(c);
            data.push(v);
        }
        for r in 0..self.rows {
            indptr[r + 1] += indptr[r];
        }
        Self { rows: self.rows, cols: self.cols, indptr, indices, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    pub fn is_zero(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let (a, b) = (self.indptr[i], self.indptr[i + 1]);
        self.indices[a..b].iter().copied().zip(self.data[a..b].iter().copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.rows).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.row(i).find(|&(c, _)| c == j).map(|(_, v)| v).unwrap_or(ZERO)
    }

    pub fn scale(&self, a: Complex64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= a);
        out.pruned()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.iter().map(|(i, j, v)| (j, i, v.conj())).collect())
    }

    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v = v.conj());
        out
    }

    /// a·self + b·other.
    pub fn lin_comb(&self, a: Complex64, other: &Self, b: Complex64) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let mut t: Vec<_> = self.iter().map(|(i, j, v)| (i, j, a * v)).collect();
        t.extend(other.iter().map(|(i, j, v)| (i, j, b * v)));
        Self::from_triplets(self.rows, self.cols, t)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.lin_comb(Complex64::new(1.0, 0.0), other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.lin_comb(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut acc = vec![ZERO; other.cols];
        let mut touched = vec![false; other.cols];
        let mut list = Vec::new();
        let mut t = Vec::new();
        for i in 0..self.rows {
            for (k, a) in self.row(i) {
                for (j, b) in other.row(k) {
                    if !touched[j] {
                        touched[j] = true;
                        list.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            for &j in &list {
                t.push((i, j, acc[j]));
                acc[j] = ZERO;
                touched[j] = false;
            }
            list.clear();
        }
        Self::from_triplets(self.rows, other.cols, t)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows).map(|i| self.row(i).map(|(j, a)| a * v[j]).sum()).collect()
    }

    /// Dense product self · M.
    pub fn mul_dense(&self, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        assert_eq!(self.cols, m.nrows(), "shape mismatch");
        let mut out = DMatrix::zeros(self.rows, m.ncols());
        for (i, k, a) in self.iter() {
            for j in 0..m.ncols() {
                out[(i, j)] += a * m[(k, j)];
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of the block picked out by row and column masks.
    pub fn masked_norm(&self, rows: Option<&[bool]>, cols: Option<&[bool]>) -> f64 {
        self.iter()
            .filter(|&(i, j, _)| rows.is_none_or(|r| r[i]) && cols.is_none_or(|c| c[j]))
            .map(|(_, _, v)| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// True if all nonzeros are on the diagonal.
    pub fn is_diagonal(&self) -> bool {
        self.iter().all(|(i, j, _)| i == j)
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    /// Kronecker product self ⊗ other.
    pub fn kron(&self, other: &Self) -> Self {
        let mut t = Vec::with_capacity(self.nnz() * other.nnz());
        for (i, j, a) in self.iter() {
            for (k, l, b) in other.iter() {
                t.push((i * other.rows + k, j * other.cols + l, a * b));
            }
        }
        Self::from_triplets(self.rows * other.rows, self.cols * other.cols, t)
    }

    /// ‖self − selfᴴ‖_F.
    pub fn hermitian_defect(&self) -> f64 {
        self.sub(&self.adjoint()).frobenius_norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(n: usize, m: usize, seed: f64) -> DMatrix<Complex64> {
        DMatrix::from_fn(n, m, |i, j| {
            let x = ((i * 7 + j * 3) as f64 * seed).sin();
            if x.abs() < 0.4 {
                ZERO
            } else {
                c(x, (x * 3.0).cos())
            }
        })
    }

    #[test]
    fn dense_roundtrip_and_products() {
        let a = sample(5, 4, 0.9);
        let b = sample(4, 6, 1.7);
        let sa = CsrMatrix::from_dense(&a);
        let sb = CsrMatrix::from_dense(&b);
        assert_eq!(sa.to_dense(), a);
        assert!((sa.matmul(&sb).to_dense() - &a * &b).norm() < 1e-13);
        assert!((sa.adjoint().to_dense() - a.adjoint()).norm() == 0.0);
        let v: Vec<Complex64> = (0..4).map(|i| c(i as f64, 1.0)).collect();
        let dv = &a * nalgebra::DVector::from_vec(v.clone());
        for (x, y) in sa.mul_vec(&v).iter().zip(dv.iter()) {
            assert!((x - y).norm() < 1e-13);
        }
        assert!((sa.kron(&sb).to_dense() - a.kronecker(&b)).norm() < 1e-13);
    }

    #[test]
    fn cancellation_is_exact() {
        let a = CsrMatrix::from_dense(&sample(4, 4, 0.3));
        assert!(a.sub(&a).is_zero());
    }
}
