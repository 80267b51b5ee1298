//! Periodic grids, test functions, twisting kernels and spectral operators.

mod diffop;
pub mod fft;
mod grid;
mod kernel;
mod support;

pub use diffop::{apply_diffop, DiffOp};
pub use grid::Grid;
pub use kernel::{convolve, fundamental_solution, KernelKind, Sampling, TwistKernel};
pub use support::{ball, minkowski_sum, support, support_by, SiteSet};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// The Weyl label s = (s₀, s₁).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarTestFunction {
    pub s0: Vec<f64>,
    pub s1: Vec<f64>,
}

impl ScalarTestFunction {
    pub fn new(s0: Vec<f64>, s1: Vec<f64>) -> Result<Self> {
        if s0.len() != s1.len() {
            return Err(Error::DimensionMismatch { expected: s0.len(), got: s1.len() });
        }
        if s0.iter().chain(&s1).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("test function"));
        }
        Ok(Self { s0, s1 })
    }

    pub fn zero(len: usize) -> Self {
        Self { s0: vec![0.0; len], s1: vec![0.0; len] }
    }

    pub fn from_s0(s0: Vec<f64>) -> Self {
        let n = s0.len();
        Self { s0, s1: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.s0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s0.is_empty()
    }

    /// f = s₀ + i s₁.
    pub fn complexified(&self) -> Vec<Complex64> {
        self.s0.iter().zip(&self.s1).map(|(&a, &b)| Complex64::new(a, b)).collect()
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self { s0: self.s0.iter().map(|v| a * v).collect(), s1: self.s1.iter().map(|v| a * v).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            s0: self.s0.iter().zip(&other.s0).map(|(a, b)| a + b).collect(),
            s1: self.s1.iter().zip(&other.s1).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scaled(-1.0)
    }

    /// (T_a s)(x) = s(x − a).
    pub fn shifted(&self, grid: &Grid, a: &[i64]) -> Self {
        Self { s0: shift_field(grid, &self.s0, a), s1: shift_field(grid, &self.s1, a) }
    }

    /// Sites where max(|s₀|, |s₁|) > tol.
    pub fn support(&self, tol: f64) -> SiteSet {
        (0..self.len()).filter(|&i| self.s0[i].abs().max(self.s1[i].abs()) > tol).collect()
    }

    /// L² norm of s₀ + i s₁ with the ΔV measure.
    pub fn norm(&self, grid: &Grid) -> f64 {
        let dv = grid.cell_volume();
        (dv * self.s0.iter().zip(&self.s1).map(|(a, b)| a * a + b * b).sum::<f64>()).sqrt()
    }

    /// ⟨s₀⟩ = ΔV Σ s₀.
    pub fn integral_s0(&self, grid: &Grid) -> f64 {
        grid.cell_volume() * self.s0.iter().sum::<f64>()
    }

    /// Apply a differential operator to both components.
    pub fn apply(&self, p: DiffOp, grid: &Grid) -> Self {
        Self { s0: apply_diffop(p, grid, &self.s0), s1: apply_diffop(p, grid, &self.s1) }
    }
}

/// η(s,t) = ΔV Σ (s₁t₀ − s₀t₁).
pub fn symplectic_form(s: &ScalarTestFunction, t: &ScalarTestFunction, grid: &Grid) -> Result<f64> {
    grid.check_len(s.len())?;
    grid.check_len(t.len())?;
    let sum: f64 = (0..s.len()).map(|x| s.s1[x] * t.s0[x] - s.s0[x] * t.s1[x]).sum();
    Ok(grid.cell_volume() * sum)
}

pub fn shift_field<T: Copy>(grid: &Grid, f: &[T], a: &[i64]) -> Vec<T> {
    let mut out = f.to_vec();
    for x in 0..grid.len() {
        out[grid.shift(x, a)] = f[x];
    }
    out
}

/// Dual-mode mask: which Fourier modes a projector keeps.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMask(pub Vec<bool>);

impl SpectralMask {
    /// Drops the zero mode.
    pub fn mean_zero(grid: &Grid) -> Self {
        Self((0..grid.len()).map(|k| k != 0).collect())
    }

    /// Drops the zero mode and every mode with a Nyquist component.
    pub fn band_limited(grid: &Grid) -> Self {
        Self((0..grid.len()).map(|k| k != 0 && !grid.is_nyquist(k)).collect())
    }

    pub fn project(&self, grid: &Grid, f: &[f64]) -> Vec<f64> {
        let fh: Vec<Complex64> = fft::forward_real(grid, f)
            .into_iter()
            .zip(&self.0)
            .map(|(v, &keep)| if keep { v } else { Complex64::new(0.0, 0.0) })
            .collect();
        fft::inverse_real(grid, &fh)
    }

    /// A field in the range of the projector that equals 1 exactly on `region`.
    pub fn bump(&self, grid: &Grid, region: &SiteSet) -> Result<Vec<f64>> {
        self.pinned(grid, &vec![0.0; grid.len()], region, 1.0)
    }

    /// P(base) corrected inside the range so that it equals `value` exactly on `region`.
    pub fn pinned(&self, grid: &Grid, base: &[f64], region: &SiteSet, value: f64) -> Result<Vec<f64>> {
        grid.check_len(base.len())?;
        let idx: Vec<usize> = region.iter().copied().collect();
        let cols: Vec<Vec<f64>> = idx
            .iter()
            .map(|&a| {
                let mut e = vec![0.0; grid.len()];
                e[a] = 1.0;
                self.project(grid, &e)
            })
            .collect();
        let mut out = self.project(grid, base);
        let m = idx.len();
        let baa = DMatrix::from_fn(m, m, |i, j| cols[j][idx[i]]);
        let rhs = DVector::from_iterator(m, idx.iter().map(|&a| value - out[a]));
        let y = baa.lu().solve(&rhs).ok_or_else(|| Error::Unsupported("region too large for a projected bump".into()))?;
        for (j, col) in cols.iter().enumerate() {
            for (o, c) in out.iter_mut().zip(col) {
                *o += y[j] * c;
            }
        }
        Ok(out)
    }
}

/// exp(−|x − c|²/(2w²)) with minimum-image distances, times `amp`.
pub fn gaussian(grid: &Grid, center: usize, width: f64, amp: f64) -> Vec<f64> {
    (0..grid.len())
        .map(|x| {
            let r = grid.min_image_distance(grid.difference(x, center));
            amp * (-r * r / (2.0 * width * width)).exp()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symplectic_ones() {
        let g = Grid::new(1, 4, 1.0).unwrap();
        let s = ScalarTestFunction::new(vec![1.0; 4], vec![0.0; 4]).unwrap();
        let t = ScalarTestFunction::new(vec![0.0; 4], vec![1.0; 4]).unwrap();
        assert_eq!(symplectic_form(&s, &t, &g).unwrap(), -4.0);
        assert_eq!(symplectic_form(&s, &s, &g).unwrap(), 0.0);
        let bad = ScalarTestFunction::zero(5);
        assert!(symplectic_form(&s, &bad, &g).is_err());
    }

    #[test]
    fn bump_is_one_on_region_and_masked() {
        let g = Grid::new(2, 8, 0.5).unwrap();
        let region: SiteSet = [g.site(&[2, 2]), g.site(&[2, 3]), g.site(&[3, 2])].into_iter().collect();
        let mask = SpectralMask::band_limited(&g);
        let b = mask.bump(&g, &region).unwrap();
        for &x in &region {
            assert!((b[x] - 1.0).abs() < 1e-12);
        }
        let again = mask.project(&g, &b);
        assert!(again.iter().zip(&b).all(|(a, c)| (a - c).abs() < 1e-12));
    }
}
