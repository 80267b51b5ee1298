use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::Grid;
use crate::sparse::CsrMatrix;

/// Which shift is called μ̂*(k). `Standard` shifts the argument by −k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MuChoice {
    #[default]
    Standard,
    Mirrored,
}

/// Dual grid with dispersion ϖ(k) = √(|k|² + m²).
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid {
    grid: Grid,
    mass: f64,
}

impl MomentumGrid {
    pub fn new(grid: Grid, mass: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::Unsupported(format!("dispersion mass must be positive, got {mass}")));
        }
        Ok(Self { grid, mass })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// ΔV_k.
    pub fn measure(&self) -> f64 {
        self.grid.dual_cell_volume()
    }

    pub fn omega(&self, k: usize) -> f64 {
        (self.grid.momentum_sq(k) + self.mass * self.mass).sqrt()
    }

    /// σ̂(k) = 4π/ϖ(k)².
    pub fn sigma_hat(&self, k: usize) -> f64 {
        4.0 * PI / self.omega(k).powi(2)
    }

    /// |k| measured from `center` with wraparound.
    pub fn distance(&self, k: usize, center: usize) -> f64 {
        self.grid.momentum_sq(self.grid.difference(k, center)).sqrt()
    }

    /// Dual site −k.
    pub fn negate(&self, k: usize) -> usize {
        self.grid.reflect(k)
    }

    /// (μ̂*(k)ŵ)(k') = −σ̂(k) ŵ(k' − k), periodic.
    pub fn mu_hat_star(&self, k: usize, choice: MuChoice) -> CsrMatrix {
        let n = self.len();
        let c = Complex64::new(-self.sigma_hat(k), 0.0);
        let t = (0..n)
            .map(|kp| {
                let src = match choice {
                    MuChoice::Standard => self.grid.difference(kp, k),
                    MuChoice::Mirrored => self.grid.sum(kp, k),
                };
                (kp, src, c)
            })
            .collect();
        CsrMatrix::from_triplets(n, n, t)
    }

    /// μ̂(k) = μ̂*(−k).
    pub fn mu_hat(&self, k: usize, choice: MuChoice) -> CsrMatrix {
        self.mu_hat_star(self.negate(k), choice)
    }

    /// ŵ_k(k') = ŵ(k' + k).
    pub fn shifted(&self, w: &[Complex64], k: usize) -> Vec<Complex64> {
        (0..self.len()).map(|kp| w[self.grid.sum(kp, k)]).collect()
    }

    /// Σ|v|² ΔV_k.
    pub fn norm_sq(&self, v: &[Complex64]) -> f64 {
        self.measure() * v.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    pub fn inner(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        self.measure() * u.iter().zip(v).map(|(a, b)| a.conj() * b).sum::<Complex64>()
    }
}

/// Strong-continuity surrogate for k ↦ μ̂(k): the left side and two bounds, with
/// the bare 1/m⁴ prefactor and with 16π²/m⁴.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuityReport {
    pub lhs: f64,
    pub bound_bare: f64,
    pub bound: f64,
}

impl MomentumGrid {
    pub fn continuity_check(&self, k: usize, h: usize, w: &[Complex64]) -> Result<ContinuityReport> {
        self.grid.check_len(w.len())?;
        let a = self.mu_hat(k, MuChoice::Standard).mul_vec(w);
        let b = self.mu_hat(h, MuChoice::Standard).mul_vec(w);
        let diff: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        let ratio = self.omega(k).powi(2) / self.omega(h).powi(2);
        let wk = self.shifted(w, k);
        let wh = self.shifted(w, h);
        let core: Vec<Complex64> = wk.iter().zip(&wh).map(|(x, y)| x - y * ratio).collect();
        let m4 = self.mass.powi(4);
        let c = self.norm_sq(&core);
        Ok(ContinuityReport { lhs: self.norm_sq(&diff), bound_bare: c / m4, bound: 16.0 * PI * PI * c / m4 })
    }
}

/// Real nonnegative weight g(k) on the dual grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffFunction {
    values: Vec<f64>,
}

impl CutoffFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Unsupported("cutoff values must be finite and nonnegative".into()));
        }
        Ok(Self { values })
    }

    pub fn zero(mg: &MomentumGrid) -> Self {
        Self { values: vec![0.0; mg.len()] }
    }

    /// Weight `value` at the single dual site `k`.
    pub fn single(mg: &MomentumGrid, k: usize, value: f64) -> Result<Self> {
        let mut v = vec![0.0; mg.len()];
        v[k] = value;
        Self::new(v)
    }

    /// Gaussian at `center` of the given momentum width, cut below `cut`·max and
    /// normalized to Σ g ΔV_k = 1.
    pub fn gaussian(mg: &MomentumGrid, center: usize, width: f64, cut: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::Unsupported("cutoff width must be positive".into()));
        }
        let raw: Vec<f64> = (0..mg.len()).map(|k| (-0.5 * (mg.distance(k, center) / width).powi(2)).exp()).collect();
        let values: Vec<f64> = raw.iter().map(|&v| if v >= cut { v } else { 0.0 }).collect();
        let mass: f64 = values.iter().sum::<f64>() * mg.measure();
        Self::new(values.iter().map(|v| v / mass).collect())
    }

    /// Indicator of |k| ≤ R.
    pub fn flat(mg: &MomentumGrid, radius: f64) -> Self {
        Self { values: (0..mg.len()).map(|k| if mg.distance(k, 0) <= radius { 1.0 } else { 0.0 }).collect() }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, k: usize) -> f64 {
        self.values[k]
    }

    /// Dual sites where g ≠ 0.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&k| self.values[k] != 0.0).collect()
    }
}

/// Momentum-space packet exp(−|k−k_e|²/(4w²)) normalized with ΔV_k, so |ŵ|² has width w.
pub fn gaussian_packet(mg: &MomentumGrid, center: usize, width: f64) -> Vec<Complex64> {
    let raw: Vec<Complex64> =
        (0..mg.len()).map(|k| Complex64::new((-0.25 * (mg.distance(k, center) / width).powi(2)).exp(), 0.0)).collect();
    let n = mg.norm_sq(&raw).sqrt();
    raw.into_iter().map(|z| z / n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mg() -> MomentumGrid {
        MomentumGrid::new(Grid::new(1, 16, 0.5).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn zero_shift_is_scalar() {
        let m = mg();
        let a = m.mu_hat_star(0, MuChoice::Standard);
        let expect = CsrMatrix::identity(16).scale(Complex64::new(-4.0 * PI, 0.0));
        assert!(a.sub(&expect).frobenius_norm() < 1e-13);
    }

    #[test]
    fn adjoint_is_reflected_shift() {
        let m = mg();
        for k in 0..16 {
            let d = m.mu_hat(k, MuChoice::Standard).sub(&m.mu_hat_star(k, MuChoice::Standard).adjoint());
            assert!(d.frobenius_norm() <= 1e-13);
        }
    }

    #[test]
    fn cutoff_is_unit_mass() {
        let m = mg();
        let g = CutoffFunction::gaussian(&m, 3, 0.35 * m.grid().dk(), 1e-6).unwrap();
        let mass: f64 = g.values().iter().sum::<f64>() * m.measure();
        assert!((mass - 1.0).abs() < 1e-14);
        assert_eq!(g.support(), vec![2, 3, 4]);
        assert!(CutoffFunction::new(vec![-1.0]).is_err());
    }
}
