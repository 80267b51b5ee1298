use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{fft, Grid};

/// Real vector fields (𝐟₀, 𝐟₁), each `dim` components laid out component-major.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorTestFunction {
    pub f0: Vec<f64>,
    pub f1: Vec<f64>,
}

impl VectorTestFunction {
    pub fn new(grid: &Grid, f0: Vec<f64>, f1: Vec<f64>) -> Result<Self> {
        check_vector_len(grid, f0.len())?;
        check_vector_len(grid, f1.len())?;
        if f0.iter().chain(&f1).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("vector test function"));
        }
        Ok(Self { f0, f1 })
    }

    pub fn from_f0(grid: &Grid, f0: Vec<f64>) -> Result<Self> {
        let n = f0.len();
        Self::new(grid, f0, vec![0.0; n])
    }

    pub fn zero(grid: &Grid) -> Self {
        let n = grid.dim() * grid.len();
        Self { f0: vec![0.0; n], f1: vec![0.0; n] }
    }

    pub fn neg(&self) -> Self {
        Self { f0: self.f0.iter().map(|v| -v).collect(), f1: self.f1.iter().map(|v| -v).collect() }
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self { f0: self.f0.iter().map(|v| a * v).collect(), f1: self.f1.iter().map(|v| a * v).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let sum = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        Self { f0: sum(&self.f0, &other.f0), f1: sum(&self.f1, &other.f1) }
    }
}

pub(crate) fn check_vector_len(grid: &Grid, len: usize) -> Result<()> {
    let expected = grid.dim() * grid.len();
    if len == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got: len })
    }
}

fn components(grid: &Grid, f: &[f64]) -> Vec<Vec<Complex64>> {
    f.chunks(grid.len()).map(|c| fft::forward_real(grid, c)).collect()
}

/// Spectral gradient, i k̃ ŝ per component (Nyquist components dropped).
pub fn gradient(grid: &Grid, s: &[f64]) -> Result<Vec<f64>> {
    grid.check_len(s.len())?;
    let sh = fft::forward_real(grid, s);
    let mut out = Vec::with_capacity(grid.dim() * grid.len());
    for a in 0..grid.dim() {
        let d: Vec<Complex64> = sh.iter().enumerate().map(|(k, v)| v * Complex64::new(0.0, grid.derivative_wavenumber(k)[a])).collect();
        out.extend(fft::inverse_real(grid, &d));
    }
    Ok(out)
}

/// Spectral divergence Σ_a i k̃_a f̂_a.
pub fn divergence(grid: &Grid, f: &[f64]) -> Result<Vec<f64>> {
    check_vector_len(grid, f.len())?;
    let fh = components(grid, f);
    let d: Vec<Complex64> = (0..grid.len())
        .map(|k| {
            let kt = grid.derivative_wavenumber(k);
            (0..grid.dim()).map(|a| fh[a][k] * Complex64::new(0.0, kt[a])).sum()
        })
        .collect();
    Ok(fft::inverse_real(grid, &d))
}

/// div ∇ s, the spectral Laplacian with Nyquist components dropped.
pub fn laplacian(grid: &Grid, s: &[f64]) -> Result<Vec<f64>> {
    divergence(grid, &gradient(grid, s)?)
}

/// (δ_ij − k̃_i k̃_j/|k̃|²) f̂_j; modes with k̃ = 0 (the zero mode) pass through.
pub fn transverse_projector(grid: &Grid, f: &[f64]) -> Result<Vec<f64>> {
    if grid.dim() < 2 {
        return Err(Error::Unsupported("the transverse projector needs dim ≥ 2".into()));
    }
    check_vector_len(grid, f.len())?;
    let d = grid.dim();
    let mut fh = components(grid, f);
    for k in 0..grid.len() {
        let kt = grid.derivative_wavenumber(k);
        let k2: f64 = kt[..d].iter().map(|v| v * v).sum();
        if k2 == 0.0 {
            continue;
        }
        let kdotf: Complex64 = (0..d).map(|a| fh[a][k] * kt[a]).sum();
        for (a, comp) in fh.iter_mut().enumerate() {
            comp[k] -= kdotf * (kt[a] / k2);
        }
    }
    Ok(fh.iter().flat_map(|c| fft::inverse_real(grid, c)).collect())
}

/// η_tr(f, g) = ΔV Σ (𝐟₁·P_tr𝐠₀ − 𝐠₁·P_tr𝐟₀).
pub fn eta_tr(grid: &Grid, f: &VectorTestFunction, g: &VectorTestFunction) -> Result<f64> {
    let pg0 = transverse_projector(grid, &g.f0)?;
    let pf0 = transverse_projector(grid, &f.f0)?;
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    Ok(grid.cell_volume() * (dot(&f.f1, &pg0) - dot(&g.f1, &pf0)))
}
