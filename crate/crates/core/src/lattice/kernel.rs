use std::f64::consts::PI;

use num_complex::Complex64;

use super::{fft, DiffOp, Grid};
use crate::error::{Error, Result};

/// How a singular kernel is placed on the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sampling {
    /// Pointwise samples with a ball-averaged origin value.
    Pointwise,
    /// Exact inverse symbol on the dual grid.
    Spectral,
}

#[derive(Debug, Clone, PartialEq)]
pub enum KernelKind {
    Delta,
    Constant,
    Yukawa { mass: f64, sampling: Sampling },
    Coulomb { sampling: Sampling },
    /// Spectral fundamental solution of a differential operator.
    Fundamental { op: DiffOp, mean_zero: bool },
    Tabulated,
}

/// The twisting factor σ, sampled on a grid together with its transform.
#[derive(Debug, Clone)]
pub struct TwistKernel {
    kind: KernelKind,
    grid: Grid,
    values: Vec<f64>,
    spectrum: Vec<Complex64>,
}

impl TwistKernel {
    fn from_values(kind: KernelKind, grid: &Grid, values: Vec<f64>) -> Result<Self> {
        grid.check_len(values.len())?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("kernel values"));
        }
        let spectrum = fft::forward_real(grid, &values);
        Ok(Self { kind, grid: grid.clone(), values, spectrum })
    }

    fn from_real_spectrum(kind: KernelKind, grid: &Grid, spec: Vec<f64>) -> Result<Self> {
        if spec.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("kernel spectrum"));
        }
        let spectrum: Vec<Complex64> = spec.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let values = fft::inverse_real(grid, &spectrum);
        Ok(Self { kind, grid: grid.clone(), values, spectrum })
    }

    /// 1/ΔV at the origin, 0 elsewhere.
    pub fn delta(grid: &Grid) -> Self {
        let mut v = vec![0.0; grid.len()];
        v[0] = 1.0 / grid.cell_volume();
        Self::from_values(KernelKind::Delta, grid, v).expect("finite")
    }

    pub fn constant(grid: &Grid) -> Self {
        Self::from_values(KernelKind::Constant, grid, vec![1.0; grid.len()]).expect("finite")
    }

    pub fn zero(grid: &Grid) -> Self {
        Self::from_values(KernelKind::Tabulated, grid, vec![0.0; grid.len()]).expect("finite")
    }

    /// e^{−m|x|}/|x|; its transform is 4π/(k²+m²).
    pub fn yukawa(grid: &Grid, mass: f64, sampling: Sampling) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::Unsupported(format!("Yukawa mass must be positive, got {mass}")));
        }
        let kind = KernelKind::Yukawa { mass, sampling };
        match sampling {
            Sampling::Spectral => {
                let spec = (0..grid.len()).map(|k| 4.0 * PI / (grid.momentum_sq(k) + mass * mass)).collect();
                Self::from_real_spectrum(kind, grid, spec)
            }
            Sampling::Pointwise => {
                let v = (0..grid.len())
                    .map(|x| {
                        let r = grid.min_image_distance(x);
                        if x == 0 {
                            origin_inverse_r(grid)
                        } else {
                            (-mass * r).exp() / r
                        }
                    })
                    .collect();
                Self::from_values(kind, grid, v)
            }
        }
    }

    /// 1/(4π|x|); the spectral version is the mean-zero inverse of −Δ.
    pub fn coulomb(grid: &Grid, sampling: Sampling) -> Result<Self> {
        let kind = KernelKind::Coulomb { sampling };
        match sampling {
            Sampling::Spectral => {
                let spec = (0..grid.len())
                    .map(|k| if k == 0 { 0.0 } else { 1.0 / grid.momentum_sq(k) })
                    .collect();
                Self::from_real_spectrum(kind, grid, spec)
            }
            Sampling::Pointwise => {
                let v = (0..grid.len())
                    .map(|x| {
                        let inv_r = if x == 0 { origin_inverse_r(grid) } else { 1.0 / grid.min_image_distance(x) };
                        inv_r / (4.0 * PI)
                    })
                    .collect();
                Self::from_values(kind, grid, v)
            }
        }
    }

    pub fn tabulated(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        Self::from_values(KernelKind::Tabulated, grid, values)
    }

    /// Spectral fundamental solution: transform 1/p(k), with the zero mode set
    /// to 0 when `mean_zero` is requested and p(0) = 0.
    pub fn fundamental_solution(op: DiffOp, grid: &Grid, mean_zero: bool) -> Result<Self> {
        let sym = op.symbol(grid);
        let mut spec = Vec::with_capacity(sym.len());
        for (k, p) in sym.iter().enumerate() {
            if *p == 0.0 {
                if mean_zero && k == 0 {
                    spec.push(0.0);
                } else {
                    return Err(Error::SingularSymbol);
                }
            } else {
                spec.push(1.0 / p);
            }
        }
        Self::from_real_spectrum(KernelKind::Fundamental { op, mean_zero }, grid, spec)
    }

    pub fn kind(&self) -> &KernelKind {
        &self.kind
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spectrum(&self) -> &[Complex64] {
        &self.spectrum
    }

    pub fn name(&self) -> String {
        match &self.kind {
            KernelKind::Delta => "delta".into(),
            KernelKind::Constant => "constant".into(),
            KernelKind::Yukawa { mass, sampling } => format!("yukawa({mass},{sampling:?})").to_lowercase(),
            KernelKind::Coulomb { sampling } => format!("coulomb({sampling:?})").to_lowercase(),
            KernelKind::Fundamental { op, mean_zero } => {
                format!("fundamental({}{})", op.name(), if *mean_zero { ",mean_zero" } else { "" })
            }
            KernelKind::Tabulated => "tabulated".into(),
        }
    }

    /// σ(x) = σ(−x) within `tol`.
    pub fn is_even(&self, tol: f64) -> bool {
        (0..self.grid.len()).all(|x| (self.values[x] - self.values[self.grid.reflect(x)]).abs() <= tol)
    }

    /// x ↦ ΔV Σ_y σ(x−y) f(y), computed spectrally.
    pub fn convolve(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.grid.check_len(f.len())?;
        let fh = fft::forward_real(&self.grid, f);
        let prod: Vec<Complex64> = fh.iter().zip(&self.spectrum).map(|(a, b)| a * b).collect();
        Ok(fft::inverse_real(&self.grid, &prod))
    }

    /// Rows (site, coordinates, value) for CSV export.
    pub fn table(&self) -> Vec<(usize, [f64; 3], f64)> {
        (0..self.grid.len()).map(|x| (x, self.grid.min_image(x), self.values[x])).collect()
    }
}

/// Origin value standing in for 1/r: the average of 1/r over the ball of
/// volume ΔV (radius a), which is d/((d−1)a) for d ≥ 2. In one dimension that
/// average diverges and 1/r is sampled at r = Δx/4.
fn origin_inverse_r(grid: &Grid) -> f64 {
    match grid.dim() {
        1 => 4.0 / grid.spacing(),
        2 => {
            let a = (grid.cell_volume() / PI).sqrt();
            2.0 / a
        }
        _ => {
            let a = (3.0 * grid.cell_volume() / (4.0 * PI)).cbrt();
            1.5 / a
        }
    }
}

pub fn convolve(sigma: &TwistKernel, f: &[f64], grid: &Grid) -> Result<Vec<f64>> {
    sigma.grid().check_same(grid)?;
    sigma.convolve(f)
}

pub fn fundamental_solution(op: DiffOp, grid: &Grid, mean_zero: bool) -> Result<TwistKernel> {
    TwistKernel::fundamental_solution(op, grid, mean_zero)
}
