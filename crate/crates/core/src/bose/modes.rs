use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{shift_field, Grid};

pub const MAX_MODES: usize = 6;

/// Orthonormal modes (ΔV inner product) spanning the registered test functions.
#[derive(Debug, Clone)]
pub struct BosonModeBasis {
    grid: Grid,
    /// Field components per site; 1 for scalar modes.
    components: usize,
    modes: Vec<Vec<Complex64>>,
    tol: f64,
}

fn inner(dv: f64, a: &[Complex64], b: &[Complex64]) -> Complex64 {
    dv * a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>()
}

impl BosonModeBasis {
    /// Gram–Schmidt over the generators; generators already in the span are skipped.
    pub fn from_generators(grid: &Grid, generators: &[Vec<Complex64>], tol: f64) -> Result<Self> {
        Self::from_vector_generators(grid, 1, generators, tol)
    }

    /// Modes with `components` values per site, laid out component-major.
    pub fn from_vector_generators(grid: &Grid, components: usize, generators: &[Vec<Complex64>], tol: f64) -> Result<Self> {
        if components == 0 {
            return Err(Error::Unsupported("mode fields need at least one component".into()));
        }
        let dv = grid.cell_volume();
        let mut modes: Vec<Vec<Complex64>> = Vec::new();
        for g in generators {
            check_len(grid, components, g.len())?;
            let mut r = g.clone();
            // two passes for stability
            for _ in 0..2 {
                for e in &modes {
                    let c = inner(dv, e, &r);
                    r.iter_mut().zip(e).for_each(|(x, y)| *x -= c * y);
                }
            }
            let n = inner(dv, &r, &r).re.sqrt();
            if n > tol.max(1e-10) * (1.0 + inner(dv, g, g).re.sqrt()) {
                r.iter_mut().for_each(|x| *x /= n);
                modes.push(r);
            }
        }
        if modes.len() > MAX_MODES {
            return Err(Error::Unsupported(format!("{} boson modes exceed the limit of {MAX_MODES}", modes.len())));
        }
        Ok(Self { grid: grid.clone(), components, modes, tol })
    }

    pub fn from_real(grid: &Grid, generators: &[Vec<f64>], tol: f64) -> Result<Self> {
        let g: Vec<Vec<Complex64>> =
            generators.iter().map(|v| v.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
        Self::from_generators(grid, &g, tol)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[Vec<Complex64>] {
        &self.modes
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn gram(&self) -> DMatrix<Complex64> {
        let dv = self.grid.cell_volume();
        DMatrix::from_fn(self.len(), self.len(), |i, j| inner(dv, &self.modes[i], &self.modes[j]))
    }

    /// ‖f − Σ⟨e_k,f⟩e_k‖.
    pub fn residual(&self, f: &[Complex64]) -> f64 {
        let dv = self.grid.cell_volume();
        let mut r = f.to_vec();
        for e in &self.modes {
            let c = inner(dv, e, f);
            r.iter_mut().zip(e).for_each(|(x, y)| *x -= c * y);
        }
        inner(dv, &r, &r).re.max(0.0).sqrt()
    }

    /// Coordinates ⟨e_k, f⟩, refusing functions outside the span.
    pub fn coefficients(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(&self.grid, self.components, f.len())?;
        let residual = self.residual(f);
        if residual > self.tol {
            return Err(Error::SpanResidual { residual, tol: self.tol });
        }
        let dv = self.grid.cell_volume();
        Ok(self.modes.iter().map(|e| inner(dv, e, f)).collect())
    }

    /// Matrix of the lattice shift on the span, V_kl = ⟨e_k, T_a e_l⟩.
    pub fn shift_matrix(&self, a: &[i64]) -> Result<DMatrix<Complex64>> {
        let dv = self.grid.cell_volume();
        let n = self.grid.len();
        let shifted: Vec<Vec<Complex64>> = self
            .modes
            .iter()
            .map(|e| e.chunks(n).flat_map(|c| shift_field(&self.grid, c, a)).collect())
            .collect();
        let worst = shifted.iter().map(|v| self.residual(v)).fold(0.0, f64::max);
        if worst > self.tol {
            return Err(Error::NotShiftClosed(worst));
        }
        Ok(DMatrix::from_fn(self.len(), self.len(), |k, l| inner(dv, &self.modes[k], &shifted[l])))
    }
}

fn check_len(grid: &Grid, components: usize, len: usize) -> Result<()> {
    let expected = components * grid.len();
    if len == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got: len })
    }
}
