use nalgebra::DMatrix;
use num_complex::Complex64;

use super::vector::{divergence, transverse_projector, VectorTestFunction};
use crate::bose::{BosonField, BosonModeBasis};
use crate::error::Result;
use crate::lattice::Grid;

const SPAN_TOL: f64 = 1e-10;

/// Photon modes: a truncated Fock space over P_tr-projected vector fields.
#[derive(Debug, Clone)]
pub struct TransverseSector {
    grid: Grid,
    field: BosonField,
}

impl TransverseSector {
    /// Generators are projected with P_tr before orthonormalization.
    pub fn new(grid: &Grid, generators: &[Vec<f64>], n_max: usize) -> Result<Self> {
        let projected = generators
            .iter()
            .map(|g| Ok(transverse_projector(grid, g)?.into_iter().map(|v| Complex64::new(v, 0.0)).collect()))
            .collect::<Result<Vec<Vec<Complex64>>>>()?;
        let basis = BosonModeBasis::from_vector_generators(grid, grid.dim(), &projected, SPAN_TOL)?;
        Ok(Self { grid: grid.clone(), field: BosonField::new(basis, n_max) })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn field(&self) -> &BosonField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.field.dim()
    }

    /// Largest spectral divergence over the real and imaginary parts of the modes.
    pub fn max_divergence(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for e in self.field.basis().modes() {
            let re: Vec<f64> = e.iter().map(|z| z.re).collect();
            let im: Vec<f64> = e.iter().map(|z| z.im).collect();
            for part in [re, im] {
                worst = divergence(&self.grid, &part)?.iter().fold(worst, |m, v| m.max(v.abs()));
            }
        }
        Ok(worst)
    }

    fn label(&self, f0: &[f64], f1: &[f64]) -> Result<Vec<Complex64>> {
        let p0 = transverse_projector(&self.grid, f0)?;
        let p1 = transverse_projector(&self.grid, f1)?;
        Ok(p0.iter().zip(&p1).map(|(&a, &b)| Complex64::new(a, b)).collect())
    }

    /// Segal field with label P_tr(𝐟₀ + i𝐟₁).
    pub fn field_op(&self, f: &VectorTestFunction) -> Result<DMatrix<Complex64>> {
        self.field.segal_label(&self.label(&f.f0, &f.f1)?)
    }

    /// 𝐀(𝐟₀).
    pub fn a_field(&self, f0: &[f64]) -> Result<DMatrix<Complex64>> {
        self.field.segal_label(&self.label(f0, &vec![0.0; f0.len()])?)
    }

    /// 𝐀̇(𝐟₁).
    pub fn a_dot(&self, f1: &[f64]) -> Result<DMatrix<Complex64>> {
        self.field.segal_label(&self.label(&vec![0.0; f1.len()], f1)?)
    }

    pub fn weyl_tr(&self, f: &VectorTestFunction) -> Result<DMatrix<Complex64>> {
        self.field.weyl_label(&self.label(&f.f0, &f.f1)?)
    }

    /// ‖[𝐀(𝐟₀), 𝐀̇(𝐟₁)] − iΔV Σ 𝐟₀·P_tr𝐟₁‖ on shells ≤ N_max − 1.
    pub fn ccr_residual(&self, f0: &[f64], f1: &[f64]) -> Result<f64> {
        let a = self.a_field(f0)?;
        let ad = self.a_dot(f1)?;
        let pf1 = transverse_projector(&self.grid, f1)?;
        let c = self.grid.cell_volume() * f0.iter().zip(&pf1).map(|(x, y)| x * y).sum::<f64>();
        let r = &a * &ad - &ad * &a - self.field.identity() * Complex64::new(0.0, c);
        let cols = self.field.fock().shell_mask(self.field.fock().n_max() - 1);
        Ok(crate::twisted::masked_dense_norm(&r, Some(&cols)))
    }

    /// Rows (mode, component, site, re, im) for export.
    pub fn table(&self) -> Vec<(usize, usize, usize, f64, f64)> {
        let n = self.grid.len();
        self.field
            .basis()
            .modes()
            .iter()
            .enumerate()
            .flat_map(|(k, e)| e.iter().enumerate().map(move |(i, z)| (k, i / n, i % n, z.re, z.im)))
            .collect()
    }
}
