use num_complex::Complex64;

use super::{fft, Grid};

/// Constant-coefficient differential operator, applied spectrally.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiffOp {
    Identity,
    NegLaplacian,
    Helmholtz(f64),
}

impl DiffOp {
    pub fn symbol(&self, grid: &Grid) -> Vec<f64> {
        (0..grid.len())
            .map(|k| match *self {
                DiffOp::Identity => 1.0,
                DiffOp::NegLaplacian => grid.momentum_sq(k),
                DiffOp::Helmholtz(m) => grid.momentum_sq(k) + m * m,
            })
            .collect()
    }

    pub fn name(&self) -> String {
        match self {
            DiffOp::Identity => "identity".into(),
            DiffOp::NegLaplacian => "neg_laplacian".into(),
            DiffOp::Helmholtz(m) => format!("helmholtz({m})"),
        }
    }
}

pub fn apply_diffop(p: DiffOp, grid: &Grid, f: &[f64]) -> Vec<f64> {
    if p == DiffOp::Identity {
        return f.to_vec();
    }
    let sym = p.symbol(grid);
    let fh: Vec<Complex64> = fft::forward_real(grid, f).into_iter().zip(&sym).map(|(v, s)| v * s).collect();
    fft::inverse_real(grid, &fh)
}
