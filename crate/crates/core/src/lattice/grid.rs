use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Periodic cubic lattice with `n` sites per axis. Sites are stored row-major,
/// last axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    dim: usize,
    n: usize,
    dx: f64,
}

impl Grid {
    pub fn new(dim: usize, n: usize, dx: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dim must be 1, 2 or 3, got {dim}")));
        }
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 sites per axis, got {n}")));
        }
        if !(dx.is_finite() && dx > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {dx}")));
        }
        Ok(Self { dim, n, dx })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.dx
    }

    /// Total number of sites N = n^dim.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// ΔV = Δx^dim.
    pub fn cell_volume(&self) -> f64 {
        self.dx.powi(self.dim as i32)
    }

    /// ΔV_k = (2π/(nΔx))^dim.
    pub fn dual_cell_volume(&self) -> f64 {
        self.dk().powi(self.dim as i32)
    }

    /// Dual lattice spacing 2π/(nΔx).
    pub fn dk(&self) -> f64 {
        2.0 * PI / (self.n as f64 * self.dx)
    }

    pub fn coords(&self, site: usize) -> [usize; 3] {
        let mut c = [0usize; 3];
        let mut rem = site;
        for a in (0..self.dim).rev() {
            c[a] = rem % self.n;
            rem /= self.n;
        }
        c
    }

    pub fn site(&self, coords: &[usize]) -> usize {
        coords[..self.dim].iter().fold(0, |acc, &c| acc * self.n + c % self.n)
    }

    /// Stride of axis `a` in the flat site index.
    pub fn stride(&self, axis: usize) -> usize {
        self.n.pow((self.dim - 1 - axis) as u32)
    }

    /// Signed momentum index j of a DFT slot c.
    pub fn momentum_index(&self, c: usize) -> i64 {
        let half = self.n.div_ceil(2);
        if c < half {
            c as i64
        } else {
            c as i64 - self.n as i64
        }
    }

    /// DFT slot of a signed momentum index.
    pub fn slot(&self, j: i64) -> usize {
        j.rem_euclid(self.n as i64) as usize
    }

    /// Momentum vector of dual site `site` (unused axes are 0).
    pub fn momentum(&self, site: usize) -> [f64; 3] {
        let c = self.coords(site);
        let mut k = [0.0; 3];
        for a in 0..self.dim {
            k[a] = self.momentum_index(c[a]) as f64 * self.dk();
        }
        k
    }

    pub fn momentum_sq(&self, site: usize) -> f64 {
        self.momentum(site).iter().map(|k| k * k).sum()
    }

    /// True if some axis of the dual site sits on the Nyquist slot (even n only).
    pub fn is_nyquist(&self, site: usize) -> bool {
        if self.n % 2 == 1 {
            return false;
        }
        let c = self.coords(site);
        (0..self.dim).any(|a| c[a] == self.n / 2)
    }

    /// Momentum with Nyquist components zeroed; used for first derivatives so
    /// that they map real fields to real fields.
    pub fn derivative_wavenumber(&self, site: usize) -> [f64; 3] {
        let c = self.coords(site);
        let mut k = self.momentum(site);
        for a in 0..self.dim {
            if self.n % 2 == 0 && c[a] == self.n / 2 {
                k[a] = 0.0;
            }
        }
        k
    }

    pub fn position(&self, site: usize) -> [f64; 3] {
        let c = self.coords(site);
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = c[a] as f64 * self.dx;
        }
        x
    }

    /// Minimum-image displacement of `site` from the origin.
    pub fn min_image(&self, site: usize) -> [f64; 3] {
        let c = self.coords(site);
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            let j = if 2 * c[a] <= self.n { c[a] as f64 } else { c[a] as f64 - self.n as f64 };
            x[a] = j * self.dx;
        }
        x
    }

    pub fn min_image_distance(&self, site: usize) -> f64 {
        self.min_image(site).iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Site reached from `site` by the integer lattice shift `a`.
    pub fn shift(&self, site: usize, a: &[i64]) -> usize {
        let c = self.coords(site);
        let mut out = [0usize; 3];
        for ax in 0..self.dim {
            let s = a.get(ax).copied().unwrap_or(0);
            out[ax] = (c[ax] as i64 + s).rem_euclid(self.n as i64) as usize;
        }
        self.site(&out)
    }

    /// Site at −x.
    pub fn reflect(&self, site: usize) -> usize {
        let c = self.coords(site);
        let mut out = [0usize; 3];
        for a in 0..self.dim {
            out[a] = (self.n - c[a]) % self.n;
        }
        self.site(&out)
    }

    /// Difference of two sites, x − y, as a site index.
    pub fn difference(&self, x: usize, y: usize) -> usize {
        let cx = self.coords(x);
        let cy = self.coords(y);
        let mut out = [0usize; 3];
        for a in 0..self.dim {
            out[a] = (cx[a] + self.n - cy[a]) % self.n;
        }
        self.site(&out)
    }

    /// Sum of two sites as a site index (dual grid: momentum addition).
    pub fn sum(&self, x: usize, y: usize) -> usize {
        let cx = self.coords(x);
        let cy = self.coords(y);
        let mut out = [0usize; 3];
        for a in 0..self.dim {
            out[a] = (cx[a] + cy[a]) % self.n;
        }
        self.site(&out)
    }

    pub fn check_same(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn check_len(&self, len: usize) -> Result<()> {
        if len == self.len() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.len(), got: len })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_volumes() {
        let g = Grid::new(3, 4, 0.5).unwrap();
        assert_eq!(g.len(), 64);
        assert!((g.cell_volume() - 0.125).abs() < 1e-15);
        assert!((g.dual_cell_volume() - PI.powi(3)).abs() < 1e-12);
    }

    #[test]
    fn momentum_range() {
        let g = Grid::new(1, 5, 1.0).unwrap();
        let js: Vec<i64> = (0..5).map(|c| g.momentum_index(c)).collect();
        assert_eq!(js, vec![0, 1, 2, -2, -1]);
        let g = Grid::new(1, 4, 1.0).unwrap();
        let js: Vec<i64> = (0..4).map(|c| g.momentum_index(c)).collect();
        assert_eq!(js, vec![0, 1, -2, -1]);
    }

    #[test]
    fn site_roundtrip_and_shift() {
        let g = Grid::new(2, 3, 1.0).unwrap();
        for s in 0..g.len() {
            assert_eq!(g.site(&g.coords(s)), s);
            assert_eq!(g.shift(g.shift(s, &[1, 2]), &[-1, -2]), s);
            assert_eq!(g.reflect(g.reflect(s)), s);
        }
        assert!(Grid::new(4, 3, 1.0).is_err());
        assert!(Grid::new(1, 1, 1.0).is_err());
    }
}
