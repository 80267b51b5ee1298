use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use super::Grid;

fn transform_axes(grid: &Grid, data: &mut [Complex64], dir: FftDirection) {
    let n = grid.n();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft(n, dir);
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..grid.dim() {
        let stride = grid.stride(axis);
        for start in 0..data.len() {
            // first element of each line along `axis`
            if (start / stride) % n != 0 {
                continue;
            }
            for (j, v) in line.iter_mut().enumerate() {
                *v = data[start + j * stride];
            }
            fft.process(&mut line);
            for (j, v) in line.iter().enumerate() {
                data[start + j * stride] = *v;
            }
        }
    }
}

/// f̂(k) = ΔV Σ_x f(x) e^{−ik·x}.
pub fn forward(grid: &Grid, f: &[Complex64]) -> Vec<Complex64> {
    let mut out = f.to_vec();
    transform_axes(grid, &mut out, FftDirection::Forward);
    let dv = grid.cell_volume();
    out.iter_mut().for_each(|v| *v *= dv);
    out
}

pub fn forward_real(grid: &Grid, f: &[f64]) -> Vec<Complex64> {
    let c: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    forward(grid, &c)
}

/// Inverse of [`forward`]: f(x) = (NΔV)^{-1} Σ_k f̂(k) e^{ik·x}.
pub fn inverse(grid: &Grid, fhat: &[Complex64]) -> Vec<Complex64> {
    let mut out = fhat.to_vec();
    transform_axes(grid, &mut out, FftDirection::Inverse);
    let s = 1.0 / (grid.len() as f64 * grid.cell_volume());
    out.iter_mut().for_each(|v| *v *= s);
    out
}

/// Inverse transform keeping only the real part.
pub fn inverse_real(grid: &Grid, fhat: &[Complex64]) -> Vec<f64> {
    inverse(grid, fhat).into_iter().map(|v| v.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_naive_dft_2d() {
        let g = Grid::new(2, 4, 0.7).unwrap();
        let f: Vec<Complex64> =
            (0..g.len()).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let fh = forward(&g, &f);
        for k in 0..g.len() {
            let kv = g.momentum(k);
            let mut acc = Complex64::new(0.0, 0.0);
            for x in 0..g.len() {
                let xv = g.position(x);
                let ph = -(kv[0] * xv[0] + kv[1] * xv[1]);
                acc += f[x] * Complex64::from_polar(1.0, ph);
            }
            acc *= g.cell_volume();
            assert!((acc - fh[k]).norm() < 1e-12);
        }
        let back = inverse(&g, &fh);
        for (a, b) in back.iter().zip(&f) {
            assert!((a - b).norm() < 1e-13);
        }
    }
}
