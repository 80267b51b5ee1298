use nalgebra::DMatrix;
use num_complex::Complex64;

use super::momentum::MomentumGrid;
use crate::error::{Error, Result};
use crate::fermi::{FermionFockSpace, OneParticleSpace};
use crate::lattice::{fft, KernelKind, Sampling, ScalarTestFunction, TwistKernel};

/// w_sym(y₁, ȳ₂) = w₁(y₁)w₂(ȳ₂) + w₁(ȳ₂)w₂(y₁), rows y₁.
pub fn w_sym(w1: &[Complex64], w2: &[Complex64]) -> DMatrix<Complex64> {
    let n = w1.len();
    DMatrix::from_fn(n, n, |a, b| w1[a] * w2[b] + w1[b] * w2[a])
}

/// μ̂^−(k₁, k̄₂)F(k₁', k̄₂') = σ̂(k̄₂)F(k₁', k̄₂' + k̄₂) − σ̂(k₁)F(k₁' + k₁, k̄₂').
pub fn two_fermion_mu(mg: &MomentumGrid, k1: usize, k2: usize, f: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let g = mg.grid();
    let (s1, s2) = (mg.sigma_hat(k1), mg.sigma_hat(k2));
    DMatrix::from_fn(f.nrows(), f.ncols(), |a, b| f[(a, g.sum(b, k2))] * s2 - f[(g.sum(a, k1), b)] * s1)
}

/// (NΔV)^{−1} Σ_q conj(ŝ₀(q)) μ̂^−(q, q)F̂.
pub fn smeared_two_fermion_mu(mg: &MomentumGrid, s0: &[f64], fhat: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let g = mg.grid();
    g.check_len(s0.len())?;
    let sh = fft::forward_real(g, s0);
    let scale = 1.0 / (g.len() as f64 * g.cell_volume());
    let mut out = DMatrix::zeros(fhat.nrows(), fhat.ncols());
    for (q, s) in sh.iter().enumerate() {
        out += two_fermion_mu(mg, q, q, fhat) * (s.conj() * scale);
    }
    Ok(out)
}

/// Forward transform in both arguments.
pub fn fourier2(mg: &MomentumGrid, f: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let g = mg.grid();
    let mut out = f.clone();
    for a in 0..out.nrows() {
        let row: Vec<Complex64> = out.row(a).iter().copied().collect();
        for (b, v) in fft::forward(g, &row).into_iter().enumerate() {
            out[(a, b)] = v;
        }
    }
    for b in 0..out.ncols() {
        let col: Vec<Complex64> = out.column(b).iter().copied().collect();
        for (a, v) in fft::forward(g, &col).into_iter().enumerate() {
            out[(a, b)] = v;
        }
    }
    out
}

fn yukawa(mg: &MomentumGrid) -> Result<TwistKernel> {
    let k = TwistKernel::yukawa(mg.grid(), mg.mass(), Sampling::Spectral)?;
    debug_assert!(matches!(k.kind(), KernelKind::Yukawa { .. }));
    Ok(k)
}

/// Electron–positron amplitudes F(y₁, ȳ₂) of a Fock vector, D = 1.
fn pair_amplitudes(fock: &FermionFockSpace, v: &[Complex64]) -> Result<DMatrix<Complex64>> {
    let space = fock.space();
    let n = space.grid().len();
    let unit = |x: usize| {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[x] = Complex64::new(1.0, 0.0);
        e
    };
    let mut out = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let basis = fock.wedge(&[space.electron(&unit(a))?, space.positron(&unit(b))?])?;
            out[(a, b)] = basis.iter().zip(v).map(|(x, y)| x.conj() * y).sum();
        }
    }
    Ok(out)
}

/// ‖FFT of dΓ(𝛍_{σ,s})(w₁ ∧ w̄₂) − smeared μ̂^− acting on the FFT of w₁ ∧ w̄₂‖ relative to the latter.
pub fn pair_oracle_residual(mg: &MomentumGrid, w1: &[Complex64], w2: &[Complex64], s0: &[f64]) -> Result<f64> {
    let grid = mg.grid();
    if grid.dim() != 1 && grid.len() > 64 {
        return Err(Error::Unsupported("pair oracle is sized for small grids".into()));
    }
    let space = OneParticleSpace::new(grid.clone(), 1)?;
    let fock = FermionFockSpace::new(space.clone(), 2);
    let v = fock.wedge(&[space.electron(w1)?, space.positron(w2)?])?;
    let s = ScalarTestFunction::from_s0(s0.to_vec());
    let mu = space.stone_generator(&yukawa(mg)?, &s)?;
    let out = fock.dgamma(&mu)?.mul_vec(&v);
    let fin = fourier2(mg, &pair_amplitudes(&fock, &v)?);
    let fout = fourier2(mg, &pair_amplitudes(&fock, &out)?);
    let expect = smeared_two_fermion_mu(mg, s0, &fin)?;
    Ok((fout - &expect).norm() / expect.norm().max(1e-300))
}

/// ‖FFT(𝛍_{σ,s}w) − (NΔV)^{−1}Σ_q conj(ŝ₀(q)) μ̂(q)ŵ‖ / ‖FFT(𝛍_{σ,s}w)‖ on one electron.
pub fn one_electron_consistency(mg: &MomentumGrid, w: &[Complex64], s0: &[f64]) -> Result<f64> {
    let grid = mg.grid();
    let space = OneParticleSpace::new(grid.clone(), 1)?;
    let s = ScalarTestFunction::from_s0(s0.to_vec());
    let mu = space.stone_generator(&yukawa(mg)?, &s)?;
    let direct = fft::forward(grid, space.electron_part(&mu.apply(&space.electron(w)?)));
    let what = fft::forward(grid, w);
    let sh = fft::forward_real(grid, s0);
    let scale = 1.0 / (grid.len() as f64 * grid.cell_volume());
    let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (q, sq) in sh.iter().enumerate() {
        let y = mg.mu_hat(q, super::MuChoice::Standard).mul_vec(&what);
        acc.iter_mut().zip(&y).for_each(|(a, b)| *a += b * (sq.conj() * scale));
    }
    let num: f64 = direct.iter().zip(&acc).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    let den: f64 = direct.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    Ok(num / den.max(1e-300))
}
