use twistlab::lattice::{fft, shift_field, symplectic_form, DiffOp, Sampling, ScalarTestFunction, SpectralMask, TwistKernel};
use twistlab::twisted::ModelConfig;
use twistlab::Complex64;

use super::{max_abs, random_real, suite_rng};
use crate::config::RunConfig;
use crate::error::{CliResult, Context};
use crate::record::{worst, CheckRecord, Recorder, ALL_SECTORS};

const CONVENTIONS: &[&str] = &["fourier: forward e^{-ik.x} weighted by ΔV", "neglaplacian zero mode: mean-zero", "delta: 1/ΔV at origin"];

pub fn run(cfg: &RunConfig) -> CliResult<Vec<CheckRecord>> {
    let mut rec = Recorder::new("lattice", cfg, CONVENTIONS);
    let g = cfg.grid.build()?;
    let n = g.len();
    let mut r = suite_rng(cfg, "lattice", 0);
    let draws = cfg.draws.min(10);

    let mut trip = Vec::new();
    let mut parseval = Vec::new();
    for _ in 0..draws {
        let re = random_real(&mut r, n);
        let im = random_real(&mut r, n);
        let f: Vec<Complex64> = re.iter().zip(&im).map(|(a, b)| Complex64::new(*a, *b)).collect();
        let fh = fft::forward(&g, &f);
        let back = fft::inverse(&g, &fh);
        trip.push(super::diff_norm(&back, &f));
        let lhs = g.cell_volume() * f.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let rhs = fh.iter().map(|z| z.norm_sqr()).sum::<f64>() / (n as f64 * g.cell_volume());
        parseval.push((lhs - rhs).abs() / lhs);
    }
    rec.bound("fft_round_trip", "Fourier inversion", None, worst(trip), 1e-12, ALL_SECTORS);
    rec.bound("parseval", "Fourier inversion", None, worst(parseval), 1e-12, ALL_SECTORS);

    let mut anti = Vec::new();
    let mut lin = Vec::new();
    for _ in 0..draws {
        let s = ScalarTestFunction::new(random_real(&mut r, n), random_real(&mut r, n)).context("test function")?;
        let t = ScalarTestFunction::new(random_real(&mut r, n), random_real(&mut r, n)).context("test function")?;
        let u = ScalarTestFunction::new(random_real(&mut r, n), random_real(&mut r, n)).context("test function")?;
        let st = symplectic_form(&s, &t, &g).context("symplectic form")?;
        let ts = symplectic_form(&t, &s, &g).context("symplectic form")?;
        anti.push((st + ts).abs());
        anti.push(symplectic_form(&s, &s, &g).context("symplectic form")?.abs());
        let (a, b) = (0.7, -1.3);
        let combo = symplectic_form(&s.scaled(a).add(&t.scaled(b)), &u, &g).context("symplectic form")?;
        let split = a * symplectic_form(&s, &u, &g).context("symplectic form")? + b * symplectic_form(&t, &u, &g).context("symplectic form")?;
        lin.push((combo - split).abs());
    }
    rec.bound("symplectic_antisymmetry", "symplectic form", Some(1), worst(anti), 1e-12, ALL_SECTORS);
    rec.bound("symplectic_bilinearity", "symplectic form", None, worst(lin), 1e-13, ALL_SECTORS);

    let kernels = vec![
        TwistKernel::delta(&g),
        TwistKernel::constant(&g),
        TwistKernel::yukawa(&g, 1.0, Sampling::Spectral).context("yukawa")?,
        TwistKernel::yukawa(&g, 1.0, Sampling::Pointwise).context("yukawa")?,
        TwistKernel::coulomb(&g, Sampling::Spectral).context("coulomb")?,
        TwistKernel::coulomb(&g, Sampling::Pointwise).context("coulomb")?,
    ];
    let f = random_real(&mut r, n);
    let h = random_real(&mut r, n);
    let shift: Vec<i64> = (0..g.dim()).map(|a| a as i64 + 1).collect();
    let mut sym = Vec::new();
    let mut cov = Vec::new();
    let mut even = true;
    for k in &kernels {
        even &= k.is_even(1e-12);
        let kf = k.convolve(&f).context("convolve")?;
        let kh = k.convolve(&h).context("convolve")?;
        let a: f64 = h.iter().zip(&kf).map(|(x, y)| x * y).sum();
        let b: f64 = kh.iter().zip(&f).map(|(x, y)| x * y).sum();
        sym.push((a - b).abs() * g.cell_volume());
        let lhs = k.convolve(&shift_field(&g, &f, &shift)).context("convolve")?;
        let rhs = shift_field(&g, &kf, &shift);
        cov.push(max_abs(&lhs.iter().zip(&rhs).map(|(x, y)| x - y).collect::<Vec<_>>()));
    }
    rec.holds("kernels_even", "named kernels", None, even);
    rec.bound("convolution_symmetric", "named kernels", None, worst(sym), 1e-12, ALL_SECTORS);
    rec.bound("convolution_translation", "named kernels", None, worst(cov), 1e-12, ALL_SECTORS);

    let delta = TwistKernel::delta(&g).convolve(&f).context("convolve")?;
    rec.bound("delta_identity", "discrete delta", None, max_abs(&delta.iter().zip(&f).map(|(a, b)| a - b).collect::<Vec<_>>()), 1e-12, ALL_SECTORS);

    let mean_zero = SpectralMask::mean_zero(&g).project(&g, &f);
    for (name, p, input) in [("fundamental_helmholtz", DiffOp::Helmholtz(1.0), &f), ("fundamental_neglaplacian", DiffOp::NegLaplacian, &mean_zero)] {
        let m = ModelConfig::with_fundamental_solution(p, &g).context("fundamental solution")?;
        let back = twistlab::lattice::apply_diffop(p, &g, &m.sigma.convolve(input).context("convolve")?);
        let res = max_abs(&back.iter().zip(input.iter()).map(|(a, b)| a - b).collect::<Vec<_>>());
        rec.bound(name, "fundamental solution", None, res, 1e-12, ALL_SECTORS);
    }
    Ok(rec.finish())
}
