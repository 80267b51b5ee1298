use super::momentum::MomentumGrid;
use crate::error::{Error, Result};

/// Ordinary least squares y ≈ a·x + b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn ols(x: &[f64], y: &[f64]) -> LinearFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum();
    let ss_tot: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    LinearFit { slope, intercept, r2: 1.0 - ss_res / ss_tot }
}

/// I_p(R) = Σ_{|k|≤R} ϖ^{−p} ΔV_k.
pub fn shell_integral(mg: &MomentumGrid, p: i32, radius: f64) -> f64 {
    (0..mg.len()).filter(|&k| mg.distance(k, 0) <= radius).map(|k| mg.omega(k).powi(-p)).sum::<f64>() * mg.measure()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub p: i32,
    pub rows: Vec<(f64, f64)>,
    /// I_p against R over the upper half of the radii.
    pub linear: LinearFit,
    /// I_p against ln R over the upper half of the radii.
    pub log: LinearFit,
    /// |I_p(R_max) − I_p(R_max/2)| / I_p(R_max).
    pub cauchy_increment: f64,
}

/// Largest radius fully inside the dual grid: (n/2)Δk.
pub fn max_radius(mg: &MomentumGrid) -> f64 {
    (mg.grid().n() / 2) as f64 * mg.grid().dk()
}

pub fn uv_divergence_scan(mg: &MomentumGrid, p: i32, radii: &[f64]) -> Result<ScanReport> {
    if radii.len() < 4 || radii.windows(2).any(|w| w[1] <= w[0]) || radii[0] <= 0.0 {
        return Err(Error::Unsupported("radii must be positive, increasing, and at least four".into()));
    }
    let rmax = *radii.last().expect("nonempty");
    if rmax > max_radius(mg) * (1.0 + 1e-12) {
        return Err(Error::Unsupported(format!("radius {rmax} exceeds the dual grid ({})", max_radius(mg))));
    }
    let rows: Vec<(f64, f64)> = radii.iter().map(|&r| (r, shell_integral(mg, p, r))).collect();
    let upper = &rows[rows.len() / 2..];
    let r: Vec<f64> = upper.iter().map(|v| v.0).collect();
    let lr: Vec<f64> = r.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = upper.iter().map(|v| v.1).collect();
    let top = rows.last().expect("nonempty").1;
    let half = shell_integral(mg, p, rmax / 2.0);
    Ok(ScanReport { p, linear: ols(&r, &y), log: ols(&lr, &y), cauchy_increment: (top - half).abs() / top, rows })
}
