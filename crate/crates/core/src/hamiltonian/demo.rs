use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use super::momentum::{gaussian_packet, CutoffFunction, MomentumGrid, MuChoice};
use super::system::OneFermionBosonSpace;
use crate::composite::product_vector;
use crate::error::{Error, Result};

/// Packet parameters; widths are momentum widths, sites are dual-grid indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemoParams {
    pub k_bullet: usize,
    pub k_e: usize,
    pub cutoff_width: f64,
    pub packet_width: f64,
    /// Cutoff values below this fraction of the peak are dropped.
    pub cut: f64,
    pub n_max: usize,
}

/// H^λ_g(|k_e⟩∞ ⊗ Ω_b) resolved into its zero- and one-boson parts.
#[derive(Debug, Clone, PartialEq)]
pub struct DemoReport {
    /// |⟨target, one-boson part⟩| / (‖target‖‖part‖), target = ŵ_{k∙} ⊗ a*(g)Ω_b.
    pub overlap: f64,
    /// Coefficient of the one-boson part along the target.
    pub amplitude_one: f64,
    /// Coefficient of ŵ ⊗ Ω_b.
    pub amplitude_zero: f64,
    pub ratio: f64,
    /// ϖ(k∙)²/(2π), the ratio of 4π/ϖ and 8π²/ϖ³.
    pub ratio_bare: f64,
    /// 2^{−1/2}ϖ(k∙)²/(2π), including the factor carried by 𝔥^{μφ}.
    pub ratio_expected: f64,
    pub omega_bullet: f64,
    pub modes: usize,
}

impl DemoReport {
    pub fn ratio_error(&self) -> f64 {
        (self.ratio / self.ratio_expected - 1.0).abs()
    }

    pub fn ratio_error_bare(&self) -> f64 {
        (self.ratio / self.ratio_bare - 1.0).abs()
    }
}

pub fn momentum_transfer_demo(mg: &MomentumGrid, p: &DemoParams) -> Result<DemoReport> {
    let dk = mg.grid().dk();
    if p.cutoff_width < 0.05 * dk || p.packet_width < 0.05 * dk {
        return Err(Error::Unsupported("packet widths are unresolved by the dual grid".into()));
    }
    let g = CutoffFunction::gaussian(mg, p.k_bullet, p.cutoff_width, p.cut)?;
    let space = OneFermionBosonSpace::for_cutoff(mg.clone(), &g, p.n_max, MuChoice::Standard)?;
    let w = gaussian_packet(mg, p.k_e, p.packet_width);
    let h = space.build(&g)?.total.apply(&space.product_state(&w));

    let nb = space.fock().dim();
    let shell_one: Vec<bool> = (0..nb).map(|i| space.fock().shell(i) == 1).collect();
    let one: Vec<Complex64> = h.iter().enumerate().map(|(i, z)| if shell_one[i % nb] { *z } else { Complex64::new(0.0, 0.0) }).collect();

    let rt = mg.measure().sqrt();
    let mut boson = vec![Complex64::new(0.0, 0.0); nb];
    for (j, &k) in space.modes().iter().enumerate() {
        let e = space.one_boson(j);
        boson.iter_mut().zip(&e).for_each(|(b, x)| *b += x * (g.get(k) * rt));
    }
    let target = product_vector(&mg.shifted(&w, p.k_bullet), &[&boson]);
    let dot = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>();
    let tt = dot(&target, &target).re;
    let to = dot(&target, &one);
    let oo = dot(&one, &one).re;
    let overlap = to.norm() / (tt * oo).sqrt();
    let amplitude_one = to.re / tt;

    let base = space.product_state(&w);
    let amplitude_zero = dot(&base, &h).re / dot(&base, &base).re;
    let wb = mg.omega(p.k_bullet);
    let ratio_bare = wb * wb / (2.0 * PI);
    Ok(DemoReport {
        overlap,
        amplitude_one,
        amplitude_zero,
        ratio: amplitude_one / amplitude_zero,
        ratio_bare,
        ratio_expected: FRAC_1_SQRT_2 * ratio_bare,
        omega_bullet: wb,
        modes: space.modes().len(),
    })
}
