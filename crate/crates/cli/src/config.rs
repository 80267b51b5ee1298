use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use twistlab::bose::MAX_MODES;
use twistlab::lattice::{gaussian, DiffOp, Grid, Sampling, TwistKernel};
use twistlab::twisted::ModelConfig;

use crate::error::{CliError, CliResult, Context};
use crate::suites::SUITES;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub dim: usize,
    pub n: usize,
    pub dx: f64,
}

impl GridConfig {
    pub fn build(&self) -> CliResult<Grid> {
        Grid::new(self.dim, self.n, self.dx).context("grid")
    }
}

/// Gaussian bump used as a boson mode generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub center: usize,
    pub width: f64,
    #[serde(default = "one")]
    pub amp: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingConfig {
    Spectral,
    Pointwise,
}

impl From<SamplingConfig> for Sampling {
    fn from(s: SamplingConfig) -> Self {
        match s {
            SamplingConfig::Spectral => Sampling::Spectral,
            SamplingConfig::Pointwise => Sampling::Pointwise,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum KernelConfig {
    Delta,
    Constant,
    Zero,
    Yukawa { mass: f64, sampling: SamplingConfig },
    Coulomb { sampling: SamplingConfig },
    Tabulated { values: Vec<f64> },
}

impl KernelConfig {
    pub fn build(&self, grid: &Grid) -> CliResult<TwistKernel> {
        match self {
            Self::Delta => Ok(TwistKernel::delta(grid)),
            Self::Constant => Ok(TwistKernel::constant(grid)),
            Self::Zero => Ok(TwistKernel::zero(grid)),
            Self::Yukawa { mass, sampling } => TwistKernel::yukawa(grid, *mass, (*sampling).into()).context("yukawa kernel"),
            Self::Coulomb { sampling } => TwistKernel::coulomb(grid, (*sampling).into()).context("coulomb kernel"),
            Self::Tabulated { values } => TwistKernel::tabulated(grid, values.clone()).context("tabulated kernel"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DiffOpConfig {
    None,
    Helmholtz { mass: f64 },
    NegLaplacian,
}

impl DiffOpConfig {
    pub fn op(&self) -> Option<DiffOp> {
        match self {
            Self::None => None,
            Self::Helmholtz { mass } => Some(DiffOp::Helmholtz(*mass)),
            Self::NegLaplacian => Some(DiffOp::NegLaplacian),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoulombConfig {
    pub grid: GridConfig,
    pub n_max: usize,
}

impl Default for CoulombConfig {
    fn default() -> Self {
        Self { grid: GridConfig { dim: 2, n: 8, dx: 0.5 }, n_max: 8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChoiceConfig {
    Standard,
    Mirrored,
}

/// Momentum-space demo. Widths are in units of Δk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HamiltonianConfig {
    pub grid: GridConfig,
    pub mass: f64,
    pub k_bullet: usize,
    pub k_e: usize,
    pub cutoff_width: f64,
    pub packet_width: f64,
    pub cut: f64,
    pub n_max: usize,
    pub choice: ChoiceConfig,
}

impl Default for HamiltonianConfig {
    fn default() -> Self {
        Self {
            grid: GridConfig { dim: 1, n: 16, dx: 0.5 },
            mass: 1.0,
            k_bullet: 2,
            k_e: 5,
            cutoff_width: 0.35,
            packet_width: 0.35,
            cut: 1e-6,
            n_max: 3,
            choice: ChoiceConfig::Standard,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Geometric,
}

/// Divergence scan; mass, r_min and r_step in units of Δk, ratio for geometric spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub grid: GridConfig,
    pub mass: f64,
    pub r_min: f64,
    pub r_step: f64,
    pub ratio: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            grid: GridConfig { dim: 3, n: 8, dx: 0.5 },
            mass: 0.1,
            r_min: 1.0,
            r_step: 0.5,
            ratio: 2f64.powf(1.0 / 3.0),
            count: 7,
            spacing: Spacing::Linear,
        }
    }
}

impl ScanConfig {
    pub fn radii(&self, dk: f64) -> Vec<f64> {
        (0..self.count)
            .map(|i| match self.spacing {
                Spacing::Linear => (self.r_min + self.r_step * i as f64) * dk,
                Spacing::Geometric => self.r_min * self.ratio.powi(i as i32) * dk,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub grid: GridConfig,
    pub internal_dim: usize,
    pub f_max: usize,
    pub n_max: usize,
    /// Norm of random test functions.
    pub amplitude: f64,
    /// Random draws per kernel in the twisted suite.
    pub draws: usize,
    pub generators: Vec<GeneratorConfig>,
    pub kernel: KernelConfig,
    pub diffop: DiffOpConfig,
    pub suites: Vec<String>,
    pub tolerances: BTreeMap<String, f64>,
    pub out: PathBuf,
    pub jobs: usize,
    pub coulomb: CoulombConfig,
    pub hamiltonian: HamiltonianConfig,
    pub scan: ScanConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 20240601,
            grid: GridConfig { dim: 1, n: 16, dx: 0.5 },
            internal_dim: 1,
            f_max: 2,
            n_max: 8,
            amplitude: 0.5,
            draws: 20,
            generators: vec![
                GeneratorConfig { center: 4, width: 1.0, amp: 1.0 },
                GeneratorConfig { center: 8, width: 0.7, amp: 1.0 },
                GeneratorConfig { center: 12, width: 1.2, amp: 1.0 },
            ],
            kernel: KernelConfig::Yukawa { mass: 1.0, sampling: SamplingConfig::Spectral },
            diffop: DiffOpConfig::None,
            suites: SUITES.iter().map(|s| s.to_string()).collect(),
            tolerances: BTreeMap::new(),
            out: PathBuf::from("out"),
            jobs: 1,
            coulomb: CoulombConfig::default(),
            hamiltonian: HamiltonianConfig::default(),
            scan: ScanConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
        toml::from_str(&text).map_err(|source| CliError::Parse { path: path.to_path_buf(), source })
    }

    /// Parse `KEY=VALUE` into the tolerance table.
    pub fn set_tolerance(&mut self, spec: &str) -> CliResult<()> {
        let (k, v) = spec.split_once('=').ok_or_else(|| CliError::BadTolerance(spec.into()))?;
        let v: f64 = v.trim().parse().map_err(|_| CliError::BadTolerance(spec.into()))?;
        if k.trim().is_empty() || !(v >= 0.0) || !v.is_finite() {
            return Err(CliError::BadTolerance(spec.into()));
        }
        self.tolerances.insert(k.trim().to_string(), v);
        Ok(())
    }

    pub fn tolerance(&self, suite: &str, name: &str, default: f64) -> f64 {
        self.tolerances
            .get(&format!("{suite}.{name}"))
            .or_else(|| self.tolerances.get(name))
            .or_else(|| self.tolerances.get(suite))
            .copied()
            .unwrap_or(default)
    }

    pub fn generator_fields(&self, grid: &Grid) -> Vec<Vec<f64>> {
        self.generators.iter().map(|g| gaussian(grid, g.center, g.width, g.amp)).collect()
    }

    /// Model used by the state and npoint front ends.
    pub fn model(&self, grid: &Grid) -> CliResult<ModelConfig> {
        match self.diffop.op() {
            Some(p) => ModelConfig::with_fundamental_solution(p, grid).context("fundamental solution"),
            None => Ok(ModelConfig::new(self.kernel.build(grid)?)),
        }
    }

    /// Every module precondition, checked before any computation starts.
    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(CliError::Config(m));
        let grid = self.grid.build()?;
        if self.internal_dim == 0 {
            return bad("internal_dim must be at least 1".into());
        }
        if !(1..=3).contains(&self.f_max) {
            return bad(format!("f_max = {} outside 1..=3", self.f_max));
        }
        if self.n_max < 2 {
            return bad(format!("n_max = {} must be at least 2", self.n_max));
        }
        if !(self.amplitude > 0.0 && self.amplitude.is_finite()) {
            return bad("amplitude must be positive".into());
        }
        if self.draws == 0 {
            return bad("draws must be at least 1".into());
        }
        if self.jobs == 0 {
            return bad("jobs must be at least 1".into());
        }
        if self.generators.is_empty() || self.generators.len() > MAX_MODES {
            return bad(format!("need 1..={MAX_MODES} generators, got {}", self.generators.len()));
        }
        for g in &self.generators {
            if g.center >= grid.len() || !(g.width > 0.0) || !g.amp.is_finite() {
                return bad(format!("generator {g:?} does not fit the grid"));
            }
        }
        self.model(&grid)?;
        for s in &self.suites {
            if !SUITES.contains(&s.as_str()) {
                return Err(CliError::UnknownSuite(s.clone(), SUITES.join(", ")));
            }
        }
        for (k, v) in &self.tolerances {
            if !(*v >= 0.0) || !v.is_finite() {
                return Err(CliError::BadTolerance(format!("{k}={v}")));
            }
        }
        if self.coulomb.grid.dim < 2 {
            return bad("coulomb grid needs dim ≥ 2".into());
        }
        self.coulomb.grid.build()?;
        if self.coulomb.n_max < 2 {
            return bad("coulomb n_max must be at least 2".into());
        }
        let h = &self.hamiltonian;
        let hg = h.grid.build()?;
        if !(h.mass > 0.0) || h.k_bullet >= hg.len() || h.k_e >= hg.len() || h.n_max < 2 {
            return bad("hamiltonian section out of range".into());
        }
        if !(h.cutoff_width > 0.0 && h.packet_width > 0.0 && h.cut > 0.0 && h.cut < 1.0) {
            return bad("hamiltonian widths must be positive and cut in (0, 1)".into());
        }
        let sg = self.scan.grid.build()?;
        if !(self.scan.mass > 0.0) || self.scan.count < 4 || !(self.scan.r_min > 0.0) {
            return bad("scan needs positive mass and r_min and at least four radii".into());
        }
        let radii = self.scan.radii(sg.dk());
        let rmax = (sg.n() / 2) as f64 * sg.dk();
        if radii.windows(2).any(|w| w[1] <= w[0]) || radii.last().is_some_and(|r| *r > rmax * (1.0 + 1e-12)) {
            return bad(format!("scan radii must increase and stay below {:.3} Δk", rmax / sg.dk()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid_and_round_trips() {
        let c = RunConfig::default();
        c.validate().unwrap();
        let text = toml::to_string(&c).unwrap();
        assert_eq!(toml::from_str::<RunConfig>(&text).unwrap(), c);
    }

    #[test]
    fn overrides_and_rejections() {
        let mut c = RunConfig::default();
        c.set_tolerance("twisted.relation=0").unwrap();
        assert_eq!(c.tolerance("twisted", "relation", 1e-11), 0.0);
        assert_eq!(c.tolerance("bose", "relation", 1e-11), 1e-11);
        assert!(c.set_tolerance("x").is_err());
        assert!(c.set_tolerance("x=-1").is_err());
        c.suites.push("nope".into());
        assert!(matches!(c.validate(), Err(CliError::UnknownSuite(..))));
        let c = RunConfig { n_max: 1, ..RunConfig::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn partial_file_keeps_defaults() {
        let c: RunConfig = toml::from_str("seed = 3\n[grid]\ndim = 1\nn = 8\ndx = 1.0\n[kernel]\nkind = \"delta\"\n").unwrap();
        assert_eq!(c.seed, 3);
        assert_eq!(c.n_max, 8);
        assert!(toml::from_str::<RunConfig>("bogus = 1").is_err());
    }

    #[test]
    fn shipped_reference_matches_default() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/reference.toml");
        assert_eq!(RunConfig::load(&path).unwrap(), RunConfig::default());
    }
}
