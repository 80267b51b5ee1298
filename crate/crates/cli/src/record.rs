use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// passes when residual ≤ tolerance
    Bound,
    /// passes when residual > tolerance
    Witness,
}

/// One verification outcome. No timing: reports must be byte-stable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub name: String,
    pub anchor: String,
    pub criterion: Option<u8>,
    pub kind: CheckKind,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub sectors: String,
    pub conventions: Vec<String>,
}

impl CheckRecord {
    pub fn id(&self) -> String {
        format!("{}.{}", self.suite, self.name)
    }
}

pub const ALL_SECTORS: &str = "all";
pub const SAFE_SECTORS: &str = "n_f ≤ F_max−1, boson shell ≤ N_max−2";
pub const INTERIOR_SHELLS: &str = "boson shells ≤ N_max−1";

/// Collects records for one suite, applying tolerance overrides.
pub struct Recorder<'a> {
    suite: &'static str,
    cfg: &'a RunConfig,
    conventions: Vec<String>,
    records: Vec<CheckRecord>,
}

impl<'a> Recorder<'a> {
    pub fn new(suite: &'static str, cfg: &'a RunConfig, conventions: &[&str]) -> Self {
        Self { suite, cfg, conventions: conventions.iter().map(|c| c.to_string()).collect(), records: Vec::new() }
    }

    #[allow(clippy::too_many_arguments)]
    fn push(&mut self, kind: CheckKind, name: &str, anchor: &str, criterion: Option<u8>, residual: f64, default: f64, sectors: &str) {
        let tolerance = self.cfg.tolerance(self.suite, name, default);
        let passed = match kind {
            CheckKind::Bound => residual <= tolerance,
            CheckKind::Witness => residual > tolerance,
        };
        self.records.push(CheckRecord {
            suite: self.suite.to_string(),
            name: name.to_string(),
            anchor: anchor.to_string(),
            criterion,
            kind,
            residual,
            tolerance,
            passed,
            sectors: sectors.to_string(),
            conventions: self.conventions.clone(),
        });
    }

    pub fn bound(&mut self, name: &str, anchor: &str, criterion: Option<u8>, residual: f64, tol: f64, sectors: &str) {
        self.push(CheckKind::Bound, name, anchor, criterion, residual, tol, sectors);
    }

    pub fn witness(&mut self, name: &str, anchor: &str, criterion: Option<u8>, value: f64, threshold: f64, sectors: &str) {
        self.push(CheckKind::Witness, name, anchor, criterion, value, threshold, sectors);
    }

    /// Pass/fail fact recorded as a 0/1 residual.
    pub fn holds(&mut self, name: &str, anchor: &str, criterion: Option<u8>, ok: bool) {
        self.push(CheckKind::Bound, name, anchor, criterion, if ok { 0.0 } else { 1.0 }, 0.0, ALL_SECTORS);
    }

    pub fn cfg(&self) -> &RunConfig {
        self.cfg
    }

    pub fn finish(self) -> Vec<CheckRecord> {
        self.records
    }
}

/// Largest value, NaN-propagating.
pub fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_and_kinds() {
        let mut cfg = RunConfig::default();
        cfg.set_tolerance("demo.loose=1").unwrap();
        let mut rec = Recorder::new("demo", &cfg, &["flag"]);
        rec.bound("tight", "a", Some(1), 1e-10, 1e-12, ALL_SECTORS);
        rec.bound("loose", "a", None, 0.5, 1e-12, ALL_SECTORS);
        rec.witness("seen", "a", None, 0.2, 0.1, ALL_SECTORS);
        rec.holds("fact", "a", None, false);
        let r = rec.finish();
        assert_eq!(r.iter().map(|x| x.passed).collect::<Vec<_>>(), [false, true, true, false]);
        assert_eq!(r[1].tolerance, 1.0);
        assert_eq!(r[0].id(), "demo.tight");
        assert_eq!(r[0].conventions, ["flag"]);
    }

    #[test]
    fn worst_keeps_nan() {
        assert_eq!(worst([1.0, 3.0, 2.0]), 3.0);
        assert!(worst([1.0, f64::NAN, 2.0]).is_nan());
        assert_eq!(worst([]), 0.0);
    }
}
