//! Machine-readable experiment reports.

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use toeplab_core::GridConfig;

pub const SCHEMA_VERSION: u32 = 1;

/// Entries kept per artifact.
pub const ARTIFACT_CAP: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Uncertain,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Uncertain => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
    /// Target and absolute tolerance.
    Near(f64, f64),
    /// Recorded without a tolerance.
    Info,
}

impl Bound {
    fn admits(self, v: f64) -> bool {
        match self {
            Bound::AtMost(t) => v <= t,
            Bound::AtLeast(t) => v >= t,
            Bound::Near(target, tol) => (v - target).abs() <= tol,
            Bound::Info => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub value: f64,
    pub bound: Bound,
    pub passed: bool,
}

/// JSON has no infinities or NaN; they are stored as `±f64::MAX` and a NaN
/// never passes.
fn finite(v: f64) -> f64 {
    if v.is_nan() {
        f64::MAX
    } else {
        v.clamp(f64::MIN, f64::MAX)
    }
}

impl Metric {
    pub fn new(value: f64, bound: Bound) -> Self {
        let passed = !value.is_nan() && bound.admits(value);
        Metric { value: finite(value), bound, passed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub experiment_id: String,
    pub status: Status,
    pub metrics: BTreeMap<String, Metric>,
    /// Coefficient or sample dumps as `[re, im]` pairs.
    pub artifacts: BTreeMap<String, Vec<[f64; 2]>>,
    pub notes: Vec<String>,
    pub config: GridConfig,
    pub seed: u64,
    pub wall_time: f64,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.get(name).map(|m| m.value)
    }

    pub fn failed_metrics(&self) -> Vec<&str> {
        self.metrics.iter().filter(|(_, m)| !m.passed).map(|(k, _)| k.as_str()).collect()
    }
}

pub struct ReportBuilder {
    id: String,
    config: GridConfig,
    seed: u64,
    start: Instant,
    metrics: BTreeMap<String, Metric>,
    artifacts: BTreeMap<String, Vec<[f64; 2]>>,
    notes: Vec<String>,
    uncertain: bool,
}

impl ReportBuilder {
    pub fn new(id: &str, config: GridConfig, seed: u64) -> Self {
        ReportBuilder {
            id: id.to_string(),
            config,
            seed,
            start: Instant::now(),
            metrics: BTreeMap::new(),
            artifacts: BTreeMap::new(),
            notes: Vec::new(),
            uncertain: false,
        }
    }

    pub fn metric(&mut self, name: impl Into<String>, value: f64, bound: Bound) -> bool {
        let m = Metric::new(value, bound);
        self.metrics.insert(name.into(), m);
        m.passed
    }

    pub fn at_most(&mut self, name: impl Into<String>, value: f64, tol: f64) -> bool {
        self.metric(name, value, Bound::AtMost(tol))
    }

    pub fn at_least(&mut self, name: impl Into<String>, value: f64, tol: f64) -> bool {
        self.metric(name, value, Bound::AtLeast(tol))
    }

    pub fn near(&mut self, name: impl Into<String>, value: f64, target: f64, tol: f64) -> bool {
        self.metric(name, value, Bound::Near(target, tol))
    }

    /// A boolean that must hold, stored as 1 or 0.
    pub fn check(&mut self, name: impl Into<String>, ok: bool) -> bool {
        self.metric(name, if ok { 1.0 } else { 0.0 }, Bound::Near(1.0, 0.0))
    }

    pub fn info(&mut self, name: impl Into<String>, value: f64) {
        self.metric(name, value, Bound::Info);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Marks the run uncertain; failing metrics still make it a failure.
    pub fn uncertain(&mut self, reason: impl Into<String>) {
        self.uncertain = true;
        self.notes.push(reason.into());
    }

    pub fn artifact(&mut self, name: impl Into<String>, values: &[Complex64]) {
        let name = name.into();
        if values.len() > ARTIFACT_CAP {
            self.notes.push(format!("artifact {name} truncated from {} to {ARTIFACT_CAP} entries", values.len()));
        }
        let v = values.iter().take(ARTIFACT_CAP).map(|c| [finite(c.re), finite(c.im)]).collect();
        self.artifacts.insert(name, v);
    }

    pub fn all_passed(&self) -> bool {
        self.metrics.values().all(|m| m.passed)
    }

    pub fn finish(self) -> ExperimentReport {
        let status = if !self.all_passed() {
            Status::Fail
        } else if self.uncertain {
            Status::Uncertain
        } else {
            Status::Pass
        };
        ExperimentReport {
            schema_version: SCHEMA_VERSION,
            experiment_id: self.id,
            status,
            metrics: self.metrics,
            artifacts: self.artifacts,
            notes: self.notes,
            config: self.config,
            seed: self.seed,
            wall_time: self.start.elapsed().as_secs_f64(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_metrics() {
        let mut b = ReportBuilder::new("x", GridConfig::default(), 1);
        b.at_most("small", 1e-9, 1e-6);
        b.info("anything", 42.0);
        assert_eq!(b.finish().status, Status::Pass);

        let mut b = ReportBuilder::new("x", GridConfig::default(), 1);
        b.at_most("small", 1e-3, 1e-6);
        b.uncertain("gap too small");
        assert_eq!(b.finish().status, Status::Fail);

        let mut b = ReportBuilder::new("x", GridConfig::default(), 1);
        b.check("ok", true);
        b.uncertain("gap too small");
        assert_eq!(b.finish().status, Status::Uncertain);
    }

    #[test]
    fn nan_never_passes_and_serialises() {
        let m = Metric::new(f64::NAN, Bound::Info);
        assert!(!m.passed);
        let mut b = ReportBuilder::new("x", GridConfig::default(), 1);
        b.info("inf", f64::INFINITY);
        b.artifact("big", &vec![Complex64::new(1.0, 2.0); 3000]);
        let r = b.finish();
        assert_eq!(r.artifacts["big"].len(), ARTIFACT_CAP);
        assert_eq!(ExperimentReport::from_json(&r.to_json()).unwrap(), r);
    }
}
