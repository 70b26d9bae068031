//! Machine-readable pipeline reports.

use serde::Serialize;
use serde_json::Value;

use crate::multigraded::{Degree, Surface};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    RejectedGenericity,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub payload: Value,
}

/// Tolerances shared by all commands.
#[derive(Clone, Debug, Serialize)]
pub struct Tolerances {
    /// Relative singular-value threshold for numeric ranks.
    pub tol_rank: f64,
    /// Residual threshold for decompositions.
    pub tol_res: f64,
    pub restarts: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_rank: 1e-8,
            tol_res: 1e-9,
            restarts: 64,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub tool_version: String,
    pub command: String,
    pub surface: Option<Surface>,
    pub degree: Option<Degree>,
    pub seed: u64,
    /// Seed of the form actually used after genericity rejections.
    pub form_seed: Option<u64>,
    pub rejections: usize,
    pub tolerances: Tolerances,
    pub checks: Vec<Check>,
    /// Wall-clock milliseconds per phase; the only non-reproducible field.
    pub timings_ms: Vec<(String, f64)>,
}

impl CaseReport {
    pub fn new(command: &str, surface: Option<Surface>, degree: Option<Degree>, seed: u64, tolerances: Tolerances) -> Self {
        CaseReport {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            surface,
            degree,
            seed,
            form_seed: None,
            rejections: 0,
            tolerances,
            checks: Vec::new(),
            timings_ms: Vec::new(),
        }
    }

    pub fn check(&mut self, name: &str, ok: bool, payload: Value) {
        self.checks.push(Check {
            name: name.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            payload,
        });
    }

    pub fn reject(&mut self, name: &str, payload: Value) {
        self.checks.push(Check {
            name: name.to_string(),
            status: Status::RejectedGenericity,
            payload,
        });
    }

    pub fn time(&mut self, phase: &str, start: std::time::Instant) {
        self.timings_ms
            .push((phase.to_string(), start.elapsed().as_secs_f64() * 1e3));
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.get(name).is_some_and(|c| c.status == Status::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The JSON with timings removed, for reproducibility comparisons.
    pub fn to_json_without_timings(&self) -> String {
        let mut r = self.clone();
        r.timings_ms.clear();
        r.to_json()
    }
}
