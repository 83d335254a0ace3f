//! End-to-end composition: codegree cleaning, regularization and thinning
//! chained into an almost-regular subgraph, the degree ladder with its case
//! split, the k-regular driver, and the two parameter presets.
//!
//! Every stage re-verifies what it receives. Multipliers of the degree
//! thresholds are named constants that a config may override ("scaled
//! mode"); overrides switch off the strict hypothesis checks of the
//! iteration and are written into the trace.

mod driver;
mod ladder;
mod stages;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::almostreg::{AlmostRegError, DEFAULT_THINNING_TRIALS};
use crate::cleanup::CleanupError;
use crate::graph::{GraphError, SubgraphWitness};
use crate::oracle::OracleBudget;
use crate::regularize::{RegularizeError, DEFAULT_MAX_TRIALS};

pub use driver::{
    budget_preset, budget_r, find_cycle, find_k_regular, sparse_preset, sparse_r, PresetReport,
};
pub use ladder::{build_ladder, build_ladder_for_delta, LadderPlan};
pub use stages::{
    general_main, kkkfree_to_almostreg, small_codeg_to_almostreg, AlmostRegularResult,
};

pub const TRACE_SCHEMA_VERSION: u32 = 1;

/// Named multipliers with their default values and meaning.
pub const CONSTANTS: [(&str, f64, &str); 4] = [
    (
        "main_avg",
        80.0,
        "average degree >= main_avg * r^2 * log2 log2 Δ",
    ),
    (
        "b_degree",
        20.0,
        "side-B degree after trimming: b_degree * r^2 * log2 log2 Δ",
    ),
    (
        "case1_degree",
        1.0,
        "low-level degree target: case1_degree * r^2 * log2 log2 Δ",
    ),
    ("kkk_edges", 4.0, "edges >= kkk_edges * (k+1)^2 * 2^s * |A|"),
];

/// Overrides used by the scaled presets of the CLI and tests.
pub fn scaled_overrides() -> BTreeMap<String, f64> {
    [
        ("main_avg", 2.0),
        ("b_degree", 1.0),
        ("case1_degree", 0.15),
        ("kkk_edges", 0.05),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Target regularity of the driver.
    pub k: usize,
    /// B-degree scale of the pipeline.
    pub r: usize,
    /// Smallest `r` accepted by strict runs; presets clamp up to it.
    pub r_floor: usize,
    #[serde(default)]
    pub scale_overrides: BTreeMap<String, f64>,
    #[serde(default)]
    pub budget: OracleBudget,
    pub max_trials: u32,
    pub thinning_trials: u32,
}

impl PipelineConfig {
    pub fn new(k: usize, r: usize) -> Self {
        PipelineConfig {
            k,
            r,
            r_floor: 2,
            scale_overrides: BTreeMap::new(),
            budget: OracleBudget::default(),
            max_trials: DEFAULT_MAX_TRIALS,
            thinning_trials: DEFAULT_THINNING_TRIALS,
        }
    }

    /// `new(k, r)` with [`scaled_overrides`].
    pub fn scaled(k: usize, r: usize) -> Self {
        PipelineConfig {
            scale_overrides: scaled_overrides(),
            ..Self::new(k, r)
        }
    }

    pub fn strict(&self) -> bool {
        self.scale_overrides.is_empty()
    }

    /// The named multiplier, overridden or default.
    pub fn constant(&self, name: &str) -> f64 {
        if let Some(&v) = self.scale_overrides.get(name) {
            return v;
        }
        CONSTANTS
            .iter()
            .find(|(n, _, _)| *n == name)
            .map(|&(_, v, _)| v)
            .unwrap_or_else(|| panic!("unknown constant {name}"))
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.k == 0 || self.r == 0 || self.r_floor == 0 {
            return Err(PipelineError::Config(
                "k, r and r_floor must be positive".into(),
            ));
        }
        if self.max_trials == 0 || self.thinning_trials == 0 {
            return Err(PipelineError::Config(
                "trial limits must be positive".into(),
            ));
        }
        for (name, &v) in &self.scale_overrides {
            if !CONSTANTS.iter().any(|(n, _, _)| n == name) {
                return Err(PipelineError::Config(format!("unknown override {name}")));
            }
            if !(v.is_finite() && v > 0.0) {
                return Err(PipelineError::Config(format!(
                    "override {name} must be positive"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PipelineError {
    #[error("{stage}: hypothesis violated: {detail}")]
    HypothesisViolated { stage: String, detail: String },
    #[error("{stage}: failed: {detail}")]
    Failed { stage: String, detail: String },
    #[error("found K_{{k,k}} with {} vertices", .0.vertices.len())]
    KkkFound(SubgraphWitness),
    #[error("maximum degree {0} < 4")]
    DegenerateDelta(usize),
    /// The exact oracle completed and proved there is no k-regular subgraph.
    #[error("no {k}-regular subgraph exists")]
    Absent { k: usize },
    #[error("configuration: {0}")]
    Config(String),
}

impl PipelineError {
    /// 2 for failures and proven absence, 3 for violated hypotheses, 4 for
    /// configuration errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::HypothesisViolated { .. } | PipelineError::DegenerateDelta(_) => 3,
            PipelineError::Config(_) => 4,
            _ => 2,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            PipelineError::HypothesisViolated { .. } => "hypothesis_violated",
            PipelineError::Failed { .. } => "failed",
            PipelineError::KkkFound(_) => "kkk_found",
            PipelineError::DegenerateDelta(_) => "degenerate_delta",
            PipelineError::Absent { .. } => "absent",
            PipelineError::Config(_) => "config",
        }
    }

    pub(crate) fn violated(stage: &str, detail: impl Into<String>) -> Self {
        PipelineError::HypothesisViolated {
            stage: stage.into(),
            detail: detail.into(),
        }
    }

    pub(crate) fn failed(stage: &str, detail: impl Into<String>) -> Self {
        PipelineError::Failed {
            stage: stage.into(),
            detail: detail.into(),
        }
    }

    pub(crate) fn from_regularize(stage: &str, e: RegularizeError) -> Self {
        match e {
            RegularizeError::HypothesisViolated { .. }
            | RegularizeError::DegreeCapViolated { .. }
            | RegularizeError::NotRRegular { .. } => Self::violated(stage, e.to_string()),
            RegularizeError::TrialsExhausted { .. } | RegularizeError::NoProgress { .. } => {
                Self::failed(stage, e.to_string())
            }
        }
    }

    pub(crate) fn from_almostreg(e: AlmostRegError) -> Self {
        match &e {
            AlmostRegError::PreconditionViolated { stage, .. } => {
                Self::violated(stage, e.to_string())
            }
            AlmostRegError::Failed { stage, .. }
            | AlmostRegError::TrialsExhausted { stage, .. } => Self::failed(stage, e.to_string()),
        }
    }

    pub(crate) fn from_cleanup(e: CleanupError) -> Self {
        Self::violated("codegree_clean", e.to_string())
    }

    pub(crate) fn from_graph(stage: &str, e: GraphError) -> Self {
        Self::failed(stage, e.to_string())
    }
}

/// One stage of a run: name, status and stage-specific data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: String,
    pub status: String,
    pub data: serde_json::Value,
}

/// Ordered, timing-free record of a run; identical inputs give identical
/// bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineTrace {
    pub schema_version: u32,
    pub operation: String,
    pub seed: u64,
    pub strict: bool,
    pub config: Option<PipelineConfig>,
    pub warnings: Vec<String>,
    pub stages: Vec<StageRecord>,
    pub outcome: String,
}

impl PipelineTrace {
    pub fn new(operation: &str, seed: u64, cfg: Option<&PipelineConfig>) -> Self {
        PipelineTrace {
            schema_version: TRACE_SCHEMA_VERSION,
            operation: operation.into(),
            seed,
            strict: cfg.is_none_or(PipelineConfig::strict),
            config: cfg.cloned(),
            warnings: Vec::new(),
            stages: Vec::new(),
            outcome: "pending".into(),
        }
    }

    pub fn push(&mut self, stage: &str, status: &str, data: impl Serialize) {
        self.stages.push(StageRecord {
            stage: stage.into(),
            status: status.into(),
            data: serde_json::to_value(data).expect("trace data serializes"),
        });
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    pub fn stage(&self, name: &str) -> Option<&StageRecord> {
        self.stages.iter().find(|s| s.stage == name)
    }

    /// Records an error as the final stage and the outcome.
    pub(crate) fn fail(&mut self, e: &PipelineError) {
        self.push(
            "error",
            e.label(),
            serde_json::json!({ "message": e.to_string() }),
        );
        self.outcome = e.label().into();
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("trace serializes");
        s.push('\n');
        s
    }
}

/// `log2 log2 x` for `x >= 4`.
pub fn log2_log2(x: f64) -> f64 {
    x.log2().log2()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(PipelineConfig::new(3, 4).validate().is_ok());
        assert!(PipelineConfig::new(3, 4).strict());
        let s = PipelineConfig::scaled(3, 4);
        assert!(!s.strict());
        assert!(s.validate().is_ok());
        assert_eq!(s.constant("main_avg"), 2.0);
        assert_eq!(PipelineConfig::new(3, 4).constant("main_avg"), 80.0);
        let mut bad = PipelineConfig::new(3, 4);
        bad.scale_overrides.insert("nope".into(), 1.0);
        assert!(matches!(bad.validate(), Err(PipelineError::Config(_))));
        assert!(PipelineConfig::new(0, 4).validate().is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(PipelineError::DegenerateDelta(3).exit_code(), 3);
        assert_eq!(PipelineError::failed("x", "y").exit_code(), 2);
        assert_eq!(PipelineError::Absent { k: 3 }.exit_code(), 2);
        assert_eq!(PipelineError::Config("x".into()).exit_code(), 4);
    }

    #[test]
    fn trace_round_trips() {
        let mut t = PipelineTrace::new("demo", 7, Some(&PipelineConfig::scaled(3, 2)));
        t.push("a", "ok", serde_json::json!({"x": 1}));
        t.warn("w");
        let back: PipelineTrace = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.schema_version, TRACE_SCHEMA_VERSION);
        assert!(!back.strict);
    }
}
