//! Run configuration: defaults, then a key=value config file, then flags.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::Args;
use regulus::pipeline::{scaled_overrides, PipelineConfig};
use serde::Deserialize;

/// Keys accepted in the config file. Overrides go in an `[overrides]`
/// table or as `overrides.name = value`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub k: Option<usize>,
    pub r: Option<usize>,
    pub r_floor: Option<usize>,
    pub scaled: Option<bool>,
    pub max_trials: Option<u32>,
    pub thinning_trials: Option<u32>,
    pub max_subsets: Option<u64>,
    pub time_limit_ms: Option<u64>,
    #[serde(default)]
    pub overrides: BTreeMap<String, f64>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(ConfigFile::default());
        };
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Flags shared by the commands that run the pipeline.
#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    /// Regularity of the sought subgraph.
    #[arg(long)]
    pub k: Option<usize>,
    /// B-degree scale; defaults to max(k, r_floor).
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub r_floor: Option<usize>,
    /// Use the built-in scaled multipliers.
    #[arg(long)]
    pub scaled: bool,
    /// Override a named multiplier, as name=value (repeatable).
    #[arg(long = "override", value_name = "NAME=VALUE")]
    pub overrides: Vec<String>,
    #[arg(long)]
    pub max_trials: Option<u32>,
    #[arg(long)]
    pub thinning_trials: Option<u32>,
    /// Deterministic oracle budget.
    #[arg(long)]
    pub max_subsets: Option<u64>,
    #[arg(long)]
    pub time_limit_ms: Option<u64>,
}

pub fn build_config(
    file: &ConfigFile,
    args: &PipelineArgs,
    default_k: usize,
) -> Result<PipelineConfig> {
    let k = args.k.or(file.k).unwrap_or(default_k);
    let r_floor = args.r_floor.or(file.r_floor).unwrap_or(2);
    let r = args.r.or(file.r).unwrap_or(k.max(r_floor));
    let mut cfg = PipelineConfig::new(k, r);
    cfg.r_floor = r_floor;
    if args.scaled || file.scaled.unwrap_or(false) {
        cfg.scale_overrides = scaled_overrides();
    }
    cfg.scale_overrides.extend(file.overrides.clone());
    for item in &args.overrides {
        let Some((name, value)) = item.split_once('=') else {
            bail!("override {item:?} is not NAME=VALUE");
        };
        let value: f64 = value
            .trim()
            .parse()
            .with_context(|| format!("override {item:?}"))?;
        cfg.scale_overrides.insert(name.trim().to_string(), value);
    }
    if let Some(v) = args.max_trials.or(file.max_trials) {
        cfg.max_trials = v;
    }
    if let Some(v) = args.thinning_trials.or(file.thinning_trials) {
        cfg.thinning_trials = v;
    }
    if let Some(v) = args.max_subsets.or(file.max_subsets) {
        cfg.budget.max_subsets = v;
    }
    if let Some(v) = args.time_limit_ms.or(file.time_limit_ms) {
        cfg.budget.time_limit_ms = v;
    }
    cfg.validate().map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok(cfg)
}
