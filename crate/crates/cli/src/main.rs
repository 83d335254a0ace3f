//! `regulus`: generators, pipeline stages, the k-regular driver, oracles and
//! verification from the command line.
//!
//! Exit codes: 0 success, 2 failed or no witness, 3 hypothesis violated,
//! 4 usage or input error.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::PipelineArgs;

#[derive(Debug, Parser)]
#[command(
    name = "regulus",
    version,
    about = "Regular and almost-regular subgraph extraction"
)]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "REGULUS_SEED")]
    pub seed: Option<u64>,
    /// key=value config file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for the run artifacts.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
    /// Overwrite existing artifacts.
    #[arg(long, global = true)]
    pub force: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated graph as an edge list (plus sides for bipartite graphs).
    Generate {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Bound the side-A codegrees of a bipartite graph.
    CleanCodegrees {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        sides: PathBuf,
        #[arg(long)]
        k: usize,
        /// A-degree cap; defaults to the maximum A-degree.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Randomized regularization of a bipartite graph.
    Regularize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        sides: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
        /// One round only instead of iterating to a narrow window.
        #[arg(long)]
        single: bool,
        /// Enforce the iterated codegree cap and r >= r-floor.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = 2)]
        r_floor: usize,
        #[arg(long, default_value_t = regulus::regularize::DEFAULT_MAX_TRIALS)]
        max_trials: u32,
    },
    /// 64-almost-regular subgraph: from an almost-biregular input when
    /// --sides is given, else through the full pipeline or a preset.
    AlmostRegular {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        sides: Option<PathBuf>,
        /// Spread bound of the almost-biregular input.
        #[arg(long)]
        l: Option<f64>,
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        /// Forbidden K_{m0,m0} size for the sparse preset.
        #[arg(long, default_value_t = 3)]
        m0: usize,
        /// Forbidden K_{t,t} size for the degree preset.
        #[arg(long)]
        t: Option<usize>,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Find a verified k-regular subgraph.
    FindRegular {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Exact oracles: k-regular search, K_{k,k} search, k-factor.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "regular")]
        mode: OracleMode,
        #[arg(long)]
        max_subsets: Option<u64>,
        #[arg(long)]
        time_limit_ms: Option<u64>,
    },
    /// Recheck a witness or certificate against a graph.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(
            long,
            conflicts_with = "certificate",
            required_unless_present = "certificate"
        )]
        witness: Option<PathBuf>,
        /// Certificate JSON (witness, almost_regular or biregular kind).
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// find-regular over seeded G(n, p) inputs; one CSV row per run.
    Bench {
        /// Comma-separated vertex counts.
        #[arg(long, value_delimiter = ',', default_value = "200")]
        n: Vec<usize>,
        /// Expected average degree of the inputs.
        #[arg(long, default_value_t = 40.0)]
        avg: f64,
        /// Number of seeds per vertex count.
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Layered lower-bound construction with |B| = n.
    Layered {
        #[arg(long)]
        n: usize,
    },
    /// Bipartite graph meeting the regularization hypotheses for (r, s, t).
    RegularizationCorpus {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        size_a: usize,
        #[arg(long, default_value_t = 1)]
        slack: u32,
    },
    /// C4-free bipartite graph: a projective plane (--q) or random (--size-a/--size-b/--edges).
    C4free {
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        size_a: Option<usize>,
        #[arg(long)]
        size_b: Option<usize>,
        #[arg(long)]
        edges: Option<usize>,
    },
    /// Erdős–Rényi graph, by edge probability or expected average degree.
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "avg", required_unless_present = "avg")]
        p: Option<f64>,
        #[arg(long)]
        avg: Option<f64>,
    },
    /// (L, d)-almost-biregular graph with its certificate.
    Biregular {
        #[arg(long)]
        l: f64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        size_a: usize,
        #[arg(long)]
        size_b: usize,
    },
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum Preset {
    Sparse,
    Budget,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum OracleMode {
    Regular,
    Kkk,
    Factor,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(4)
        }
    }
}
