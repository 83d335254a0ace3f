//! Artifact writing: refuses to overwrite unless forced, and records what
//! it wrote for the manifest.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use regulus::graph::Graph;
use serde::Serialize;

pub struct OutputDir {
    dir: PathBuf,
    force: bool,
    pub written: Vec<String>,
}

impl OutputDir {
    pub fn new(dir: &Path, force: bool) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(OutputDir {
            dir: dir.to_path_buf(),
            force,
            written: Vec::new(),
        })
    }

    /// Fails before anything is written if one of `names` already exists.
    pub fn reserve(&self, names: &[&str]) -> Result<()> {
        if self.force {
            return Ok(());
        }
        for name in names {
            let p = self.dir.join(name);
            if p.exists() {
                bail!("{} exists; pass --force to overwrite", p.display());
            }
        }
        Ok(())
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let p = self.dir.join(name);
        if !self.force && p.exists() && !self.written.iter().any(|w| w == name) {
            bail!("{} exists; pass --force to overwrite", p.display());
        }
        std::fs::write(&p, contents).with_context(|| format!("writing {}", p.display()))?;
        if !self.written.iter().any(|w| w == name) {
            self.written.push(name.to_string());
        }
        Ok(())
    }

    pub fn write_json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.write(name, &s)
    }

    pub fn write_csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in rows {
            w.serialize(row)?;
        }
        let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?;
        self.write(name, &String::from_utf8(bytes)?)
    }
}

/// The one-row run summary. Column order is part of the interface.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub command: String,
    pub n: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub avg_degree: f64,
    pub k: Option<usize>,
    pub seed: u64,
    pub outcome: String,
    pub exit_code: i32,
    pub elapsed_ms: u128,
}

impl Summary {
    pub fn new(command: &str, g: &Graph, k: Option<usize>, seed: u64) -> Self {
        Summary {
            command: command.into(),
            n: g.vertex_count(),
            edges: g.edge_count(),
            max_degree: g.max_degree(),
            avg_degree: g.average_degree(),
            k,
            seed,
            outcome: String::new(),
            exit_code: 0,
            elapsed_ms: 0,
        }
    }
}
