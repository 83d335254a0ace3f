//! Exact ground truth at desk scale: k-factor feasibility, k-regular and
//! `K_{k,k}` subgraph search under a budget, and checkers that recompute
//! every claimed quantity of a witness or certificate from scratch.

mod kfactor;
mod kkk;
mod search;

use serde::{Deserialize, Serialize};

pub use kfactor::{has_k_factor, k_factor};
pub use kkk::find_kkk;
pub use search::find_k_regular_exact;

use crate::graph::{BipartiteGraph, Graph, Side, SideSets, SubgraphWitness, Vertex};

/// Search limits. `max_subsets` is the deterministic limit; the wall clock
/// is a safety net only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBudget {
    pub max_subsets: u64,
    pub time_limit_ms: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_subsets: 200_000,
            time_limit_ms: 60_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub subsets_tested: u64,
    pub pruned: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum SearchResult {
    Found {
        witness: SubgraphWitness,
        stats: SearchStats,
    },
    NotFound {
        stats: SearchStats,
    },
    BudgetExceeded {
        stats: SearchStats,
    },
}

impl SearchResult {
    pub fn witness(&self) -> Option<&SubgraphWitness> {
        match self {
            SearchResult::Found { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn into_witness(self) -> Option<SubgraphWitness> {
        match self {
            SearchResult::Found { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn stats(&self) -> SearchStats {
        match self {
            SearchResult::Found { stats, .. }
            | SearchResult::NotFound { stats }
            | SearchResult::BudgetExceeded { stats } => *stats,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SearchResult::Found { .. } => "found",
            SearchResult::NotFound { .. } => "not_found",
            SearchResult::BudgetExceeded { .. } => "budget_exceeded",
        }
    }
}

/// Claim that a graph is `K`-almost-regular, with its degree summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlmostRegularCertificate {
    #[serde(rename = "K")]
    pub ratio_bound: f64,
    pub vertices: usize,
    pub edges: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    pub avg_degree: f64,
}

impl AlmostRegularCertificate {
    /// Reads the degree summary off the support of `g`.
    pub fn measure(g: &Graph, ratio_bound: f64) -> Self {
        let s = g.degree_stats();
        AlmostRegularCertificate {
            ratio_bound,
            vertices: s.vertices,
            edges: s.edges,
            min_degree: s.min_degree,
            max_degree: s.max_degree,
            avg_degree: s.avg_degree,
        }
    }

    pub fn ratio(&self) -> f64 {
        self.max_degree as f64 / self.min_degree as f64
    }

    pub fn check(&self, g: &Graph) -> bool {
        let s = g.degree_stats();
        s.vertices > 0
            && s.vertices == self.vertices
            && s.edges == self.edges
            && s.min_degree == self.min_degree
            && s.max_degree == self.max_degree
            && (s.avg_degree - self.avg_degree).abs() <= 1e-9 * s.avg_degree.max(1.0)
            && self.ratio_bound > 0.0
            && self.max_degree as f64 <= self.ratio_bound * self.min_degree as f64
    }
}

/// Claim that a bipartite graph is `(L, d)`-almost-biregular: every B-degree
/// is `d`, `D = e/|A| >= d`, and every A-degree is at most `L·D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiregularCertificate {
    #[serde(rename = "L")]
    pub l: f64,
    pub d: usize,
    pub edges: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vertex>,
    #[serde(rename = "B")]
    pub b: Vec<Vertex>,
}

impl BiregularCertificate {
    pub fn measure(g: &BipartiteGraph, l: f64, d: usize) -> Self {
        BiregularCertificate {
            l,
            d,
            edges: g.edge_count(),
            a: g.side_a(),
            b: g.side_b(),
        }
    }

    /// `D = e / |A|`.
    pub fn big_d(&self) -> f64 {
        self.edges as f64 / self.a.len() as f64
    }

    pub fn check(&self, g: &BipartiteGraph) -> bool {
        let a_len = self.a.len();
        self.d >= 1
            && self.l > 0.0
            && a_len > 0
            && g.side_a() == self.a
            && g.side_b() == self.b
            && g.edge_count() == self.edges
            && self.b.iter().all(|&v| g.degree(v) == self.d)
            && self.edges >= self.d * a_len
            && self
                .a
                .iter()
                .all(|&u| (g.degree(u) * a_len) as f64 <= self.l * self.edges as f64)
    }

    /// The parts as a sidecar, for rebuilding the bipartite view of a graph.
    pub fn sides(&self) -> SideSets {
        SideSets {
            a: self.a.clone(),
            b: self.b.clone(),
        }
    }
}

/// Recomputes a witness against its host: edges exist in the host, are
/// listed once, touch only listed vertices, and, if `k` is claimed, every
/// listed vertex has exactly `k` witness edges.
pub fn check_witness(host: &Graph, w: &SubgraphWitness) -> bool {
    let n = host.vertex_count();
    if w.vertices.is_empty() || w.vertices.iter().any(|&v| v >= n) {
        return false;
    }
    let mut listed = vec![false; n];
    for &v in &w.vertices {
        if listed[v] {
            return false;
        }
        listed[v] = true;
    }
    let mut seen = std::collections::HashSet::new();
    let mut deg = vec![0usize; n];
    for &(u, v) in &w.edges {
        if u >= n || v >= n || !listed[u] || !listed[v] || !host.has_edge(u, v) {
            return false;
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return false;
        }
        deg[u] += 1;
        deg[v] += 1;
    }
    match w.claimed_k {
        Some(0) => false,
        Some(k) => w.vertices.iter().all(|&v| deg[v] == k),
        None => true,
    }
}

/// Anything [`check_certificate`] can audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Witness(SubgraphWitness),
    AlmostRegular(AlmostRegularCertificate),
    Biregular(BiregularCertificate),
}

/// Audits a certificate against `g`. For the regularity certificates `g` is
/// the certified subgraph itself; for witnesses it is the host.
pub fn check_certificate(g: &Graph, c: &Certificate) -> bool {
    match c {
        Certificate::Witness(w) => check_witness(g, w),
        Certificate::AlmostRegular(cert) => cert.check(g),
        Certificate::Biregular(cert) => BipartiteGraph::new(g.clone(), &cert.sides())
            .map(|bg| cert.check(&bg))
            .unwrap_or(false),
    }
}

/// Whether `g` is `(l, d)`-almost-biregular as it stands.
pub fn is_almost_biregular(g: &BipartiteGraph, l: f64, d: usize) -> bool {
    g.part_size(Side::A) > 0 && BiregularCertificate::measure(g, l, d).check(g)
}
