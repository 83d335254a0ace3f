//! Simple undirected graphs over dense integer labels.
//!
//! A [`Graph`] is immutable once built. Operations that produce a subgraph
//! keep the host's vertex labels and leave dropped vertices isolated, so
//! witnesses produced deep inside a pipeline refer directly to the input
//! graph. Degree statistics of a subgraph are taken over its *support*, the
//! vertices with at least one incident edge.

mod bipartite;
mod bitset;
pub mod io;
mod ops;

use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bipartite::{BipartiteGraph, Side, SideSets};
pub use bitset::BitRow;
pub use ops::{bipartite_half, prune_min_degree, trim_b_to_degree};

pub type Vertex = usize;

/// Graphs up to this many vertices get a bitset adjacency for codegree queries.
pub const DEFAULT_BITSET_CAP: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("self loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("graph is empty")]
    EmptyGraph,
    #[error("vertex {vertex} has degree {degree} < {target}")]
    DegreeTooLow {
        vertex: Vertex,
        degree: usize,
        target: usize,
    },
    #[error("edge {0}-{1} does not cross the bipartition")]
    NotBipartite(Vertex, Vertex),
    #[error("bad bipartition: {0}")]
    BadSides(String),
}

pub struct Graph {
    n: usize,
    adj: Vec<Vec<Vertex>>,
    m: usize,
    bitset_cap: usize,
    bits: OnceLock<Option<Vec<BitRow>>>,
}

impl Clone for Graph {
    fn clone(&self) -> Self {
        Graph {
            n: self.n,
            adj: self.adj.clone(),
            m: self.m,
            bitset_cap: self.bitset_cap,
            bits: OnceLock::new(),
        }
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.adj == other.adj
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.m)
            .finish()
    }
}

/// Degree summary over the support of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub vertices: usize,
    pub edges: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    pub avg_degree: f64,
}

impl Graph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Self::from_adjacency(vec![Vec::new(); n])
    }

    /// Builds a graph, rejecting loops, duplicates and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if u >= n {
                return Err(GraphError::UnknownVertex(u));
            }
            if v >= n {
                return Err(GraphError::UnknownVertex(v));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Self::from_adjacency(adj))
    }

    /// Trusted constructor: `adj` must be symmetric, sorted and loop-free.
    pub(crate) fn from_adjacency(adj: Vec<Vec<Vertex>>) -> Self {
        debug_assert!(adj.iter().all(|l| l.windows(2).all(|w| w[0] < w[1])));
        let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
        Graph {
            n: adj.len(),
            adj,
            m,
            bitset_cap: DEFAULT_BITSET_CAP,
            bits: OnceLock::new(),
        }
    }

    /// Trusted constructor from an edge list known to be simple.
    pub(crate) fn from_simple_edges(
        n: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Self::from_adjacency(adj)
    }

    /// Overrides the vertex-count cap under which codegree uses bitsets.
    pub fn with_bitset_cap(mut self, cap: usize) -> Self {
        self.bitset_cap = cap;
        self.bits = OnceLock::new();
        self
    }

    /// Same edges on a (possibly larger) label range.
    pub fn with_vertex_count(&self, n: usize) -> Result<Self, GraphError> {
        if n < self.n && self.adj[n..].iter().any(|l| !l.is_empty()) {
            let v = (n..self.n).find(|&v| !self.adj[v].is_empty()).unwrap();
            return Err(GraphError::UnknownVertex(v));
        }
        let mut adj = self.adj.clone();
        adj.resize(n, Vec::new());
        Ok(Self::from_adjacency(adj))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `2e / n` over all labels; zero for the empty vertex set.
    pub fn average_degree(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            2.0 * self.m as f64 / self.n as f64
        }
    }

    /// Vertices with at least one incident edge.
    pub fn support(&self) -> Vec<Vertex> {
        (0..self.n).filter(|&v| !self.adj[v].is_empty()).collect()
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let support = self.support();
        let degs = support.iter().map(|&v| self.degree(v));
        let min_degree = degs.clone().min().unwrap_or(0);
        let max_degree = degs.max().unwrap_or(0);
        let avg_degree = if support.is_empty() {
            0.0
        } else {
            2.0 * self.m as f64 / support.len() as f64
        };
        DegreeStats {
            vertices: support.len(),
            edges: self.m,
            min_degree,
            max_degree,
            avg_degree,
        }
    }

    fn bitsets(&self) -> Option<&Vec<BitRow>> {
        self.bits
            .get_or_init(|| {
                (self.n <= self.bitset_cap).then(|| {
                    self.adj
                        .iter()
                        .map(|l| {
                            let mut row = BitRow::new(self.n);
                            l.iter().for_each(|&v| row.insert(v));
                            row
                        })
                        .collect()
                })
            })
            .as_ref()
    }

    /// Number of common neighbours of two distinct vertices.
    pub fn codegree(&self, u: Vertex, u2: Vertex) -> Result<usize, GraphError> {
        for w in [u, u2] {
            if w >= self.n {
                return Err(GraphError::UnknownVertex(w));
            }
        }
        Ok(self.codegree_unchecked(u, u2))
    }

    pub(crate) fn codegree_unchecked(&self, u: Vertex, u2: Vertex) -> usize {
        match self.bitsets() {
            Some(rows) => rows[u].intersection_count(&rows[u2]),
            None => sorted_intersection_count(&self.adj[u], &self.adj[u2]),
        }
    }

    /// Spanning subgraph keeping the edges accepted by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(Vertex, Vertex) -> bool) -> Graph {
        let mut adj = vec![Vec::new(); self.n];
        for (u, v) in self.edges() {
            if keep(u, v) {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        Graph::from_adjacency(adj)
    }

    /// Subgraph induced by the vertices flagged in `mask`; labels are kept.
    pub fn induced(&self, mask: &[bool]) -> Graph {
        self.filter_edges(|u, v| mask[u] && mask[v])
    }

    /// Whether every edge of `self` is an edge of `host`.
    pub fn is_subgraph_of(&self, host: &Graph) -> bool {
        self.n <= host.n && self.edges().all(|(u, v)| host.has_edge(u, v))
    }

    /// Vertices of the `k`-core of the subgraph induced by `mask`.
    pub fn core_mask(&self, mask: &[bool], k: usize) -> Vec<bool> {
        let mut alive = mask.to_vec();
        let mut deg: Vec<usize> = (0..self.n)
            .map(|v| {
                if alive[v] {
                    self.adj[v].iter().filter(|&&w| alive[w]).count()
                } else {
                    0
                }
            })
            .collect();
        let mut queue: VecDeque<Vertex> = (0..self.n).filter(|&v| alive[v] && deg[v] < k).collect();
        for &v in &queue {
            alive[v] = false;
        }
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if alive[w] {
                    deg[w] -= 1;
                    if deg[w] < k {
                        alive[w] = false;
                        queue.push_back(w);
                    }
                }
            }
        }
        alive
    }

    /// Connected components of the subgraph induced by `mask`, each sorted,
    /// ordered by smallest member.
    pub fn components(&self, mask: &[bool]) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if !mask[s] || seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.adj[v] {
                    if mask[w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

pub(crate) fn sorted_intersection_count(a: &[Vertex], b: &[Vertex]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// A claimed subgraph of some host graph, optionally claimed `k`-regular.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgraphWitness {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(Vertex, Vertex)>,
    #[serde(rename = "k", default, skip_serializing_if = "Option::is_none")]
    pub claimed_k: Option<usize>,
}

impl SubgraphWitness {
    /// Witness spanning the support of `g`, in canonical order.
    pub fn from_graph(g: &Graph, claimed_k: Option<usize>) -> Self {
        SubgraphWitness {
            vertices: g.support(),
            edges: g.edges().collect(),
            claimed_k,
        }
    }

    /// Witness from an edge list; vertices are the endpoints.
    pub fn from_edges(mut edges: Vec<(Vertex, Vertex)>, claimed_k: Option<usize>) -> Self {
        for e in &mut edges {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        let mut vertices: Vec<Vertex> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        vertices.sort_unstable();
        vertices.dedup();
        SubgraphWitness {
            vertices,
            edges,
            claimed_k,
        }
    }
}
