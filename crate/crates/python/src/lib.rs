//! Python bindings: graphs, generators, exact oracles, witness checking and
//! the k-regular driver. Traces are returned as JSON strings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use regulus::generators::{self, LayeredParams};
use regulus::graph::{self, BipartiteGraph, SubgraphWitness, Vertex};
use regulus::oracle::{self, OracleBudget, SearchResult};
use regulus::pipeline::{self, PipelineConfig};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Immutable simple undirected graph on vertices `0..n`.
#[pyclass(name = "Graph", module = "regulus_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyGraph {
    inner: graph::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(Vertex, Vertex)>) -> PyResult<Self> {
        let inner = graph::Graph::from_edges(n, edges).map_err(value_err)?;
        Ok(PyGraph { inner })
    }

    /// Parses a whitespace-separated edge list.
    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        let inner = graph::io::load_edge_list(text).map_err(value_err)?;
        Ok(PyGraph { inner })
    }

    fn to_edge_list(&self) -> String {
        graph::io::write_edge_list(&self.inner)
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn degree(&self, v: Vertex) -> PyResult<usize> {
        self.check(v)?;
        Ok(self.inner.degree(v))
    }

    fn neighbors(&self, v: Vertex) -> PyResult<Vec<Vertex>> {
        self.check(v)?;
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.inner.vertex_count() && v < self.inner.vertex_count() && self.inner.has_edge(u, v)
    }

    fn edges(&self) -> Vec<(Vertex, Vertex)> {
        self.inner.edges().collect()
    }

    fn max_degree(&self) -> usize {
        self.inner.max_degree()
    }

    fn average_degree(&self) -> f64 {
        self.inner.average_degree()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, m={})",
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }
}

impl PyGraph {
    fn check(&self, v: Vertex) -> PyResult<()> {
        if v < self.inner.vertex_count() {
            Ok(())
        } else {
            Err(value_err(format!("vertex {v} out of range")))
        }
    }
}

/// A claimed subgraph: its vertices, edges and optional regularity.
#[pyclass(name = "Witness", module = "regulus_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyWitness {
    inner: SubgraphWitness,
}

#[pymethods]
impl PyWitness {
    #[new]
    #[pyo3(signature = (edges, k=None))]
    fn new(edges: Vec<(Vertex, Vertex)>, k: Option<usize>) -> Self {
        PyWitness {
            inner: SubgraphWitness::from_edges(edges, k),
        }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = serde_json::from_str(text).map_err(value_err)?;
        Ok(PyWitness { inner })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("witness serializes")
    }

    #[getter]
    fn vertices(&self) -> Vec<Vertex> {
        self.inner.vertices.clone()
    }

    #[getter]
    fn edges(&self) -> Vec<(Vertex, Vertex)> {
        self.inner.edges.clone()
    }

    #[getter]
    fn k(&self) -> Option<usize> {
        self.inner.claimed_k
    }

    fn __repr__(&self) -> String {
        format!(
            "Witness(vertices={}, edges={}, k={:?})",
            self.inner.vertices.len(),
            self.inner.edges.len(),
            self.inner.claimed_k
        )
    }
}

type Sides = (Vec<Vertex>, Vec<Vertex>);

fn split(b: BipartiteGraph) -> (PyGraph, Sides) {
    let sides = (b.side_a(), b.side_b());
    (
        PyGraph {
            inner: b.into_graph(),
        },
        sides,
    )
}

/// Erdős–Rényi `G(n, p)`.
#[pyfunction]
#[pyo3(signature = (n, p, seed=0))]
fn gen_gnp(n: usize, p: f64, seed: u64) -> PyResult<PyGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(value_err("p must lie in [0, 1]"));
    }
    Ok(PyGraph {
        inner: generators::gen_gnp(n, p, seed),
    })
}

/// Layered lower-bound construction; returns `(graph, (side_a, side_b))`.
#[pyfunction]
#[pyo3(signature = (n, seed=0))]
fn gen_layered(n: usize, seed: u64) -> PyResult<(PyGraph, Sides)> {
    generators::gen_layered(LayeredParams::new(n, seed))
        .map(split)
        .map_err(value_err)
}

/// Point-line incidence graph of the projective plane of order `q`.
#[pyfunction]
fn gen_c4free(q: usize) -> PyResult<(PyGraph, Sides)> {
    generators::gen_c4free_bipartite(q)
        .map(split)
        .map_err(value_err)
}

fn budget(max_subsets: Option<u64>, time_limit_ms: Option<u64>) -> OracleBudget {
    let mut b = OracleBudget::default();
    if let Some(v) = max_subsets {
        b.max_subsets = v;
    }
    if let Some(v) = time_limit_ms {
        b.time_limit_ms = v;
    }
    b
}

fn search_outcome(res: SearchResult) -> PyResult<Option<PyWitness>> {
    match res {
        SearchResult::Found { witness, .. } => Ok(Some(PyWitness { inner: witness })),
        SearchResult::NotFound { .. } => Ok(None),
        SearchResult::BudgetExceeded { .. } => {
            Err(PyRuntimeError::new_err("search budget exceeded"))
        }
    }
}

/// Exact k-regular subgraph search. `None` means none exists.
#[pyfunction]
#[pyo3(signature = (g, k, max_subsets=None, time_limit_ms=None))]
fn find_k_regular_exact(
    g: &PyGraph,
    k: usize,
    max_subsets: Option<u64>,
    time_limit_ms: Option<u64>,
) -> PyResult<Option<PyWitness>> {
    search_outcome(oracle::find_k_regular_exact(
        &g.inner,
        k,
        &budget(max_subsets, time_limit_ms),
    ))
}

/// Exact `K_{k,k}` search. `None` means the graph is `K_{k,k}`-free.
#[pyfunction]
#[pyo3(signature = (g, k, max_subsets=None, time_limit_ms=None))]
fn find_kkk(
    g: &PyGraph,
    k: usize,
    max_subsets: Option<u64>,
    time_limit_ms: Option<u64>,
) -> PyResult<Option<PyWitness>> {
    search_outcome(oracle::find_kkk(
        &g.inner,
        k,
        &budget(max_subsets, time_limit_ms),
    ))
}

/// True iff the witness is a subgraph of `g` and regular of its claimed degree.
#[pyfunction]
fn check_witness(g: &PyGraph, w: &PyWitness) -> bool {
    oracle::check_witness(&g.inner, &w.inner)
}

fn config(
    k: usize,
    r: Option<usize>,
    scaled: bool,
    max_subsets: Option<u64>,
) -> PyResult<PipelineConfig> {
    let r = r.unwrap_or(k.max(2));
    let mut cfg = if scaled {
        PipelineConfig::scaled(k, r)
    } else {
        PipelineConfig::new(k, r)
    };
    if let Some(v) = max_subsets {
        cfg.budget.max_subsets = v;
    }
    cfg.validate().map_err(value_err)?;
    Ok(cfg)
}

/// Verified k-regular subgraph of `g`. Returns `(witness or None, trace_json,
/// exit_code)`; the exit code follows the command-line convention.
#[pyfunction]
#[pyo3(signature = (g, k, seed=0, r=None, scaled=false, max_subsets=None))]
fn find_k_regular(
    g: &PyGraph,
    k: usize,
    seed: u64,
    r: Option<usize>,
    scaled: bool,
    max_subsets: Option<u64>,
) -> PyResult<(Option<PyWitness>, String, i32)> {
    let cfg = config(k, r, scaled, max_subsets)?;
    let (res, trace) = pipeline::find_k_regular(&g.inner, &cfg, seed);
    let (w, code) = match res {
        Ok(w) => (Some(PyWitness { inner: w }), 0),
        Err(e) => (None, e.exit_code()),
    };
    Ok((w, trace.to_json(), code))
}

/// Almost-regular subgraph through the full pipeline. Returns `(subgraph or
/// None, trace_json, exit_code)`.
#[pyfunction]
#[pyo3(signature = (g, k, seed=0, r=None, scaled=false))]
fn almost_regular(
    g: &PyGraph,
    k: usize,
    seed: u64,
    r: Option<usize>,
    scaled: bool,
) -> PyResult<(Option<PyGraph>, String, i32)> {
    let cfg = config(k, r, scaled, None)?;
    let (res, trace) = pipeline::general_main(&g.inner, &cfg, seed);
    let (h, code) = match res {
        Ok((h, _)) => (Some(PyGraph { inner: h }), 0),
        Err(e) => (None, e.exit_code()),
    };
    Ok((h, trace.to_json(), code))
}

#[pymodule]
fn regulus_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyWitness>()?;
    m.add_function(wrap_pyfunction!(gen_gnp, m)?)?;
    m.add_function(wrap_pyfunction!(gen_layered, m)?)?;
    m.add_function(wrap_pyfunction!(gen_c4free, m)?)?;
    m.add_function(wrap_pyfunction!(find_k_regular_exact, m)?)?;
    m.add_function(wrap_pyfunction!(find_kkk, m)?)?;
    m.add_function(wrap_pyfunction!(check_witness, m)?)?;
    m.add_function(wrap_pyfunction!(find_k_regular, m)?)?;
    m.add_function(wrap_pyfunction!(almost_regular, m)?)?;
    Ok(())
}
