//! Instance factories: the layered lower-bound construction, projective
//! plane incidence graphs, and hypothesis-satisfying corpora for the
//! individual reduction steps. All generators are pure functions of their
//! arguments and seed.

mod field;

use std::collections::HashMap;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use field::{prime_power, FiniteField};

use crate::graph::{BipartiteGraph, Graph, Side, Vertex};
use crate::oracle::BiregularCertificate;
use crate::regularize::{check_hypotheses, RegularizationParams};
use crate::rng::stream_rng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("level range is empty for n = {0}")]
    RangeEmpty(usize),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("no projective plane construction for order {0}")]
    UnsupportedOrder(usize),
}

/// Parameters of the layered construction: `|B| = n`, levels `j` in
/// `[ceil(log log n / 4), floor(log log n / 2)]`, `|A(j)| = floor(n / 2^(2^j))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayeredParams {
    pub n: usize,
    pub seed: u64,
}

impl LayeredParams {
    pub fn new(n: usize, seed: u64) -> Self {
        LayeredParams { n, seed }
    }

    /// The inclusive level interval, or `None` when it is empty.
    pub fn j_range(&self) -> Option<(u32, u32)> {
        if self.n < 4 {
            return None;
        }
        let ll = (self.n as f64).log2().log2();
        let lo = ((ll / 4.0).ceil() as u32).max(1);
        let hi = (ll / 2.0).floor() as u32;
        (lo <= hi && (lo..=hi).all(|j| self.level_size(j) >= 1)).then_some((lo, hi))
    }

    pub fn level_size(&self, j: u32) -> usize {
        let exp = 1u64.checked_shl(j).unwrap_or(u64::MAX);
        if exp >= usize::BITS as u64 {
            0
        } else {
            self.n >> exp
        }
    }
}

/// Layered random bipartite graph: labels `0..n` are side B, followed by
/// the blocks `A(j)` in increasing `j`. Every B-vertex gets one uniformly
/// random neighbour in every block.
pub fn gen_layered(p: LayeredParams) -> Result<BipartiteGraph, GenError> {
    let (lo, hi) = p.j_range().ok_or(GenError::RangeEmpty(p.n))?;
    let n = p.n;
    let mut offset = n;
    let mut blocks = Vec::new();
    for j in lo..=hi {
        let size = p.level_size(j);
        blocks.push((offset, size));
        offset += size;
    }
    let total = offset;
    let mut rng = stream_rng(p.seed, 0);
    let mut edges = Vec::with_capacity(n * blocks.len());
    for v in 0..n {
        for &(start, size) in &blocks {
            edges.push((v, start + rng.gen_range(0..size)));
        }
    }
    let graph = Graph::from_simple_edges(total, edges);
    let side = (0..total)
        .map(|v| Some(if v < n { Side::B } else { Side::A }))
        .collect();
    Ok(BipartiteGraph::from_parts_unchecked(graph, side))
}

/// Erdős–Rényi `G(n, p)`; `p` is clamped to `[0, 1]`.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Graph {
    let p = if p.is_nan() { 0.0 } else { p.clamp(0.0, 1.0) };
    let mut rng = stream_rng(seed, 0);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_simple_edges(n, edges)
}

/// Point-line incidence graph of the projective plane of order `q`.
///
/// Points are labels `0..N` (side A), lines `N..2N` (side B), with
/// `N = q^2 + q + 1`.
pub fn gen_c4free_bipartite(q: usize) -> Result<BipartiteGraph, GenError> {
    if q > 16 {
        return Err(GenError::UnsupportedOrder(q));
    }
    let f = FiniteField::new(q).ok_or(GenError::UnsupportedOrder(q))?;
    let mut pts: Vec<[usize; 3]> = Vec::with_capacity(q * q + q + 1);
    for y in 0..q {
        for z in 0..q {
            pts.push([1, y, z]);
        }
    }
    for z in 0..q {
        pts.push([0, 1, z]);
    }
    pts.push([0, 0, 1]);
    let n = pts.len();
    let mut edges = Vec::with_capacity(n * (q + 1));
    for (i, p) in pts.iter().enumerate() {
        for (j, l) in pts.iter().enumerate() {
            let dot = f.add(
                f.add(f.mul(p[0], l[0]), f.mul(p[1], l[1])),
                f.mul(p[2], l[2]),
            );
            if dot == 0 {
                edges.push((i, n + j));
            }
        }
    }
    let graph = Graph::from_simple_edges(2 * n, edges);
    let side = (0..2 * n)
        .map(|v| Some(if v < n { Side::A } else { Side::B }))
        .collect();
    Ok(BipartiteGraph::from_parts_unchecked(graph, side))
}

/// Random `C4`-free bipartite graph: A is `0..size_a`, B the next `size_b`
/// labels. Random A-B pairs are added unless they would close a 4-cycle,
/// until `target_edges` or the attempt budget runs out.
pub fn gen_c4free_random(
    size_a: usize,
    size_b: usize,
    target_edges: usize,
    seed: u64,
) -> BipartiteGraph {
    let n = size_a + size_b;
    let mut rng = stream_rng(seed, 0);
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    let mut edges = 0;
    let attempts = 50 * target_edges.max(1);
    if size_a > 0 && size_b > 0 {
        for _ in 0..attempts {
            if edges >= target_edges {
                break;
            }
            let u = rng.gen_range(0..size_a);
            let v = size_a + rng.gen_range(0..size_b);
            if adj[u].contains(&v) {
                continue;
            }
            let closes = adj[v]
                .iter()
                .any(|&a| adj[a].iter().any(|w| adj[u].contains(w)));
            if !closes {
                adj[u].push(v);
                adj[v].push(u);
                edges += 1;
            }
        }
    }
    for l in &mut adj {
        l.sort_unstable();
    }
    let side = (0..n)
        .map(|v| Some(if v < size_a { Side::A } else { Side::B }))
        .collect();
    BipartiteGraph::from_parts_unchecked(Graph::from_adjacency(adj), side)
}

/// Keeps each edge independently with probability `p`; parts unchanged.
pub fn random_edge_subgraph(g: &BipartiteGraph, p: f64, seed: u64) -> BipartiteGraph {
    let mut rng = stream_rng(seed, 1);
    let kept = g
        .graph()
        .filter_edges(|_, _| rng.gen_bool(p.clamp(0.0, 1.0)));
    BipartiteGraph::from_parts_unchecked(kept, g.side_vec().to_vec())
}

fn pow2_cap(e: i64) -> usize {
    if e < 0 {
        0
    } else if e >= (usize::BITS - 1) as i64 {
        usize::MAX
    } else {
        1usize << e
    }
}

/// Bipartite graph meeting the regularization hypotheses for `(r, s, t)`
/// with `e >= 2^(s + slack) |A|`.
///
/// A is `0..size_a`, B follows. B-vertices are placed one at a time on the
/// lowest-degree admissible A-vertices (random tie-breaking), respecting the
/// degree cap `2^t` and the codegree cap `2^(rs - (r-1)t)`. The result is
/// audited against the hypotheses before it is returned.
pub fn gen_regularization_corpus(
    r: usize,
    s: u32,
    t: u32,
    size_a: usize,
    seed: u64,
    slack: u32,
) -> Result<BipartiteGraph, GenError> {
    if r == 0 || s >= t || size_a == 0 || r > size_a {
        return Err(GenError::Infeasible(format!(
            "need 1 <= r <= |A| and s < t (r={r}, s={s}, t={t}, |A|={size_a})"
        )));
    }
    let edge_target = pow2_cap((s + slack) as i64).saturating_mul(size_a);
    let size_b = edge_target.div_ceil(r);
    let deg_cap = pow2_cap(t as i64);
    if size_b.saturating_mul(r) > deg_cap.saturating_mul(size_a) {
        return Err(GenError::Infeasible("degree cap 2^t too small".into()));
    }
    let codeg_exp = r as i64 * s as i64 - (r as i64 - 1) * t as i64;
    let codeg_cap = pow2_cap(codeg_exp);
    if r >= 2 {
        let pairs_needed = size_b.saturating_mul(r * (r - 1) / 2);
        let pairs_avail = (size_a * (size_a - 1) / 2).saturating_mul(codeg_cap);
        if pairs_needed > pairs_avail {
            return Err(GenError::Infeasible(format!(
                "codegree cap 2^{codeg_exp} admits at most {pairs_avail} pair incidences, need {pairs_needed}"
            )));
        }
    }
    let params = RegularizationParams { r, s, t };
    for attempt in 0..64 {
        let mut rng = stream_rng(seed, attempt);
        if let Some(g) = place_b_vertices(size_a, size_b, r, deg_cap, codeg_cap, &mut rng) {
            if check_hypotheses(&g, &params).is_ok() {
                return Ok(g);
            }
        }
    }
    Err(GenError::Infeasible(
        "placement failed on every attempt".into(),
    ))
}

fn place_b_vertices<R: Rng>(
    size_a: usize,
    size_b: usize,
    r: usize,
    deg_cap: usize,
    codeg_cap: usize,
    rng: &mut R,
) -> Option<BipartiteGraph> {
    let n = size_a + size_b;
    let mut deg = vec![0usize; size_a];
    let mut pair: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edges = Vec::with_capacity(size_b * r);
    let mut order: Vec<usize> = (0..size_a).collect();
    for v in 0..size_b {
        order.shuffle(rng);
        order.sort_by_key(|&u| deg[u]);
        let mut chosen: Vec<usize> = Vec::with_capacity(r);
        for &u in &order {
            if chosen.len() == r {
                break;
            }
            if deg[u] >= deg_cap {
                continue;
            }
            let ok = chosen.iter().all(|&w| {
                let key = (u.min(w), u.max(w));
                pair.get(&key).copied().unwrap_or(0) < codeg_cap
            });
            if ok {
                chosen.push(u);
            }
        }
        if chosen.len() < r {
            return None;
        }
        for i in 0..r {
            for j in i + 1..r {
                let (a, b) = (chosen[i], chosen[j]);
                *pair.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        for &u in &chosen {
            deg[u] += 1;
            edges.push((u, size_a + v));
        }
    }
    let side = (0..n)
        .map(|v| Some(if v < size_a { Side::A } else { Side::B }))
        .collect();
    Some(BipartiteGraph::from_parts_unchecked(
        Graph::from_simple_edges(n, edges),
        side,
    ))
}

/// `(L, d)`-almost-biregular graph with `|A| = size_a`, `|B| = size_b`:
/// every B-vertex picks `d` random A-neighbours; if the A-degree spread
/// exceeds `L`, a balanced round-robin design is used instead. The
/// certificate is checked before returning.
pub fn gen_almost_biregular(
    l: f64,
    d: usize,
    size_a: usize,
    size_b: usize,
    seed: u64,
) -> Result<(BipartiteGraph, BiregularCertificate), GenError> {
    if d == 0 || d > size_a || size_a > size_b || l < 1.0 {
        return Err(GenError::Infeasible(format!(
            "need 1 <= d <= |A| <= |B| and L >= 1 (d={d}, |A|={size_a}, |B|={size_b}, L={l})"
        )));
    }
    let n = size_a + size_b;
    let side: Vec<_> = (0..n)
        .map(|v| Some(if v < size_a { Side::A } else { Side::B }))
        .collect();
    let check = |edges: Vec<(usize, usize)>| {
        let g =
            BipartiteGraph::from_parts_unchecked(Graph::from_simple_edges(n, edges), side.clone());
        let cert = BiregularCertificate::measure(&g, l, d);
        cert.check(&g).then_some((g, cert))
    };
    for attempt in 0..32 {
        let mut rng = stream_rng(seed, attempt);
        let edges = (0..size_b)
            .flat_map(|v| {
                sample(&mut rng, size_a, d)
                    .into_iter()
                    .map(move |u| (u, size_a + v))
                    .collect::<Vec<_>>()
            })
            .collect();
        if let Some(found) = check(edges) {
            return Ok(found);
        }
    }
    let mut rng = stream_rng(seed, u64::MAX);
    let mut perm: Vec<usize> = (0..size_a).collect();
    perm.shuffle(&mut rng);
    let edges = (0..size_b)
        .flat_map(|v| (0..d).map(move |j| (v * d + j) % size_a))
        .enumerate()
        .map(|(i, slot)| (perm[slot], size_a + i / d))
        .collect();
    check(edges)
        .ok_or_else(|| GenError::Infeasible(format!("no ({l}, {d})-almost-biregular layout")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{find_k_regular_exact, OracleBudget, SearchResult};

    #[test]
    fn layered_single_level() {
        let g = gen_layered(LayeredParams::new(256, 7)).unwrap();
        assert_eq!(LayeredParams::new(256, 7).j_range(), Some((1, 1)));
        assert_eq!(g.part_size(Side::A), 64);
        assert_eq!(g.edge_count(), 256);
        assert!(g.side_b().iter().all(|&v| g.degree(v) == 1));
        assert_eq!(gen_layered(LayeredParams::new(256, 7)).unwrap(), g);
    }

    #[test]
    fn layered_two_levels() {
        let n = 1 << 16;
        let p = LayeredParams::new(n, 3);
        assert_eq!(p.j_range(), Some((1, 2)));
        let g = gen_layered(p).unwrap();
        assert_eq!(g.edge_count(), 2 * n);
        assert_eq!(g.part_size(Side::A), n / 4 + n / 16);
        assert!(g.side_b().iter().all(|&v| g.degree(v) == 2));
        // per level, A(j) degrees sum to n
        let a1: usize = (n..n + n / 4).map(|u| g.degree(u)).sum();
        assert_eq!(a1, n);
    }

    #[test]
    fn layered_small_and_empty() {
        let g = gen_layered(LayeredParams::new(16, 1)).unwrap();
        assert_eq!(g.part_size(Side::A), 4);
        let res = find_k_regular_exact(g.graph(), 3, &OracleBudget::default());
        assert!(matches!(res, SearchResult::NotFound { .. }));
        assert_eq!(
            gen_layered(LayeredParams::new(4, 1)),
            Err(GenError::RangeEmpty(4))
        );
    }

    /// Codegree table by looping over every line for every pair of points.
    #[test]
    fn fano_plane_codegrees() {
        let g = gen_c4free_bipartite(2).unwrap();
        assert_eq!((g.part_size(Side::A), g.part_size(Side::B)), (7, 7));
        assert!((0..14).all(|v| g.degree(v) == 3));
        for p in 0..7 {
            for p2 in p + 1..7 {
                let common = (7..14)
                    .filter(|&l| g.graph().has_edge(p, l) && g.graph().has_edge(p2, l))
                    .count();
                assert_eq!(common, 1);
                assert_eq!(g.graph().codegree(p, p2).unwrap(), 1);
            }
        }
    }

    #[test]
    fn projective_planes() {
        for q in [3, 4, 5, 7, 8, 9] {
            let g = gen_c4free_bipartite(q).unwrap();
            let n = q * q + q + 1;
            assert_eq!(g.part_size(Side::A), n);
            assert!((0..2 * n).all(|v| g.degree(v) == q + 1), "q={q}");
            assert_eq!(g.max_codegree(Side::A), 1);
            assert_eq!(g.max_codegree(Side::B), 1);
        }
        assert_eq!(gen_c4free_bipartite(6), Err(GenError::UnsupportedOrder(6)));
        assert_eq!(
            gen_c4free_bipartite(10),
            Err(GenError::UnsupportedOrder(10))
        );
        assert_eq!(
            gen_c4free_bipartite(17),
            Err(GenError::UnsupportedOrder(17))
        );
    }

    #[test]
    fn random_c4free_has_codegree_at_most_one() {
        for seed in 0..10 {
            let g = gen_c4free_random(30, 40, 120, seed);
            assert!(g.max_codegree(Side::A) <= 1);
            assert!(g.max_codegree(Side::B) <= 1);
            assert!(g.edge_count() > 60);
        }
    }

    #[test]
    fn gnp_extremes_and_mean() {
        assert_eq!(gen_gnp(20, 0.0, 1).edge_count(), 0);
        assert_eq!(gen_gnp(20, 1.0, 1).edge_count(), 190);
        let mean = 0.5 * 4950.0;
        let sigma = (4950.0f64 * 0.25).sqrt();
        for seed in 0..50 {
            let e = gen_gnp(100, 0.5, seed).edge_count() as f64;
            assert!((e - mean).abs() <= 4.0 * sigma, "seed {seed}: {e}");
        }
        assert_eq!(gen_gnp(30, 0.3, 9), gen_gnp(30, 0.3, 9));
    }

    #[test]
    fn regularization_corpus_small() {
        let g = gen_regularization_corpus(2, 2, 3, 4, 5, 0).unwrap();
        assert_eq!(g.edge_count(), 16);
        assert!(g.side_b().iter().all(|&v| g.degree(v) == 2));
        assert!(g.max_codegree(Side::A) <= 2);
        assert!(matches!(
            gen_regularization_corpus(2, 2, 3, 4, 5, 1),
            Err(GenError::Infeasible(_))
        ));
        assert!(matches!(
            gen_regularization_corpus(3, 3, 2, 4, 5, 0),
            Err(GenError::Infeasible(_))
        ));
    }

    #[test]
    fn almost_biregular_instances_verify() {
        for seed in 0..20 {
            let (g, cert) = gen_almost_biregular(2.0, 3, 10, 25, seed).unwrap();
            assert!(cert.check(&g));
        }
        let (g, cert) = gen_almost_biregular(1.0, 3, 6, 6, 4).unwrap();
        assert!(cert.check(&g));
        assert!((0..12).all(|v| g.degree(v) == 3));
    }
}
