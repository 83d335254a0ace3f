//! Conversions between regularity notions: shrinking the A-degree spread of
//! an almost-biregular graph to 4, random thinning of side B, and the chain
//! that ends in a 64-almost-regular graph.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::ceil_log2;
use crate::graph::{prune_min_degree, BipartiteGraph, Graph, Side, Vertex};
use crate::oracle::{is_almost_biregular, AlmostRegularCertificate, BiregularCertificate};
use crate::rng::{derive_seed, stream_rng};

pub const DEFAULT_THINNING_TRIALS: u32 = 200;

/// Ratio bound of the final almost-regular certificate.
pub const ALMOST_REGULAR_K: f64 = 64.0;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum AlmostRegError {
    #[error("{stage}: precondition violated: {detail}")]
    PreconditionViolated { stage: String, detail: String },
    #[error("{stage}: no verified result in {trials} trials")]
    Failed { stage: String, trials: u32 },
    #[error("{stage}: no accepted sample in {resamples} resamples")]
    TrialsExhausted { stage: String, resamples: u32 },
}

fn precondition(stage: &str, detail: impl Into<String>) -> AlmostRegError {
    AlmostRegError::PreconditionViolated {
        stage: stage.into(),
        detail: detail.into(),
    }
}

/// Counters of an accepted thinning sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThinningStats {
    /// Edges between A and the sampled B'.
    #[serde(rename = "X")]
    pub x: usize,
    /// Of those, edges at A-vertices whose B'-degree reached `4Ld`.
    #[serde(rename = "Y")]
    pub y: usize,
    pub resamples: u32,
    pub b_prime: usize,
}

/// Whether `L δ <= 2^⌊δ/(d-1)⌋` (always true for `d = 1`).
pub fn spread_precondition(l: f64, delta: usize, d: usize) -> bool {
    if d <= 1 {
        return true;
    }
    let q = delta / (d - 1);
    q >= 1024 || l * delta as f64 <= (q as f64).exp2()
}

/// A `(4, d)`-almost-biregular subgraph of an `(L, δ)`-almost-biregular
/// graph.
///
/// Reconstruction, checked only by its postcondition: side A is grouped by
/// dyadic degree class; a trial picks one class (heaviest first, cycling
/// with the trial index), keeps `d` random class edges at every B-vertex
/// that has that many, then repeatedly removes A-vertices of degree below a
/// quarter of the maximum, refilling the B-vertices they served from unused
/// class neighbours or dropping those B-vertices. The result is returned
/// only if a fresh `(4, d)` certificate verifies.
pub fn to_4_almost_biregular(
    g: &BipartiteGraph,
    cert: &BiregularCertificate,
    d: usize,
    seed: u64,
    max_trials: u32,
) -> Result<(BipartiteGraph, BiregularCertificate), AlmostRegError> {
    const STAGE: &str = "to_4_almost_biregular";
    if !cert.check(g) {
        return Err(precondition(STAGE, "input certificate does not verify"));
    }
    let delta = cert.d;
    if d == 0 || d > delta {
        return Err(precondition(
            STAGE,
            format!("need 1 <= d <= δ (d={d}, δ={delta})"),
        ));
    }
    if !spread_precondition(cert.l, delta, d) {
        return Err(precondition(
            STAGE,
            format!(
                "L·δ = {} > 2^⌊δ/(d-1)⌋ = 2^{}",
                cert.l * delta as f64,
                delta / (d - 1)
            ),
        ));
    }
    if is_almost_biregular(g, 4.0, d) {
        return Ok((g.clone(), BiregularCertificate::measure(g, 4.0, d)));
    }

    let n = g.graph().vertex_count();
    let mut class_of = vec![None; n];
    let mut class_ids: Vec<i64> = Vec::new();
    for u in g.side_a() {
        if g.degree(u) > 0 {
            let c = ceil_log2(g.degree(u) as u128);
            class_of[u] = Some(c);
            class_ids.push(c);
        }
    }
    class_ids.sort_unstable();
    class_ids.dedup();
    let b_side = g.side_b();
    let mut ranked: Vec<(usize, i64)> = class_ids
        .iter()
        .map(|&c| {
            let served = b_side
                .iter()
                .filter(|&&v| {
                    g.neighbors(v)
                        .iter()
                        .filter(|&&u| class_of[u] == Some(c))
                        .count()
                        >= d
                })
                .count();
            (served, c)
        })
        .filter(|&(served, _)| served > 0)
        .collect();
    ranked.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    if ranked.is_empty() {
        return Err(AlmostRegError::Failed {
            stage: STAGE.into(),
            trials: 0,
        });
    }
    for trial in 0..max_trials {
        let class = ranked[trial as usize % ranked.len()].1;
        let mut rng = stream_rng(seed, trial as u64);
        if let Some(out) = shrink_spread(g, &class_of, class, d, &mut rng) {
            let c = BiregularCertificate::measure(&out, 4.0, d);
            if c.check(&out) {
                return Ok((out, c));
            }
        }
    }
    Err(AlmostRegError::Failed {
        stage: STAGE.into(),
        trials: max_trials,
    })
}

fn shrink_spread<R: Rng>(
    g: &BipartiteGraph,
    class_of: &[Option<i64>],
    class: i64,
    d: usize,
    rng: &mut R,
) -> Option<BipartiteGraph> {
    let n = g.graph().vertex_count();
    let mut chosen: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    let mut pool: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    let mut serves: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    let mut deg = vec![0usize; n];
    let mut kept_b = vec![false; n];
    for v in g.side_b() {
        let mut cand: Vec<Vertex> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| class_of[u] == Some(class))
            .collect();
        if cand.len() < d {
            continue;
        }
        cand.shuffle(rng);
        pool[v] = cand.split_off(d);
        for &u in &cand {
            deg[u] += 1;
            serves[u].push(v);
        }
        chosen[v] = cand;
        kept_b[v] = true;
    }
    let mut dead = vec![false; n];
    loop {
        let alive: Vec<Vertex> = (0..n).filter(|&u| deg[u] > 0 && !dead[u]).collect();
        if alive.is_empty() {
            return None;
        }
        let max = alive.iter().map(|&u| deg[u]).max().unwrap();
        let mut victims: Vec<Vertex> = alive
            .iter()
            .copied()
            .filter(|&u| 4 * deg[u] < max)
            .collect();
        if victims.is_empty() {
            let b_count = kept_b.iter().filter(|&&x| x).count();
            if alive.len() <= b_count {
                break;
            }
            let &low = alive.iter().min_by_key(|&&u| (deg[u], u)).unwrap();
            victims.push(low);
        }
        for u in victims {
            dead[u] = true;
            for v in std::mem::take(&mut serves[u]) {
                if !kept_b[v] {
                    continue;
                }
                chosen[v].retain(|&w| w != u);
                deg[u] -= 1;
                let refill = loop {
                    match pool[v].pop() {
                        Some(w) if !dead[w] => break Some(w),
                        Some(_) => continue,
                        None => break None,
                    }
                };
                match refill {
                    Some(w) => {
                        chosen[v].push(w);
                        deg[w] += 1;
                        serves[w].push(v);
                    }
                    None => {
                        kept_b[v] = false;
                        for &w in &chosen[v] {
                            deg[w] -= 1;
                        }
                        chosen[v].clear();
                    }
                }
            }
        }
    }
    let mut edges = Vec::new();
    for v in 0..n {
        if kept_b[v] {
            edges.extend(chosen[v].iter().map(|&u| (u.min(v), u.max(v))));
        }
    }
    let graph = Graph::from_simple_edges(n, edges);
    let side = (0..n)
        .map(|v| {
            if kept_b[v] {
                Some(Side::B)
            } else if deg[v] > 0 && !dead[v] {
                Some(Side::A)
            } else {
                None
            }
        })
        .collect();
    Some(BipartiteGraph::from_parts_unchecked(graph, side))
}

/// Subgraph with average degree at least `d/2` and maximum degree at most
/// `4Ld`: keep each B-vertex with probability `d/D`, then drop all edges at
/// A-vertices whose sampled degree reaches `4Ld`. A sample is accepted when
/// `4(X - Y) >= (|A| + |B'|) d`.
pub fn nearly_reg_subgraph(
    g: &BipartiteGraph,
    cert: &BiregularCertificate,
    seed: u64,
    max_trials: u32,
) -> Result<(Graph, ThinningStats), AlmostRegError> {
    const STAGE: &str = "nearly_reg_subgraph";
    if !cert.check(g) || cert.l < 1.0 {
        return Err(precondition(STAGE, "certificate does not verify or L < 1"));
    }
    let (l, d) = (cert.l, cert.d);
    let a = &cert.a;
    let e = cert.edges;
    let n = g.graph().vertex_count();
    let cap = 4.0 * l * d as f64;
    for trial in 0..max_trials {
        let mut rng = stream_rng(seed, trial as u64);
        let mut in_b = vec![false; n];
        let mut b_prime = 0;
        for &v in &cert.b {
            // probability d/D = d|A|/e
            if rng.gen_range(0..e) < d * a.len() {
                in_b[v] = true;
                b_prime += 1;
            }
        }
        let mut cnt = vec![0usize; n];
        for &u in a {
            cnt[u] = g.neighbors(u).iter().filter(|&&v| in_b[v]).count();
        }
        let x: usize = a.iter().map(|&u| cnt[u]).sum();
        let heavy: Vec<bool> = (0..n).map(|u| cnt[u] as f64 >= cap).collect();
        let y: usize = a.iter().filter(|&&u| heavy[u]).map(|&u| cnt[u]).sum();
        if 4 * (x - y) < (a.len() + b_prime) * d {
            continue;
        }
        let out = g.graph().filter_edges(|u, v| {
            let (au, bv) = if g.side(u) == Some(Side::A) {
                (u, v)
            } else {
                (v, u)
            };
            in_b[bv] && !heavy[au]
        });
        let stats = ThinningStats {
            x,
            y,
            resamples: trial + 1,
            b_prime,
        };
        debug_assert_eq!(out.edge_count(), x - y);
        return Ok((out, stats));
    }
    Err(AlmostRegError::TrialsExhausted {
        stage: STAGE.into(),
        resamples: max_trials,
    })
}

/// Everything recorded along [`almost_bireg_to_almost_reg`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlmostRegReport {
    pub delta: usize,
    #[serde(rename = "L")]
    pub l: f64,
    pub d: usize,
    pub four_bireg_edges: usize,
    pub thinning: ThinningStats,
    pub thinned_avg_degree: f64,
    pub thinned_max_degree: usize,
    pub prune_threshold: usize,
    pub target_avg_degree: f64,
}

/// `d = ⌈δ / (4 log2 L)⌉` for `L >= δ >= 2`.
pub fn target_degree(l: f64, delta: usize) -> usize {
    (delta as f64 / (4.0 * l.log2())).ceil() as usize
}

/// 64-almost-regular subgraph with average degree at least `δ/(16 log2 L)`
/// from an `(L, δ)`-almost-biregular graph with `L >= δ >= 2`.
pub fn almost_bireg_to_almost_reg(
    g: &BipartiteGraph,
    cert: &BiregularCertificate,
    seed: u64,
    max_trials: u32,
) -> Result<(Graph, AlmostRegularCertificate, AlmostRegReport), AlmostRegError> {
    const STAGE: &str = "almost_bireg_to_almost_reg";
    let (l, delta) = (cert.l, cert.d);
    if !(delta >= 2 && l >= delta as f64) {
        return Err(precondition(
            STAGE,
            format!("need L >= δ >= 2 (L={l}, δ={delta})"),
        ));
    }
    if !cert.check(g) {
        return Err(precondition(STAGE, "input certificate does not verify"));
    }
    let d = target_degree(l, delta);
    let (g4, c4) = to_4_almost_biregular(g, cert, d, derive_seed(seed, 1), max_trials)?;
    let (thin, stats) = nearly_reg_subgraph(&g4, &c4, derive_seed(seed, 2), max_trials)?;
    let ts = thin.degree_stats();
    // 2 e' / (|A| + |B'|) >= d/2, and maximum degree <= 16 d
    assert!(4 * 2 * thin.edge_count() >= (c4.a.len() + stats.b_prime) * d);
    assert!(ts.max_degree <= 16 * d);
    let threshold = d.div_ceil(4);
    let pruned = prune_min_degree(&thin, threshold);
    if pruned.edge_count() == 0 {
        return Err(AlmostRegError::Failed {
            stage: "prune".into(),
            trials: 1,
        });
    }
    let out_cert = AlmostRegularCertificate::measure(&pruned, ALMOST_REGULAR_K);
    if !out_cert.check(&pruned) || !pruned.is_subgraph_of(g.graph()) {
        return Err(AlmostRegError::Failed {
            stage: STAGE.into(),
            trials: 1,
        });
    }
    let report = AlmostRegReport {
        delta,
        l,
        d,
        four_bireg_edges: g4.edge_count(),
        thinning: stats,
        thinned_avg_degree: ts.avg_degree,
        thinned_max_degree: ts.max_degree,
        prune_threshold: threshold,
        target_avg_degree: delta as f64 / (16.0 * l.log2()),
    };
    Ok((pruned, out_cert, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_almost_biregular;
    use crate::graph::SideSets;

    fn regular_both_sides(n: usize, d: usize) -> (BipartiteGraph, BiregularCertificate) {
        // circulant: A-vertex i joined to B-vertices i..i+d (mod n)
        let edges: Vec<_> = (0..n)
            .flat_map(|i| (0..d).map(move |j| (i, n + (i + j) % n)))
            .collect();
        let g = Graph::from_edges(2 * n, edges).unwrap();
        let bg = BipartiteGraph::new(
            g,
            &SideSets {
                a: (0..n).collect(),
                b: (n..2 * n).collect(),
            },
        )
        .unwrap();
        let c = BiregularCertificate::measure(&bg, 1.0, d);
        (bg, c)
    }

    #[test]
    fn spread_precondition_examples() {
        assert!(!spread_precondition(4.0, 9, 4));
        assert!(spread_precondition(16.0, 64, 5));
        assert_eq!(target_degree(16.0, 64), 4);
    }

    #[test]
    fn to4_short_circuits_and_rejects() {
        let (g, c) = regular_both_sides(10, 2);
        let (out, c4) = to_4_almost_biregular(&g, &c, 2, 0, 10).unwrap();
        assert_eq!(out, g);
        assert!(c4.check(&out));
        let (g, c) = gen_almost_biregular(4.0, 9, 20, 40, 1).unwrap();
        assert!(matches!(
            to_4_almost_biregular(&g, &c, 4, 0, 10),
            Err(AlmostRegError::PreconditionViolated { .. })
        ));
    }

    #[test]
    fn to4_on_spread_input() {
        // L = 16, δ = 64, d = 5
        let (g, c) = gen_almost_biregular(16.0, 64, 80, 160, 3).unwrap();
        let (out, c4) = to_4_almost_biregular(&g, &c, 5, 7, 50).unwrap();
        assert!(c4.check(&out));
        assert!(out.graph().is_subgraph_of(g.graph()));
        assert!(out.side_b().iter().all(|&v| out.degree(v) == 5));
    }

    #[test]
    fn thinning_examples() {
        let (g, c) = regular_both_sides(12, 3);
        let (out, st) = nearly_reg_subgraph(&g, &c, 0, 10).unwrap();
        assert_eq!(&out, g.graph());
        assert_eq!((st.y, st.resamples), (0, 1));
        let (m, c) = regular_both_sides(6, 1);
        let (out, _) = nearly_reg_subgraph(&m, &c, 0, 10).unwrap();
        assert_eq!(&out, m.graph());
    }

    #[test]
    fn thinning_bounds_on_corpus() {
        for seed in 0..40 {
            let Ok((g, c)) = gen_almost_biregular(2.0, 3, 30, 60, seed) else {
                continue;
            };
            let (out, st) = nearly_reg_subgraph(&g, &c, seed, 200).unwrap();
            assert!(out.max_degree() as f64 <= 4.0 * 2.0 * 3.0);
            assert!(4 * 2 * out.edge_count() >= (30 + st.b_prime) * 3);
            assert_eq!(out.edge_count(), st.x - st.y);
        }
    }

    #[test]
    fn chain_gives_64_almost_regular() {
        let (g, c) = gen_almost_biregular(64.0, 64, 80, 160, 5).unwrap();
        let (out, cert, rep) = almost_bireg_to_almost_reg(&g, &c, 11, 200).unwrap();
        assert_eq!(rep.d, 3);
        assert!(cert.check(&out));
        let s = out.degree_stats();
        assert!(s.min_degree * 4 >= rep.d);
        assert!(s.max_degree <= 16 * rep.d);
        assert!(s.max_degree <= 64 * s.min_degree);
        assert!(s.avg_degree >= rep.target_avg_degree);
    }
}
