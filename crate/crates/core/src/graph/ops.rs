//! Elementary reductions: bipartization, min-degree peeling, and trimming
//! side-B degrees to an exact target.

use std::collections::VecDeque;

use rand::seq::index::sample;
use rand::Rng;

use super::{BipartiteGraph, Graph, GraphError, Side, Vertex};
use crate::rng::stream_rng;

/// Spanning bipartite subgraph keeping at least half of the edges.
///
/// Bipartite inputs keep their full 2-colouring. Otherwise a seeded random
/// split is improved by single-vertex moves until every vertex has at least
/// half of its edges crossing.
pub fn bipartite_half(g: &Graph, seed: u64) -> Result<BipartiteGraph, GraphError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let side = two_colouring(g).unwrap_or_else(|| local_max_cut(g, seed));
    let kept = g.filter_edges(|u, v| side[u] != side[v]);
    let side = side
        .into_iter()
        .map(|b| Some(if b { Side::B } else { Side::A }))
        .collect();
    Ok(BipartiteGraph::from_parts_unchecked(kept, side))
}

fn two_colouring(g: &Graph) -> Option<Vec<bool>> {
    let n = g.vertex_count();
    let mut colour: Vec<Option<bool>> = vec![None; n];
    for s in 0..n {
        if colour[s].is_some() {
            continue;
        }
        colour[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let c = colour[v].unwrap();
            for &w in g.neighbors(v) {
                match colour[w] {
                    None => {
                        colour[w] = Some(!c);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == c => return None,
                    _ => {}
                }
            }
        }
    }
    Some(colour.into_iter().map(Option::unwrap).collect())
}

fn local_max_cut(g: &Graph, seed: u64) -> Vec<bool> {
    let n = g.vertex_count();
    let mut rng = stream_rng(seed, 0);
    let mut side: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for v in 0..n {
            let same = g
                .neighbors(v)
                .iter()
                .filter(|&&w| side[w] == side[v])
                .count();
            if 2 * same > g.degree(v) {
                side[v] = !side[v];
                changed = true;
            }
        }
    }
    side
}

/// The maximal subgraph with minimum degree at least `threshold`.
///
/// Peeled vertices stay as isolated labels; the result may have no edges.
pub fn prune_min_degree(g: &Graph, threshold: usize) -> Graph {
    let n = g.vertex_count();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut queue: VecDeque<Vertex> = (0..n).filter(|&v| deg[v] < threshold).collect();
    for &v in &queue {
        alive[v] = false;
    }
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
                if deg[w] < threshold {
                    alive[w] = false;
                    queue.push_back(w);
                }
            }
        }
    }
    g.induced(&alive)
}

/// Keeps exactly `target` uniformly chosen edges at every side-B vertex.
///
/// Vertices are processed in label order from a single seeded stream.
pub fn trim_b_to_degree(
    g: &BipartiteGraph,
    target: usize,
    seed: u64,
) -> Result<BipartiteGraph, GraphError> {
    let host = g.graph();
    let n = host.vertex_count();
    let mut rng = stream_rng(seed, 0);
    let mut adj = vec![Vec::new(); n];
    for v in g.side_b() {
        let nb = host.neighbors(v);
        if nb.len() < target {
            return Err(GraphError::DegreeTooLow {
                vertex: v,
                degree: nb.len(),
                target,
            });
        }
        let chosen: Vec<Vertex> = if nb.len() == target {
            nb.to_vec()
        } else {
            sample(&mut rng, nb.len(), target)
                .into_iter()
                .map(|i| nb[i])
                .collect()
        };
        for u in chosen {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    for l in &mut adj {
        l.sort_unstable();
    }
    Ok(BipartiteGraph::from_parts_unchecked(
        Graph::from_adjacency(adj),
        g.side_vec().to_vec(),
    ))
}
