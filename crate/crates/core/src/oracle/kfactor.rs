//! Spanning k-regular subgraphs via the stub/absorber reduction to perfect
//! matching.
//!
//! Each vertex `v` of induced degree `d(v)` becomes `d(v)` stubs (one per
//! incident edge) and `d(v) - k` absorbers joined to all of its stubs; the
//! two stubs of an edge are joined to each other. A perfect matching leaves
//! exactly `k` stubs of every vertex matched across their edge, and those
//! edges form the factor.

use crate::graph::{Graph, Vertex};
use crate::matching::perfect_matching;

/// Edges of a spanning `k`-regular subgraph of `G[mask]`, if one exists.
pub fn k_factor(g: &Graph, mask: &[bool], k: usize) -> Option<Vec<(Vertex, Vertex)>> {
    let n = g.vertex_count();
    let members: Vec<Vertex> = (0..n).filter(|&v| mask[v]).collect();
    if members.is_empty() {
        return Some(Vec::new());
    }
    let induced: Vec<Vec<Vertex>> = members
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .copied()
                .filter(|&w| mask[w])
                .collect()
        })
        .collect();
    if induced.iter().any(|l| l.len() < k) || (k * members.len()) % 2 == 1 {
        return None;
    }
    if induced.iter().all(|l| l.len() == k) {
        return Some(
            members
                .iter()
                .zip(&induced)
                .flat_map(|(&v, l)| l.iter().filter(move |&&w| w > v).map(move |&w| (v, w)))
                .collect(),
        );
    }

    // stub index of (v, i-th induced neighbour)
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in members.iter().enumerate() {
        pos[v] = i;
    }
    let mut stub_start = Vec::with_capacity(members.len() + 1);
    let mut total = 0;
    for l in &induced {
        stub_start.push(total);
        total += l.len();
    }
    let stub_count = total;
    let mut absorber_start = Vec::with_capacity(members.len());
    for l in &induced {
        absorber_start.push(total);
        total += l.len() - k;
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (i, l) in induced.iter().enumerate() {
        for (a, &w) in l.iter().enumerate() {
            let s = stub_start[i] + a;
            let j = pos[w];
            let b = induced[j]
                .binary_search(&members[i])
                .expect("symmetric adjacency");
            adj[s].push(stub_start[j] + b);
            for x in 0..l.len() - k {
                let ab = absorber_start[i] + x;
                adj[s].push(ab);
                adj[ab].push(s);
            }
        }
    }
    let mate = perfect_matching(&adj)?;
    let mut edges = Vec::new();
    for (i, l) in induced.iter().enumerate() {
        for (a, &w) in l.iter().enumerate() {
            let s = stub_start[i] + a;
            let m = mate[s];
            if m < stub_count && w > members[i] {
                edges.push((members[i], w));
            }
        }
    }
    Some(edges)
}

/// Whether the subgraph induced by `vertices` has a spanning `k`-regular
/// subgraph.
pub fn has_k_factor(g: &Graph, vertices: &[Vertex], k: usize) -> bool {
    let mut mask = vec![false; g.vertex_count()];
    for &v in vertices {
        if v < mask.len() {
            mask[v] = true;
        }
    }
    k_factor(g, &mask, k).is_some()
}
