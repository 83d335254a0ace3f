use std::time::Instant;

use super::{check_witness, OracleBudget, SearchResult, SearchStats};
use crate::graph::{Graph, SubgraphWitness, Vertex};

/// Searches for a complete bipartite `K_{k,k}` subgraph.
///
/// Grows a set `R` of `k` vertices in increasing label order while tracking
/// the common neighbourhood `C`; a branch dies once `|C| < k`. Each grown
/// prefix counts as one subset against the budget.
pub fn find_kkk(g: &Graph, k: usize, budget: &OracleBudget) -> SearchResult {
    assert!(k >= 1, "k must be positive");
    let start = Instant::now();
    let mut stats = SearchStats::default();
    let n = g.vertex_count();
    let mut count = vec![0usize; n];
    let mut stack: Vec<(Vec<Vertex>, Vec<Vertex>)> = Vec::new();

    for u in (0..n).rev() {
        if g.degree(u) >= k {
            stack.push((vec![u], g.neighbors(u).to_vec()));
        }
    }
    while let Some((r, common)) = stack.pop() {
        if stats.subsets_tested >= budget.max_subsets
            || start.elapsed().as_millis() as u64 >= budget.time_limit_ms
        {
            return SearchResult::BudgetExceeded { stats };
        }
        stats.subsets_tested += 1;
        if r.len() == k {
            let edges = r
                .iter()
                .flat_map(|&a| common[..k].iter().map(move |&b| (a, b)))
                .collect();
            let witness = SubgraphWitness::from_edges(edges, Some(k));
            debug_assert!(check_witness(g, &witness));
            return SearchResult::Found { witness, stats };
        }
        let last = *r.last().unwrap();
        let mut touched = Vec::new();
        for &c in &common {
            for &w in g.neighbors(c) {
                if w > last {
                    if count[w] == 0 {
                        touched.push(w);
                    }
                    count[w] += 1;
                }
            }
        }
        touched.sort_unstable();
        let mut next = Vec::new();
        for &w in &touched {
            if count[w] >= k {
                let c2: Vec<Vertex> = common
                    .iter()
                    .copied()
                    .filter(|&c| g.neighbors(w).binary_search(&c).is_ok())
                    .collect();
                let mut r2 = r.clone();
                r2.push(w);
                next.push((r2, c2));
            } else {
                stats.pruned += 1;
            }
            count[w] = 0;
        }
        stack.extend(next.into_iter().rev());
    }
    SearchResult::NotFound { stats }
}
