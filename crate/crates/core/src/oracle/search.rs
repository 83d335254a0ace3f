//! Exhaustive search for a (not necessarily spanning) k-regular subgraph.
//!
//! Any k-regular graph has a connected k-regular component, so the search
//! looks for a connected vertex set `T` with a spanning k-factor. Nodes are
//! pairs `(S, F)`: `S` is a connected k-core that still contains every
//! candidate, `F ⊆ S` are vertices already committed to `T`. Each node tests
//! `S` for a k-factor, then branches on removing one uncommitted vertex `v`
//! (committing every uncommitted vertex before `v`) and re-peeling to the
//! k-core. Every connected `T` with min degree ≥ k is reached exactly along
//! the branch that removes the smallest vertex of `S \ T` at each step.

use std::collections::HashMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::kfactor::k_factor;
use super::{check_witness, OracleBudget, SearchResult, SearchStats};
use crate::graph::{Graph, SubgraphWitness, Vertex};

struct Search<'a> {
    g: &'a Graph,
    k: usize,
    budget: &'a OracleBudget,
    start: Instant,
    stats: SearchStats,
    seen: HashMap<Vec<u64>, Vec<Vec<u64>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
enum Stop {
    Exceeded,
}

fn pack(mask: &[bool]) -> Vec<u64> {
    let mut words = vec![0u64; mask.len().div_ceil(64)];
    for (i, &b) in mask.iter().enumerate() {
        if b {
            words[i >> 6] |= 1 << (i & 63);
        }
    }
    words
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

impl Search<'_> {
    fn tick(&mut self) -> Result<(), Stop> {
        if self.stats.subsets_tested >= self.budget.max_subsets
            || self.start.elapsed().as_millis() as u64 >= self.budget.time_limit_ms
        {
            return Err(Stop::Exceeded);
        }
        self.stats.subsets_tested += 1;
        Ok(())
    }

    /// Whether `(s, f)` is subsumed by an earlier node with the same `S`
    /// and a smaller committed set.
    fn already_covered(&mut self, s: &[bool], f: &[bool]) -> bool {
        let fs = pack(f);
        let entry = self.seen.entry(pack(s)).or_default();
        if entry.iter().any(|old| is_subset(old, &fs)) {
            return true;
        }
        entry.push(fs);
        false
    }

    fn min_degree(&self, s: &[bool]) -> usize {
        (0..s.len())
            .filter(|&v| s[v])
            .map(|v| self.g.neighbors(v).iter().filter(|&&w| s[w]).count())
            .min()
            .unwrap_or(0)
    }

    fn node(&mut self, s: Vec<bool>, f: Vec<bool>) -> Result<Option<Vec<(Vertex, Vertex)>>, Stop> {
        if self.already_covered(&s, &f) {
            self.stats.pruned += 1;
            return Ok(None);
        }
        self.tick()?;
        if let Some(edges) = k_factor(self.g, &s, self.k) {
            return Ok(Some(edges));
        }
        let free: Vec<Vertex> = (0..s.len()).filter(|&v| s[v] && !f[v]).collect();
        let mut children: Vec<(usize, Vec<bool>, Vec<bool>)> = Vec::new();
        for (idx, &v) in free.iter().enumerate() {
            let mut f2 = f.clone();
            for &u in &free[..idx] {
                f2[u] = true;
            }
            let mut s2 = s.clone();
            s2[v] = false;
            let s2 = self.g.core_mask(&s2, self.k);
            if (0..s2.len()).any(|u| f2[u] && !s2[u]) {
                self.stats.pruned += 1;
                continue;
            }
            let comps = self.g.components(&s2);
            match f2.iter().position(|&x| x) {
                Some(anchor) => {
                    let comp = comps.into_iter().find(|c| c.binary_search(&anchor).is_ok());
                    let comp = comp.expect("anchor survives the core");
                    let mut restricted = vec![false; s2.len()];
                    comp.iter().for_each(|&u| restricted[u] = true);
                    if (0..s2.len()).any(|u| f2[u] && !restricted[u]) {
                        self.stats.pruned += 1;
                        continue;
                    }
                    children.push((self.min_degree(&restricted), restricted, f2));
                }
                None => {
                    for comp in comps {
                        let mut restricted = vec![false; s2.len()];
                        comp.iter().for_each(|&u| restricted[u] = true);
                        children.push((self.min_degree(&restricted), restricted, f2.clone()));
                    }
                }
            }
        }
        // descending induced minimum degree; stable on creation order
        children.sort_by_key(|c| std::cmp::Reverse(c.0));
        for (_, s2, f2) in children {
            if let Some(found) = self.node(s2, f2)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }
}

/// Searches `g` for a k-regular subgraph within `budget`.
///
/// `NotFound` is only returned after the pruned search space is exhausted;
/// every `Found` witness has been rechecked against `g`.
pub fn find_k_regular_exact(g: &Graph, k: usize, budget: &OracleBudget) -> SearchResult {
    assert!(k >= 1, "k must be positive");
    let n = g.vertex_count();
    let mut search = Search {
        g,
        k,
        budget,
        start: Instant::now(),
        stats: SearchStats::default(),
        seen: HashMap::new(),
    };
    let core = g.core_mask(&vec![true; n], k);
    let comps = g.components(&core);
    for comp in comps {
        let mut s = vec![false; n];
        comp.iter().for_each(|&u| s[u] = true);
        match search.node(s, vec![false; n]) {
            Ok(Some(edges)) => {
                let witness = SubgraphWitness::from_edges(edges, Some(k));
                assert!(
                    check_witness(g, &witness),
                    "k-factor search produced an invalid witness"
                );
                return SearchResult::Found {
                    witness,
                    stats: search.stats,
                };
            }
            Ok(None) => {}
            Err(Stop::Exceeded) => {
                return SearchResult::BudgetExceeded {
                    stats: search.stats,
                }
            }
        }
    }
    SearchResult::NotFound {
        stats: search.stats,
    }
}
