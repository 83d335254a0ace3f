//! Maximum cardinality matching in general graphs (Edmonds' blossom
//! algorithm with explicit base relabelling, O(V^3)).

const NONE: usize = usize::MAX;

struct Blossom<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    on_path: Vec<bool>,
    queue: Vec<usize>,
}

impl<'a> Blossom<'a> {
    fn new(adj: &'a [Vec<usize>]) -> Self {
        let n = adj.len();
        let mut mate = vec![NONE; n];
        // greedy start
        for v in 0..n {
            if mate[v] == NONE {
                if let Some(&w) = adj[v].iter().find(|&&w| mate[w] == NONE && w != v) {
                    mate[v] = w;
                    mate[w] = v;
                }
            }
        }
        Blossom {
            adj,
            mate,
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            on_path: vec![false; n],
            queue: Vec::with_capacity(n),
        }
    }

    fn lca(&mut self, mut a: usize, mut b: usize) -> usize {
        self.on_path.iter_mut().for_each(|x| *x = false);
        loop {
            a = self.base[a];
            self.on_path[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if self.on_path[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Searches an augmenting path from the exposed vertex `root`; returns
    /// its other endpoint.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.adj.len();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for i in 0..n {
            self.base[i] = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push(root);
        let mut head = 0;
        while head < self.queue.len() {
            let v = self.queue[head];
            head += 1;
            for idx in 0..self.adj[v].len() {
                let to = self.adj[v][idx];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push(next);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }

    /// Runs to completion. With `stop_on_exposed`, gives up as soon as some
    /// vertex provably stays exposed.
    fn solve(mut self, stop_on_exposed: bool) -> Option<Vec<usize>> {
        for v in 0..self.adj.len() {
            if self.mate[v] != NONE {
                continue;
            }
            match self.find_path(v) {
                Some(end) => self.augment(end),
                None if stop_on_exposed => return None,
                None => {}
            }
        }
        Some(self.mate)
    }
}

/// Maximum matching; `result[v]` is the partner of `v`.
pub fn maximum_matching(adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    Blossom::new(adj)
        .solve(false)
        .expect("full solve always completes")
        .into_iter()
        .map(|m| (m != NONE).then_some(m))
        .collect()
}

/// A perfect matching if one exists.
///
/// A vertex left exposed after a failed augmenting-path search stays
/// exposed in every maximum matching, so the search stops early.
pub fn perfect_matching(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    if adj.len() % 2 == 1 {
        return None;
    }
    Blossom::new(adj).solve(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_gnp;
    use crate::graph::Graph;

    fn adjacency(g: &Graph) -> Vec<Vec<usize>> {
        (0..g.vertex_count())
            .map(|v| g.neighbors(v).to_vec())
            .collect()
    }

    fn matching_size(m: &[Option<usize>]) -> usize {
        m.iter().filter(|x| x.is_some()).count() / 2
    }

    /// Largest matching by trying every edge subset.
    fn brute_matching(g: &Graph) -> usize {
        let edges: Vec<_> = g.edges().collect();
        let mut best = 0;
        for mask in 0u32..1 << edges.len() {
            let mut used = 0u32;
            let mut ok = true;
            for (i, &(u, v)) in edges.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    if used >> u & 1 == 1 || used >> v & 1 == 1 {
                        ok = false;
                        break;
                    }
                    used |= 1 << u | 1 << v;
                }
            }
            if ok {
                best = best.max(mask.count_ones() as usize);
            }
        }
        best
    }

    #[test]
    fn odd_cycle_and_petersen_like() {
        let c5 = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert_eq!(matching_size(&maximum_matching(&adjacency(&c5))), 2);
        assert!(perfect_matching(&adjacency(&c5)).is_none());
        // two triangles joined by an edge: needs a blossom to find the perfect matching
        let g =
            Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]).unwrap();
        let m = perfect_matching(&adjacency(&g)).unwrap();
        for v in 0..6 {
            assert_eq!(m[m[v]], v);
            assert!(g.has_edge(v, m[v]));
        }
    }

    #[test]
    fn agrees_with_brute_force() {
        for seed in 0..300 {
            let n = 3 + (seed as usize % 6);
            let g = gen_gnp(n, 0.45, seed);
            if g.edge_count() > 16 {
                continue;
            }
            let m = maximum_matching(&adjacency(&g));
            for v in 0..n {
                if let Some(w) = m[v] {
                    assert_eq!(m[w], Some(v));
                    assert!(g.has_edge(v, w));
                }
            }
            assert_eq!(matching_size(&m), brute_matching(&g), "seed {seed}");
            assert_eq!(
                perfect_matching(&adjacency(&g)).is_some(),
                2 * brute_matching(&g) == n,
                "seed {seed}"
            );
        }
    }
}
