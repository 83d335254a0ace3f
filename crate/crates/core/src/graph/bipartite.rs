use serde::{Deserialize, Serialize};

use super::{Graph, GraphError, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

/// The `{"A": [...], "B": [...]}` sidecar describing a bipartition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideSets {
    #[serde(rename = "A")]
    pub a: Vec<Vertex>,
    #[serde(rename = "B")]
    pub b: Vec<Vertex>,
}

/// A graph together with a bipartition of (part of) its vertex set.
///
/// Every edge joins side A to side B. Labels outside both sides are allowed
/// only if they are isolated; they are simply not part of the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    graph: Graph,
    side: Vec<Option<Side>>,
}

impl BipartiteGraph {
    pub fn new(graph: Graph, sides: &SideSets) -> Result<Self, GraphError> {
        let n = sides
            .a
            .iter()
            .chain(&sides.b)
            .map(|&v| v + 1)
            .max()
            .unwrap_or(0)
            .max(graph.vertex_count());
        let graph = if n > graph.vertex_count() {
            graph.with_vertex_count(n)?
        } else {
            graph
        };
        let mut side = vec![None; n];
        for (list, s) in [(&sides.a, Side::A), (&sides.b, Side::B)] {
            for &v in list {
                if side[v].is_some() {
                    return Err(GraphError::BadSides(format!("vertex {v} listed twice")));
                }
                side[v] = Some(s);
            }
        }
        Self::from_side_vec(graph, side)
    }

    pub(crate) fn from_side_vec(graph: Graph, side: Vec<Option<Side>>) -> Result<Self, GraphError> {
        if side.len() != graph.vertex_count() {
            return Err(GraphError::BadSides("side vector length".into()));
        }
        for (u, v) in graph.edges() {
            match (side[u], side[v]) {
                (Some(a), Some(b)) if a != b => {}
                _ => return Err(GraphError::NotBipartite(u, v)),
            }
        }
        Ok(BipartiteGraph { graph, side })
    }

    /// Trusted constructor; edges must cross and unlisted vertices be isolated.
    pub(crate) fn from_parts_unchecked(graph: Graph, side: Vec<Option<Side>>) -> Self {
        debug_assert!(graph
            .edges()
            .all(|(u, v)| matches!((side[u], side[v]), (Some(a), Some(b)) if a != b)));
        BipartiteGraph { graph, side }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn side(&self, v: Vertex) -> Option<Side> {
        self.side.get(v).copied().flatten()
    }

    pub fn side_vec(&self) -> &[Option<Side>] {
        &self.side
    }

    pub fn part(&self, s: Side) -> Vec<Vertex> {
        (0..self.side.len())
            .filter(|&v| self.side[v] == Some(s))
            .collect()
    }

    pub fn side_a(&self) -> Vec<Vertex> {
        self.part(Side::A)
    }

    pub fn side_b(&self) -> Vec<Vertex> {
        self.part(Side::B)
    }

    pub fn part_size(&self, s: Side) -> usize {
        self.side.iter().filter(|&&x| x == Some(s)).count()
    }

    pub fn sides(&self) -> SideSets {
        SideSets {
            a: self.side_a(),
            b: self.side_b(),
        }
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.graph.degree(v)
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        self.graph.neighbors(v)
    }

    /// Exchanges the roles of A and B.
    pub fn swapped(&self) -> Self {
        let side = self
            .side
            .iter()
            .map(|s| {
                s.map(|s| match s {
                    Side::A => Side::B,
                    Side::B => Side::A,
                })
            })
            .collect();
        BipartiteGraph {
            graph: self.graph.clone(),
            side,
        }
    }

    /// `G[A' ∪ B']` for the flagged vertices; both parts shrink to the mask.
    pub fn restrict(&self, keep: &[bool]) -> Self {
        let graph = self.graph.induced(keep);
        let side = self
            .side
            .iter()
            .enumerate()
            .map(|(v, &s)| if keep[v] { s } else { None })
            .collect();
        BipartiteGraph { graph, side }
    }

    /// Drops vertices that have no incident edge from both parts.
    pub fn without_isolated(&self) -> Self {
        let side = self
            .side
            .iter()
            .enumerate()
            .map(|(v, &s)| if self.graph.degree(v) > 0 { s } else { None })
            .collect();
        BipartiteGraph {
            graph: self.graph.clone(),
            side,
        }
    }

    /// Same parts, subset of the edges.
    pub fn with_graph(&self, graph: Graph) -> Result<Self, GraphError> {
        if !graph.is_subgraph_of(&self.graph) {
            return Err(GraphError::BadSides(
                "replacement graph is not a subgraph".into(),
            ));
        }
        let graph = graph.with_vertex_count(self.side.len())?;
        Ok(BipartiteGraph {
            graph,
            side: self.side.clone(),
        })
    }

    /// Largest codegree among distinct pairs on side `s`, counted through
    /// the opposite side.
    pub fn max_codegree(&self, s: Side) -> usize {
        self.codegree_pairs(s).into_values().max().unwrap_or(0)
    }

    /// Codegree of every pair `(u, u')`, `u < u'`, on side `s` that has at
    /// least one common neighbour.
    pub fn codegree_pairs(&self, s: Side) -> std::collections::HashMap<(Vertex, Vertex), usize> {
        let mut counts = std::collections::HashMap::new();
        for v in 0..self.side.len() {
            if self.side[v].is_none() || self.side[v] == Some(s) {
                continue;
            }
            let nb = self.graph.neighbors(v);
            for i in 0..nb.len() {
                for j in i + 1..nb.len() {
                    *counts.entry((nb[i], nb[j])).or_insert(0) += 1;
                }
            }
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_same_side_edges() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let bad = SideSets {
            a: vec![0, 1],
            b: vec![2],
        };
        assert_eq!(
            BipartiteGraph::new(g.clone(), &bad),
            Err(GraphError::NotBipartite(0, 1))
        );
        let ok = SideSets {
            a: vec![0, 2],
            b: vec![1],
        };
        let bg = BipartiteGraph::new(g, &ok).unwrap();
        assert_eq!(bg.side_a(), vec![0, 2]);
        assert_eq!(bg.max_codegree(Side::A), 1);
        assert_eq!(bg.swapped().side_b(), vec![0, 2]);
    }

    #[test]
    fn sidecar_pads_vertex_count() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let bg = BipartiteGraph::new(
            g,
            &SideSets {
                a: vec![0, 3],
                b: vec![1],
            },
        )
        .unwrap();
        assert_eq!(bg.graph().vertex_count(), 4);
        assert_eq!(bg.side(2), None);
    }

    #[test]
    fn sidecar_json_shape() {
        let s = SideSets {
            a: vec![0],
            b: vec![1, 2],
        };
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"A":[0],"B":[1,2]}"#);
    }
}
