//! Edge-list text format: one `u v` pair per line, ASCII decimal labels.

use std::io::BufRead;

use super::{Graph, GraphError, SideSets, Vertex};

/// Parses an edge list. Duplicate edges are an error, not silently merged.
pub fn load_edge_list(text: &str) -> Result<Graph, GraphError> {
    read_edge_list(text.as_bytes())
}

pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    let mut n = 0;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| GraphError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_ascii_whitespace();
        let mut label = || -> Result<Vertex, GraphError> {
            let tok = parts.next().ok_or_else(|| GraphError::Parse {
                line: line_no,
                message: "expected two labels".into(),
            })?;
            tok.parse().map_err(|_| GraphError::Parse {
                line: line_no,
                message: format!("bad label {tok:?}"),
            })
        };
        let (u, v) = (label()?, label()?);
        if parts.next().is_some() {
            return Err(GraphError::Parse {
                line: line_no,
                message: "trailing tokens".into(),
            });
        }
        n = n.max(u + 1).max(v + 1);
        edges.push((u, v));
    }
    Graph::from_edges(n, edges)
}

/// Canonical serialization: `u < v`, lexicographic order, LF-terminated.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(g.edge_count() * 8);
    for (u, v) in g.edges() {
        out.push_str(&u.to_string());
        out.push(' ');
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}

pub fn load_sides(json: &str) -> Result<SideSets, GraphError> {
    serde_json::from_str(json).map_err(|e| GraphError::Parse {
        line: e.line(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn triangle_and_empty() {
        let g = load_edge_list("0 1\n1 2\n2 0").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 3));
        let e = load_edge_list("").unwrap();
        assert_eq!((e.vertex_count(), e.edge_count()), (0, 0));
    }

    #[test]
    fn errors() {
        assert_eq!(
            load_edge_list("0 1\n0 1"),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert_eq!(
            load_edge_list("0 1\n1 0"),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert_eq!(load_edge_list("3 3"), Err(GraphError::SelfLoop(3)));
        assert!(matches!(
            load_edge_list("0 x"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            load_edge_list("0 1\n2"),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            load_edge_list("0 1 2"),
            Err(GraphError::Parse { .. })
        ));
    }

    proptest! {
        #[test]
        fn round_trip_is_identity(pairs in proptest::collection::btree_set((0usize..30, 0usize..30), 0..80)) {
            let edges: std::collections::BTreeSet<_> = pairs
                .into_iter()
                .filter(|(u, v)| u != v)
                .map(|(u, v)| (u.min(v), u.max(v)))
                .collect();
            let text: String = edges.iter().rev().map(|(u, v)| format!("{v} {u}\n")).collect();
            let g = load_edge_list(&text).unwrap();
            let canon = write_edge_list(&g);
            prop_assert_eq!(load_edge_list(&canon).unwrap(), g.clone());
            prop_assert_eq!(write_edge_list(&load_edge_list(&canon).unwrap()), canon);
            prop_assert_eq!(g.edges().collect::<std::collections::BTreeSet<_>>(), edges);
        }
    }
}
