use std::collections::BTreeSet;
use std::path::Path;

use super::{edge_key, Graph, GraphFile};
use crate::error::{Error, Location, Result};

/// Parses an edge-list or JSON graph file.
///
/// Input starting with `{` is read as JSON
/// (`{"num_nodes": n, "edges": [[u, v], ...], "features": [[...], ...]}`);
/// anything else as an edge list whose first line is `n m` followed by `m`
/// lines of `u v`.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_edge_list(text)
    }
}

pub fn read_graph_file(path: impl AsRef<Path>) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    parse_graph(&text)
}

fn malformed(line: usize, message: impl Into<String>) -> Error {
    Error::Malformed {
        at: Location::Line(line),
        message: message.into(),
    }
}

fn parse_pair(line: &str, lineno: usize, what: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
        return Err(malformed(lineno, format!("expected two integers ({what})")));
    };
    let a = a
        .parse()
        .map_err(|_| malformed(lineno, format!("not a non-negative integer: {a:?}")))?;
    let b = b
        .parse()
        .map_err(|_| malformed(lineno, format!("not a non-negative integer: {b:?}")))?;
    Ok((a, b))
}

fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.lines().map(|l| l.trim_end_matches('\r'));
    let header = lines.next().ok_or_else(|| malformed(1, "empty input"))?;
    let (num_nodes, num_edges) = parse_pair(header, 1, "header `n m`")?;

    let mut set = BTreeSet::new();
    for k in 0..num_edges {
        let lineno = k + 2;
        let line = lines.next().ok_or_else(|| {
            malformed(
                lineno,
                format!("expected {num_edges} edge lines, found {k}"),
            )
        })?;
        let (u, v) = parse_pair(line, lineno, "edge `u v`")?;
        insert_edge(&mut set, num_nodes, u, v, Location::Line(lineno))?;
    }
    for (k, rest) in lines.enumerate() {
        if !rest.trim().is_empty() {
            return Err(malformed(
                num_edges + 2 + k,
                "more edge lines than declared in the header",
            ));
        }
    }
    Ok(Graph::from_edge_set(num_nodes, set))
}

fn insert_edge(
    set: &mut BTreeSet<(usize, usize)>,
    num_nodes: usize,
    u: usize,
    v: usize,
    at: Location,
) -> Result<()> {
    for node in [u, v] {
        if node >= num_nodes {
            return Err(Error::NodeIdOutOfRange {
                at,
                node,
                num_nodes,
            });
        }
    }
    if u == v {
        return Err(Error::SelfLoop { at, node: u });
    }
    if !set.insert(edge_key(u, v)) {
        return Err(Error::DuplicateEdge { at, u, v });
    }
    Ok(())
}

fn parse_json(text: &str) -> Result<Graph> {
    let file: GraphFile = serde_json::from_str(text)?;
    let mut set = BTreeSet::new();
    for (i, &[u, v]) in file.edges.iter().enumerate() {
        insert_edge(&mut set, file.num_nodes, u, v, Location::EdgeEntry(i + 1))?;
    }
    let g = Graph::from_edge_set(file.num_nodes, set);
    match file.features {
        Some(f) => g.with_features(f),
        None => Ok(g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_triangle() {
        let g = parse_graph("3 3\n0 1\n1 2\n0 2").unwrap();
        assert_eq!(g.num_nodes(), 3);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(g.neighbors(0), &[1, 2]);
    }

    #[test]
    fn rejects_self_loop_with_line() {
        let err = parse_graph("2 1\n0 0").unwrap_err();
        assert!(matches!(
            err,
            Error::SelfLoop {
                at: Location::Line(2),
                node: 0
            }
        ));
        assert_eq!(err.to_string(), "line 2: self-loop on node 0");
    }

    #[test]
    fn rejects_duplicate_with_line() {
        let err = parse_graph("4 2\n0 1\n0 1").unwrap_err();
        assert!(matches!(
            err,
            Error::DuplicateEdge {
                at: Location::Line(3),
                ..
            }
        ));
        // reversed orientation is the same undirected edge
        assert!(parse_graph("4 2\n0 1\n1 0").is_err());
    }

    #[test]
    fn rejects_bad_headers_and_ranges() {
        assert!(matches!(
            parse_graph("3\n0 1").unwrap_err(),
            Error::Malformed {
                at: Location::Line(1),
                ..
            }
        ));
        assert!(matches!(
            parse_graph("3 1\n0 3").unwrap_err(),
            Error::NodeIdOutOfRange {
                at: Location::Line(2),
                node: 3,
                ..
            }
        ));
        assert!(matches!(
            parse_graph("3 2\n0 1").unwrap_err(),
            Error::Malformed {
                at: Location::Line(3),
                ..
            }
        ));
        assert!(parse_graph("3 1\n0 1\n1 2\n").is_err());
        assert!(parse_graph("").is_err());
        assert!(parse_graph("3 1\n0 x").is_err());
    }

    #[test]
    fn tolerates_trailing_newlines() {
        let g = parse_graph("3 2\n0 1\n1 2\n\n").unwrap();
        assert_eq!(g.num_edges(), 2);
    }

    #[test]
    fn parses_json_with_features() {
        let g = parse_graph(
            r#"{"num_nodes": 3, "edges": [[0,1],[1,2]], "features": [[1.0],[2.0],[3.0]]}"#,
        )
        .unwrap();
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.features().unwrap()[2], vec![3.0]);
        let err = parse_graph(r#"{"num_nodes": 2, "edges": [[0,1],[1,1]]}"#).unwrap_err();
        assert!(matches!(
            err,
            Error::SelfLoop {
                at: Location::EdgeEntry(2),
                ..
            }
        ));
    }

    #[test]
    fn json_and_edge_list_round_trip() {
        let g = parse_graph("5 4\n0 1\n1 2\n2 3\n3 4\n").unwrap();
        assert_eq!(parse_graph(&g.to_edge_list()).unwrap(), g);
        assert_eq!(parse_graph(&g.to_json()).unwrap(), g);
    }
}
