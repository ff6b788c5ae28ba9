//! Plain-text graph files in a DIMACS-like layout.
//!
//! ```text
//! c optional comment lines
//! p bis <n> <m> <e>
//! e <u> <v>        (e lines, 0-based, u < n, v < m)
//! ```
//!
//! Blank lines are ignored. [`serialize`] writes edges in canonical order, so
//! `parse(serialize(g)) == g`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{BipartiteGraph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
}

fn parse_error(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

fn field(tokens: &[&str], k: usize, line: usize, what: &str) -> Result<usize, FormatError> {
    tokens[k]
        .parse()
        .map_err(|_| parse_error(line, format!("{what} `{}` is not a non-negative integer", tokens[k])))
}

pub fn parse(text: &str) -> Result<BipartiteGraph, FormatError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last_line = 0;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last_line = line;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        match tokens.first().copied() {
            None | Some("c") => {}
            Some("p") => {
                if header.is_some() {
                    return Err(parse_error(line, "second problem line"));
                }
                if tokens.len() != 5 || tokens[1] != "bis" {
                    return Err(parse_error(line, "expected `p bis <n> <m> <e>`"));
                }
                header = Some((
                    field(&tokens, 2, line, "n")?,
                    field(&tokens, 3, line, "m")?,
                    field(&tokens, 4, line, "e")?,
                ));
            }
            Some("e") => {
                let Some((n, m, e)) = header else {
                    return Err(parse_error(line, "edge before problem line"));
                };
                if tokens.len() != 3 {
                    return Err(parse_error(line, "expected `e <u> <v>`"));
                }
                let u = field(&tokens, 1, line, "u")?;
                let v = field(&tokens, 2, line, "v")?;
                if u >= n || v >= m {
                    return Err(FormatError::Graph {
                        line,
                        source: GraphError::IndexOutOfRange { left: u, right: v, n, m },
                    });
                }
                if edges.len() == e {
                    return Err(parse_error(line, format!("more than the declared {e} edges")));
                }
                edges.push((u, v, line));
            }
            Some(other) => return Err(parse_error(line, format!("unknown line type `{other}`"))),
        }
    }
    let Some((n, m, e)) = header else {
        return Err(parse_error(last_line.max(1), "missing problem line"));
    };
    if edges.len() != e {
        return Err(parse_error(
            last_line.max(1),
            format!("declared {e} edges, found {}", edges.len()),
        ));
    }
    BipartiteGraph::build(n, m, edges.iter().map(|&(u, v, _)| (u, v))).map_err(|source| {
        // Attribute a duplicate to the line where it repeats.
        let line = match &source {
            GraphError::DuplicateEdge { left, right } => edges
                .iter()
                .filter(|&&(u, v, _)| u == *left && v == *right)
                .nth(1)
                .map_or(0, |&(_, _, line)| line),
            _ => 0,
        };
        FormatError::Graph { line, source }
    })
}

pub fn serialize(graph: &BipartiteGraph) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "p bis {} {} {}",
        graph.left_count(),
        graph.right_count(),
        graph.edge_count()
    )
    .unwrap();
    for (u, v) in graph.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_random, RightDegreeStyle};
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        let k11 = parse("p bis 1 1 1\ne 0 0").unwrap();
        assert_eq!(k11, BipartiteGraph::build(1, 1, [(0, 0)]).unwrap());
        let empty = parse("p bis 2 2 0").unwrap();
        assert_eq!(empty, BipartiteGraph::empty(2, 2));
        let commented = parse("c hello\n\np bis 2 3 2\nc mid\ne 1 2\ne 0 0\n").unwrap();
        assert_eq!(commented.edges().collect::<Vec<_>>(), vec![(0, 0), (1, 2)]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse("p bis 2 2 1\ne 5 0"),
            Err(FormatError::Graph { line: 2, source: GraphError::IndexOutOfRange { .. } })
        ));
        assert!(matches!(parse("e 0 0\np bis 1 1 1"), Err(FormatError::Parse { line: 1, .. })));
        assert!(matches!(parse("p bis 1 1 2\ne 0 0"), Err(FormatError::Parse { .. })));
        assert!(matches!(parse("p bis 1 1 0\ne 0 0"), Err(FormatError::Parse { line: 2, .. })));
        assert!(matches!(parse("p bis x 1 0"), Err(FormatError::Parse { line: 1, .. })));
        assert!(matches!(parse("p cnf 1 1 0"), Err(FormatError::Parse { line: 1, .. })));
        assert!(matches!(parse("p bis 1 1 0\np bis 1 1 0"), Err(FormatError::Parse { line: 2, .. })));
        assert!(matches!(parse("p bis 1 1 1\ne 0"), Err(FormatError::Parse { line: 2, .. })));
        assert!(matches!(parse("p bis 1 1 1\nx 0 0"), Err(FormatError::Parse { line: 2, .. })));
        assert!(matches!(parse("p bis 1 1 1\ne -1 0"), Err(FormatError::Parse { line: 2, .. })));
        assert!(matches!(parse(""), Err(FormatError::Parse { .. })));
        assert_eq!(
            parse("p bis 2 2 3\ne 0 0\ne 1 1\ne 0 0\n"),
            Err(FormatError::Graph { line: 4, source: GraphError::DuplicateEdge { left: 0, right: 0 } })
        );
    }

    #[test]
    fn serialize_is_sorted() {
        let g = BipartiteGraph::build(2, 2, [(1, 0), (0, 1), (0, 0)]).unwrap();
        assert_eq!(serialize(&g), "p bis 2 2 3\ne 0 0\ne 0 1\ne 1 0\n");
    }

    proptest! {
        #[test]
        fn round_trip(n in 0usize..40, m in 0usize..40, delta in 0usize..=5, heavy: bool, seed: u64) {
            let style = if heavy { RightDegreeStyle::Heavy } else { RightDegreeStyle::Bounded(6) };
            let g = gen_random(n, m, delta, style, seed).unwrap();
            prop_assert_eq!(parse(&serialize(&g)).unwrap(), g);
        }
    }
}
