//! Text formats.
//!
//! Graphs use a DIMACS-like layout:
//!
//! ```text
//! c optional comments
//! p ghct <n> <m>
//! e <u> <v> <w>
//! ```
//!
//! with 1-based vertex ids. Cut trees are written one edge per line as
//! `t <child> <parent> <weight>`, also 1-based.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::CutTree;

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    match tok {
        Some(t) => t.parse().or_else(|_| parse_err(line, format!("bad {what} '{t}'"))),
        None => parse_err(line, format!("missing {what}")),
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return parse_err(line, "duplicate problem line");
                }
                let kind: String = field(toks.next(), line, "problem kind")?;
                if kind != "ghct" {
                    return parse_err(line, format!("expected 'ghct', found '{kind}'"));
                }
                let n = field(toks.next(), line, "node count")?;
                let m = field(toks.next(), line, "edge count")?;
                header = Some((n, m));
            }
            Some("e") => {
                let Some((n, _)) = header else {
                    return parse_err(line, "edge before problem line");
                };
                let u: usize = field(toks.next(), line, "endpoint")?;
                let v: usize = field(toks.next(), line, "endpoint")?;
                let w: u64 = field(toks.next(), line, "weight")?;
                if u == 0 || v == 0 || u > n || v > n {
                    return parse_err(line, format!("endpoint out of range 1..={n}"));
                }
                edges.push((u - 1, v - 1, w));
            }
            Some(other) => return parse_err(line, format!("unknown line type '{other}'")),
        }
        if toks.next().is_some() {
            return parse_err(line, "trailing tokens");
        }
    }
    let Some((n, m)) = header else {
        return parse_err(text.lines().count().max(1), "missing problem line");
    };
    if edges.len() != m {
        return parse_err(
            text.lines().count().max(1),
            format!("header declares {m} edges, found {}", edges.len()),
        );
    }
    Graph::from_edges(n, edges)
}

/// Writes `g` with edges sorted by `(u, v)`.
pub fn write_graph(g: &Graph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "c {c}");
    }
    let _ = writeln!(out, "p ghct {} {}", g.node_count(), g.edge_count());
    let mut edges: Vec<_> = g.edges().to_vec();
    edges.sort_unstable_by_key(|e| (e.u, e.v));
    for e in edges {
        let _ = writeln!(out, "e {} {} {}", e.u + 1, e.v + 1, e.w);
    }
    out
}

pub fn write_tree(tree: &CutTree) -> String {
    let mut out = String::new();
    for v in 0..tree.node_count() {
        if let Some((p, w)) = tree.parent(v) {
            let _ = writeln!(out, "t {} {} {}", v + 1, p + 1, w);
        }
    }
    out
}

/// Reads a tree written by [`write_tree`] on `n` vertices.
pub fn parse_tree(text: &str, n: usize) -> Result<CutTree> {
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some("t") => {
                let c: usize = field(toks.next(), line, "child")?;
                let p: usize = field(toks.next(), line, "parent")?;
                let w: u64 = field(toks.next(), line, "weight")?;
                if c == 0 || p == 0 || c > n || p > n {
                    return parse_err(line, format!("vertex out of range 1..={n}"));
                }
                edges.push((c - 1, p - 1, w));
            }
            Some(other) => return parse_err(line, format!("unknown line type '{other}'")),
        }
    }
    CutTree::from_edges(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_sorted() {
        let g = Graph::from_edges(3, [(2, 1, 4), (0, 2, 1), (1, 0, 7)]).unwrap();
        let text = write_graph(&g, &["hello".into()]);
        assert_eq!(text, "c hello\np ghct 3 3\ne 1 2 7\ne 1 3 1\ne 2 3 4\n");
        assert_eq!(parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "p ghct 2 1\nc fine\ne 1 3 5\n";
        assert_eq!(
            parse_graph(bad),
            Err(Error::Parse { line: 3, msg: "endpoint out of range 1..=2".into() })
        );
        assert!(matches!(parse_graph("e 1 2 3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("p ghct 2 1\ne 1 2 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("p ghct 2 2\ne 1 2 1\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn tree_round_trip() {
        let t = CutTree::from_edges(3, &[(1, 0, 5), (2, 1, 3)]).unwrap();
        let text = write_tree(&t);
        let back = parse_tree(&text, 3).unwrap();
        assert_eq!(back.all_pairs(), t.all_pairs());
    }
}
