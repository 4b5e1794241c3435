//! Edge-list text format and DOT export.
//!
//! ```text
//! dag 3
//! d 0 2
//! d 1 2
//! ```
//!
//! The header is `dag <n>` or `pdag <n>`; each following line is `d <src> <dst>`
//! for a directed edge or `u <a> <b>` for an undirected one. Only `d` lines
//! are legal in a `dag` file.

use std::fmt::Write;

use super::{Dag, Pdag};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphFile {
    Dag(Dag),
    Pdag(Pdag),
}

impl GraphFile {
    pub fn into_pdag(self) -> Pdag {
        match self {
            GraphFile::Dag(d) => d.to_pdag(),
            GraphFile::Pdag(p) => p,
        }
    }
}

pub fn write_dag(g: &Dag) -> String {
    let mut s = format!("dag {}\n", g.n_nodes());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "d {u} {v}");
    }
    s
}

pub fn write_pdag(g: &Pdag) -> String {
    let mut s = format!("pdag {}\n", g.n_nodes());
    for (u, v) in g.directed_edges() {
        let _ = writeln!(s, "d {u} {v}");
    }
    for (a, b) in g.undirected_edges() {
        let _ = writeln!(s, "u {a} {b}");
    }
    s
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse(text: &str) -> Result<GraphFile> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let mut head = header.split_whitespace();
    let kind = head.next().unwrap_or_default();
    let n: usize = head.next().and_then(|t| t.parse().ok()).ok_or_else(|| parse_err(hl + 1, "header must be `dag <n>` or `pdag <n>`"))?;
    if head.next().is_some() || !matches!(kind, "dag" | "pdag") {
        return Err(parse_err(hl + 1, "header must be `dag <n>` or `pdag <n>`"));
    }

    let mut directed = Vec::new();
    let mut undirected = Vec::new();
    for (i, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [tag, a, b] = toks[..] else {
            return Err(parse_err(i + 1, "expected `<d|u> <a> <b>`"));
        };
        let a: usize = a.parse().map_err(|_| parse_err(i + 1, format!("bad node id `{a}`")))?;
        let b: usize = b.parse().map_err(|_| parse_err(i + 1, format!("bad node id `{b}`")))?;
        match tag {
            "d" => directed.push((a, b)),
            "u" if kind == "pdag" => undirected.push((a, b)),
            "u" => return Err(parse_err(i + 1, "undirected edge in a dag file")),
            _ => return Err(parse_err(i + 1, format!("unknown edge tag `{tag}`"))),
        }
    }
    if kind == "dag" {
        Ok(GraphFile::Dag(Dag::new(n, directed)?))
    } else {
        Ok(GraphFile::Pdag(Pdag::from_edges(n, directed, undirected)?))
    }
}

/// Graphviz rendering; undirected edges are drawn without arrowheads.
pub fn to_dot(g: &Pdag) -> String {
    let mut s = String::from("digraph G {\n");
    for v in 0..g.n_nodes() {
        let _ = writeln!(s, "  x{v};");
    }
    for (u, v) in g.directed_edges() {
        let _ = writeln!(s, "  x{u} -> x{v};");
    }
    for (a, b) in g.undirected_edges() {
        let _ = writeln!(s, "  x{a} -> x{b} [dir=none];");
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dag_round_trip() {
        let g = Dag::new(4, [(3, 0), (1, 0), (2, 1)]).unwrap();
        let text = write_dag(&g);
        assert_eq!(text, "dag 4\nd 1 0\nd 2 1\nd 3 0\n");
        assert_eq!(parse(&text).unwrap(), GraphFile::Dag(g));
    }

    #[test]
    fn pdag_round_trip() {
        let g = Pdag::from_edges(4, [(0, 2), (1, 2)], [(2, 3)]).unwrap();
        let text = write_pdag(&g);
        assert_eq!(text, "pdag 4\nd 0 2\nd 1 2\nu 2 3\n");
        assert_eq!(parse(&text).unwrap(), GraphFile::Pdag(g));
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse("").is_err());
        assert!(parse("graph 3\n").is_err());
        assert!(parse("dag 3\nu 0 1\n").is_err());
        assert!(parse("dag 3\nd 0\n").is_err());
        assert!(parse("dag 3\nd 0 x\n").is_err());
        assert!(matches!(parse("dag 2\nd 0 1\nd 1 0\n"), Err(Error::Cycle)));
        assert!(matches!(parse("pdag 2\nx 0 1\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn dot_marks_undirected() {
        let g = Pdag::from_edges(3, [(0, 1)], [(1, 2)]).unwrap();
        let dot = to_dot(&g);
        assert!(dot.contains("x0 -> x1;"));
        assert!(dot.contains("x1 -> x2 [dir=none];"));
    }
}
