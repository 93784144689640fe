//! File formats read and written by the command line.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use trifree::antichain::Antichain;
use trifree::{CodedGraph, Error, Result};

/// Parses the edge-list format: the vertex count on the first line, then
/// one `i j` pair per line. Blank lines and `#` comments are ignored.
pub fn parse_graph(text: &str) -> Result<CodedGraph> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .enumerate()
        .filter(|(_, l)| !l.is_empty());
    let (_, first) = lines.next().ok_or_else(|| Error::Parse("graph file is empty".into()))?;
    let n: usize = first
        .parse()
        .map_err(|_| Error::Parse(format!("first line {first:?} is not a vertex count")))?;
    let mut edges = Vec::new();
    for (lineno, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = parts[..] else {
            return Err(Error::Parse(format!("line {}: expected two vertices", lineno + 1)));
        };
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(format!("line {}: bad vertex {s:?}", lineno + 1)))
        };
        edges.push((parse(a)?, parse(b)?));
    }
    CodedGraph::from_edges(n, edges).map_err(|e| Error::Parse(e.to_string()))
}

pub fn graph_to_text(g: &CodedGraph) -> String {
    let mut out = format!("{}\n", g.vertex_count);
    for &(a, b) in &g.edges {
        out.push_str(&format!("{a} {b}\n"));
    }
    out
}

/// Which tree an antichain file refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HostKind {
    /// The incremental tree, with its witness pool.
    Incremental,
    /// The diagonal antichain of the ambient tree.
    Diagonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostParams {
    pub kind: HostKind,
    /// Number of coding nodes of the ambient tree the host is built from.
    pub coding: usize,
}

/// An antichain together with the parameters of the host it lives in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntichainFile {
    pub nodes: Antichain,
    pub host: HostParams,
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("in-memory values serialize")
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use trifree::bitseq::bs;

    #[test]
    fn graph_text_round_trip() {
        let g = parse_graph("4\n0 1\n# comment\n1 2\n\n2 3\n").unwrap();
        assert_eq!(g.vertex_count, 4);
        assert_eq!(g.edges.len(), 3);
        assert_eq!(parse_graph(&graph_to_text(&g)).unwrap(), g);
    }

    #[test]
    fn malformed_graphs() {
        assert!(parse_graph("").is_err());
        assert!(parse_graph("x").is_err());
        assert!(parse_graph("2\n0").is_err());
        assert!(parse_graph("2\n0 5").is_err());
    }

    #[test]
    fn antichain_file_round_trip() {
        let f = AntichainFile {
            nodes: Antichain::new([bs("10"), bs("0110")]).unwrap(),
            host: HostParams { kind: HostKind::Incremental, coding: 4 },
        };
        let text = to_json(&f);
        assert!(text.contains("\"incremental\""));
        assert_eq!(from_json::<AntichainFile>(&text).unwrap(), f);
    }

    #[test]
    fn comparable_antichain_is_rejected() {
        let text = r#"{"nodes": ["1", "10"], "host": {"kind": "diagonal", "coding": 3}}"#;
        assert!(from_json::<AntichainFile>(text).is_err());
    }
}
