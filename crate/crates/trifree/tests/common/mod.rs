//! Helpers shared by integration tests, including the acceptance target of
//! the command-line crate, which pulls this file in by path.

#![allow(dead_code)]

use std::path::PathBuf;

use rand::Rng;
use trifree::{BitSeq, CodingTree, NodeSet, Tree};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn load_fixture(name: &str) -> CodingTree {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    serde_json::from_str(&text).expect("fixture parses")
}

pub fn bits(s: &str) -> BitSeq {
    s.parse().expect("0/1 string")
}

/// The tree of all initial segments of the given coding nodes. Every node
/// of such a tree extends to a coding node.
pub fn dense_tree(coding: &[BitSeq]) -> CodingTree {
    let mut nodes = NodeSet::new();
    for c in coding {
        nodes.extend((0..=c.len()).map(|k| c.restrict(k)));
    }
    if nodes.is_empty() {
        nodes.insert(BitSeq::empty());
    }
    CodingTree::new(Tree::new(nodes).expect("prefix closed"), coding.to_vec()).expect("valid coding nodes")
}

pub fn dense_tree_from(strs: &[&str]) -> CodingTree {
    dense_tree(&strs.iter().map(|s| bits(s)).collect::<Vec<_>>())
}

/// Random coding nodes of strictly increasing lengths below `max_len`,
/// with 1's drawn with probability `p`.
pub fn random_coding_nodes(rng: &mut impl Rng, max_count: usize, max_len: usize, p: f64) -> Vec<BitSeq> {
    let count = rng.gen_range(1..=max_count.min(max_len));
    let mut lengths: Vec<usize> = rand::seq::index::sample(rng, max_len, count).into_iter().map(|l| l + 1).collect();
    lengths.sort_unstable();
    lengths
        .into_iter()
        .map(|l| BitSeq::from_ones(l, (0..l).filter(|_| rng.gen_bool(p))))
        .collect()
}

/// Triangle check straight from the coding nodes: vertices `i < j` are
/// adjacent when `c_j` has a 1 at position `|c_i|`.
pub fn has_triangle_by_scan(coding: &[BitSeq]) -> bool {
    let adj = |i: usize, j: usize| {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        coding[b].get(coding[a].len()) == Some(1)
    };
    let n = coding.len();
    (0..n).any(|i| (i + 1..n).any(|j| adj(i, j) && (j + 1..n).any(|k| adj(i, k) && adj(j, k))))
}

/// Hand-made coding-node lists, each with whether it codes a triangle.
pub fn adversarial_fixtures() -> Vec<(&'static str, Vec<&'static str>, bool)> {
    vec![
        ("bare triangle", vec!["1", "01", "011"], true),
        ("path of three", vec!["1", "01", "001"], false),
        ("two edges at the top", vec!["1", "01", "010"], false),
        ("triangle above a long stem", vec!["0000001", "00000001", "000000011"], true),
        ("four-cycle", vec!["1", "01", "001", "0101"], false),
        ("four-cycle plus chord", vec!["1", "01", "001", "0111"], true),
        ("six-vertex example", vec!["1", "01", "001", "1001", "00001", "010101"], false),
        ("star from the first vertex", vec!["1", "01", "010", "0100", "01000"], false),
        ("late triangle", vec!["1", "00", "000", "0000", "00000", "000001", "0000011"], true),
        ("triangle skipping vertices", vec!["10", "0100", "000000", "00001000", "0000100010"], true),
        ("near miss", vec!["10", "0100", "000000", "00001000", "0000101000"], false),
        ("five-cycle", vec!["1", "01", "001", "0001", "01001"], false),
        ("five-cycle plus chord", vec!["1", "01", "001", "0001", "01101"], true),
        ("bipartite", vec!["1", "00", "110", "1100", "11000"], false),
        ("ones below the first coding node", vec!["111", "1111", "11111"], true),
        ("ones away from coding lengths", vec!["0", "01010", "1010101", "010100000"], false),
        ("single vertex", vec!["1"], false),
        ("all zero", vec!["0", "00", "000", "0000"], false),
        ("two vertices, no edge", vec!["1", "00"], false),
        ("dense last vertex", vec!["1", "01", "001", "0001", "11111"], true),
    ]
}
