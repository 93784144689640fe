//! Trees with coding nodes and the graphs they code.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitseq::BitSeq;
use crate::error::{Error, Result};
use crate::tree::{NodeSet, Tree};

/// A tree together with an ordered list of coding nodes `c_0, c_1, …` of
/// strictly increasing length.
///
/// `extension` optionally carries the immediate extensions of the maximal
/// nodes when the tree ends at a coding level. Inside an ambient tree those
/// passing numbers are determined; a detached finite tree has to carry them
/// explicitly for the criteria that look one level past the top.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CodingTreeRepr", into = "CodingTreeRepr")]
pub struct CodingTree {
    tree: Tree,
    coding: Vec<BitSeq>,
    extension: Vec<BitSeq>,
}

/// On-disk form: node list, coding list, and extension data when present.
#[derive(Serialize, Deserialize)]
struct CodingTreeRepr {
    nodes: Vec<BitSeq>,
    coding: Vec<BitSeq>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    extension: Vec<BitSeq>,
}

impl TryFrom<CodingTreeRepr> for CodingTree {
    type Error = Error;

    fn try_from(r: CodingTreeRepr) -> Result<CodingTree> {
        CodingTree::from_parts(r.nodes.into_iter().collect(), r.coding)?.with_extension(r.extension)
    }
}

impl From<CodingTree> for CodingTreeRepr {
    fn from(t: CodingTree) -> CodingTreeRepr {
        CodingTreeRepr {
            nodes: t.tree.into_nodes().into_iter().collect(),
            coding: t.coding,
            extension: t.extension,
        }
    }
}

impl CodingTree {
    pub fn new(tree: Tree, coding: Vec<BitSeq>) -> Result<Self> {
        for w in coding.windows(2) {
            if w[0].len() >= w[1].len() {
                return Err(Error::Precondition(format!(
                    "coding nodes {} and {} are not strictly increasing in length",
                    w[0], w[1]
                )));
            }
        }
        for c in &coding {
            if !tree.contains(c) {
                return Err(Error::NotMember(c.clone()));
            }
        }
        Ok(CodingTree {
            tree,
            coding,
            extension: Vec::new(),
        })
    }

    /// Parses node and coding lists, checking the tree axioms.
    pub fn from_parts(nodes: NodeSet, coding: Vec<BitSeq>) -> Result<Self> {
        Self::new(Tree::new(nodes)?, coding)
    }

    /// Attaches immediate extensions for the top level.
    pub fn with_extension(mut self, ext: Vec<BitSeq>) -> Result<Self> {
        let top = self.tree.height();
        for e in &ext {
            if e.len() != top + 1 || !self.tree.contains(&e.restrict(top)) {
                return Err(Error::Precondition(format!(
                    "{e} is not an immediate extension of a node of length {top}"
                )));
            }
        }
        self.extension = ext;
        Ok(self)
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn nodes(&self) -> &NodeSet {
        self.tree.nodes()
    }

    pub fn coding(&self) -> &[BitSeq] {
        &self.coding
    }

    pub fn extension(&self) -> &[BitSeq] {
        &self.extension
    }

    /// `l_n = |c_n|`.
    pub fn coding_lengths(&self) -> Vec<usize> {
        self.coding.iter().map(BitSeq::len).collect()
    }

    /// The index `n` with `|c_n| = len`, if any.
    pub fn coding_index_at(&self, len: usize) -> Option<usize> {
        self.coding.binary_search_by_key(&len, BitSeq::len).ok()
    }

    /// Keeps the nodes of length at most `len` and the coding nodes among them.
    pub fn truncate(&self, len: usize) -> CodingTree {
        let nodes: NodeSet = self
            .nodes()
            .range(..BitSeq::zeros(len + 1))
            .cloned()
            .collect();
        let coding = self.coding.iter().filter(|c| c.len() <= len).cloned().collect();
        CodingTree {
            tree: Tree::from_nodes_unchecked(nodes),
            coding,
            extension: Vec::new(),
        }
    }
}

/// A simple graph on vertices `0..n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CodedGraph {
    pub vertex_count: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl CodedGraph {
    pub fn new(vertex_count: usize) -> Self {
        CodedGraph {
            vertex_count,
            edges: BTreeSet::new(),
        }
    }

    pub fn from_edges(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = CodedGraph::new(vertex_count);
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        if a == b {
            return Err(Error::Precondition(format!("self-loop at vertex {a}")));
        }
        for v in [a, b] {
            if v >= self.vertex_count {
                return Err(Error::Index {
                    index: v,
                    available: self.vertex_count,
                });
            }
        }
        self.edges.insert((a.min(b), a.max(b)));
        Ok(())
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Some triangle `i < j < k`, found by scanning every triple.
    pub fn find_triangle(&self) -> Option<[usize; 3]> {
        let n = self.vertex_count;
        for i in 0..n {
            for j in i + 1..n {
                if !self.has_edge(i, j) {
                    continue;
                }
                for k in j + 1..n {
                    if self.has_edge(i, k) && self.has_edge(j, k) {
                        return Some([i, j, k]);
                    }
                }
            }
        }
        None
    }

    pub fn is_triangle_free(&self) -> bool {
        self.find_triangle().is_none()
    }

    /// The induced subgraph on `vertices`, relabelled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> CodedGraph {
        let mut g = CodedGraph::new(vertices.len());
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.edges.insert((a, b));
                }
            }
        }
        g
    }

    /// Is there a relabelling of `self` equal to `other`? Brute force over
    /// permutations; meant for the handful of vertices this crate deals with.
    pub fn is_isomorphic(&self, other: &CodedGraph) -> bool {
        if self.vertex_count != other.vertex_count || self.edges.len() != other.edges.len() {
            return false;
        }
        let n = self.vertex_count;
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            if self.edges.iter().all(|&(a, b)| other.has_edge(perm[a], perm[b])) {
                return true;
            }
            if !next_permutation(&mut perm) {
                return false;
            }
        }
    }
}

impl fmt::Display for CodedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.vertex_count)?;
        for (a, b) in &self.edges {
            writeln!(f, "{a} {b}")?;
        }
        Ok(())
    }
}

pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// The graph whose vertex `v_n` is represented by `c_n`: for `i < n`, `v_i`
/// and `v_n` are adjacent exactly when `c_n(l_i) = 1`.
pub fn graph_of_coding_nodes(coding: &[BitSeq]) -> CodedGraph {
    let mut g = CodedGraph::new(coding.len());
    for (n, cn) in coding.iter().enumerate() {
        for (i, ci) in coding[..n].iter().enumerate() {
            if cn.get(ci.len()) == Some(1) {
                g.edges.insert((i, n));
            }
        }
    }
    g
}

pub fn graph_coded_by(t: &CodingTree) -> CodedGraph {
    graph_of_coding_nodes(t.coding())
}

/// Do `s` and `t` have a `1` in a common position?
pub fn has_parallel_ones(s: &BitSeq, t: &BitSeq) -> bool {
    let (a, b) = (s.ones(), t.ones());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitseq::bs;

    fn coded(xs: &[&str]) -> CodedGraph {
        let v: Vec<BitSeq> = xs.iter().map(|s| bs(s)).collect();
        graph_of_coding_nodes(&v)
    }

    #[test]
    fn single_edge() {
        let g = coded(&["1", "01"]);
        assert_eq!(g.edges, [(0, 1)].into_iter().collect());
    }

    #[test]
    fn six_vertex_example() {
        let g = coded(&["1", "01", "001", "1001", "00001", "010101"]);
        let expect: BTreeSet<_> = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (2, 5)]
            .into_iter()
            .map(|(a, b): (usize, usize)| (a.min(b), a.max(b)))
            .collect();
        assert_eq!(g.edges, expect);
        assert!(g.is_triangle_free());
    }

    #[test]
    fn isomorphism_brute_force() {
        let path = CodedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let other = CodedGraph::from_edges(3, [(0, 2), (2, 1)]).unwrap();
        let empty = CodedGraph::new(3);
        assert!(path.is_isomorphic(&other));
        assert!(!path.is_isomorphic(&empty));
    }

    #[test]
    fn parallel_ones() {
        assert!(has_parallel_ones(&bs("0110"), &bs("0011")));
        assert!(!has_parallel_ones(&bs("0101"), &bs("1010")));
    }
}
