//! Strong similarity.
//!
//! Two kinds of comparison live here. [`strong_similarity_map`] works on
//! small meet-closed sets with coding nodes and checks every clause of the
//! definition. [`compare_trees`] compares two trees level by level through
//! the [`LevelSource`] trait, so that trees with millions of nodes can be
//! compared without materializing them.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::bitseq::{lex_less, meet, BitSeq};
use crate::coding::CodingTree;
use crate::error::{Error, Result};

/// A tree presented one level at a time.
pub trait LevelSource {
    /// The lengths of the levels, ascending.
    fn lengths(&self) -> Vec<usize>;
    /// The nodes of the level of length `len`, sorted.
    fn level(&self, len: usize) -> Vec<BitSeq>;
    /// Immediate extensions of the top level, sorted; empty when unknown.
    fn extension(&self) -> Vec<BitSeq>;
}

impl LevelSource for CodingTree {
    fn lengths(&self) -> Vec<usize> {
        self.tree().lengths()
    }

    fn level(&self, len: usize) -> Vec<BitSeq> {
        self.tree().level(len).cloned().collect()
    }

    fn extension(&self) -> Vec<BitSeq> {
        let mut v = CodingTree::extension(self).to_vec();
        v.sort();
        v
    }
}

/// Where two trees first fail to be strongly similar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeMismatch {
    /// Index of the level (counting from the root level) where the trees
    /// differ; one past the last level for the extension data.
    pub level: usize,
    pub detail: String,
}

/// For each node of `upper`, the index in `lower` of its restriction, and
/// its bit at the length of `lower`.
fn attach(lower: &[BitSeq], upper: &[BitSeq]) -> std::result::Result<Vec<(usize, u8)>, String> {
    let Some(len) = lower.first().map(BitSeq::len) else {
        return Err("empty level".into());
    };
    upper
        .iter()
        .map(|u| {
            let r = u.restrict(len);
            let idx = lower.binary_search(&r).map_err(|_| format!("{u} has no restriction in the level below"))?;
            Ok((idx, u.get(len).unwrap_or(0)))
        })
        .collect()
}

/// Compares two trees as plain trees: same number of levels, same widths,
/// and level by level every node sits over the same node of the level below
/// and leaves it through the same bit. The extension data of the top levels
/// is compared the same way. This is strong similarity of the trees with
/// passing numbers preserved at every node, coding nodes disregarded.
pub fn compare_trees(a: &impl LevelSource, b: &impl LevelSource) -> std::result::Result<(), TreeMismatch> {
    let (la, lb) = (a.lengths(), b.lengths());
    let mismatch = |level, detail: String| Err(TreeMismatch { level, detail });
    if la.len() != lb.len() {
        return mismatch(0, format!("{} levels against {}", la.len(), lb.len()));
    }
    let mut prev: Option<(Vec<BitSeq>, Vec<BitSeq>)> = None;
    for (idx, (&x, &y)) in la.iter().zip(&lb).enumerate() {
        let (va, vb) = (a.level(x), b.level(y));
        if va.len() != vb.len() {
            return mismatch(idx, format!("widths {} and {}", va.len(), vb.len()));
        }
        if let Some((pa, pb)) = &prev {
            let sa = attach(pa, &va).map_err(|d| TreeMismatch { level: idx, detail: d })?;
            let sb = attach(pb, &vb).map_err(|d| TreeMismatch { level: idx, detail: d })?;
            if let Some(j) = (0..sa.len()).find(|&j| sa[j] != sb[j]) {
                return mismatch(idx, format!("{} and {} attach differently", va[j], vb[j]));
            }
        }
        prev = Some((va, vb));
    }
    let (ea, eb) = (a.extension(), b.extension());
    if ea.len() != eb.len() {
        return mismatch(la.len(), format!("extension widths {} and {}", ea.len(), eb.len()));
    }
    if let (Some((pa, pb)), false) = (&prev, ea.is_empty()) {
        let sa = attach(pa, &ea).map_err(|d| TreeMismatch { level: la.len(), detail: d })?;
        let sb = attach(pb, &eb).map_err(|d| TreeMismatch { level: la.len(), detail: d })?;
        if sa != sb {
            return mismatch(la.len(), "extensions attach differently".into());
        }
    }
    Ok(())
}

pub fn strongly_similar_trees(a: &impl LevelSource, b: &impl LevelSource) -> bool {
    compare_trees(a, b).is_ok()
}

/// A meet-closed set of nodes with some of them marked as coding nodes.
///
/// `ext` records, for nodes whose immediate extension is determined by the
/// host, the passing number of that extension at the node's own length. It
/// is consulted when a node has the same length as a coding node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodedSet {
    nodes: Vec<BitSeq>,
    coding: BTreeSet<BitSeq>,
    ext: BTreeMap<BitSeq, u8>,
}

impl CodedSet {
    pub fn new(
        nodes: impl IntoIterator<Item = BitSeq>,
        coding: impl IntoIterator<Item = BitSeq>,
        ext: BTreeMap<BitSeq, u8>,
    ) -> Result<CodedSet> {
        let set: BTreeSet<BitSeq> = nodes.into_iter().collect();
        let nodes: Vec<BitSeq> = set.iter().cloned().collect();
        for (i, s) in nodes.iter().enumerate() {
            for t in &nodes[i + 1..] {
                let m = meet(s, t);
                if !set.contains(&m) {
                    return Err(Error::Precondition(format!("meet {m} of {s} and {t} is missing")));
                }
            }
        }
        let coding: BTreeSet<BitSeq> = coding.into_iter().collect();
        if let Some(c) = coding.iter().find(|c| !set.contains(*c)) {
            return Err(Error::NotMember(c.clone()));
        }
        Ok(CodedSet { nodes, coding, ext })
    }

    /// The whole of a coding tree, with its extension data.
    pub fn from_coding_tree(t: &CodingTree) -> CodedSet {
        let top = t.tree().height();
        let mut ext = BTreeMap::new();
        for e in t.extension() {
            ext.insert(e.restrict(top), e.bit(top));
        }
        for c in t.coding() {
            if c.len() < top {
                let kids: Vec<&BitSeq> = t.tree().successors(c);
                if kids.len() == 1 {
                    ext.insert(c.clone(), kids[0].bit(c.len()));
                }
            }
        }
        CodedSet {
            nodes: t.nodes().iter().cloned().collect(),
            coding: t.coding().iter().cloned().collect(),
            ext,
        }
    }

    /// Nodes sorted by length, then lexicographically.
    pub fn nodes(&self) -> &[BitSeq] {
        &self.nodes
    }

    pub fn is_coding(&self, s: &BitSeq) -> bool {
        self.coding.contains(s)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Passing number of `u`'s immediate extension at the length of `c`,
    /// for `|u| >= |c|`.
    pub fn passing(&self, u: &BitSeq, c: &BitSeq) -> Option<u8> {
        if u.len() > c.len() {
            u.get(c.len())
        } else {
            self.ext.get(u).copied()
        }
    }

    fn index(&self, s: &BitSeq) -> usize {
        self.nodes.binary_search(s).expect("meet-closed")
    }
}

/// The only possible strong similarity from `s` to `t`, which pairs the
/// nodes in order of length and then lexicographic order, provided it
/// satisfies every clause of the definition.
pub fn strong_similarity_map(s: &CodedSet, t: &CodedSet) -> Option<Vec<(BitSeq, BitSeq)>> {
    let pairs: Vec<(BitSeq, BitSeq)> = s.nodes.iter().cloned().zip(t.nodes.iter().cloned()).collect();
    first_failed_clause(s, t).is_none().then_some(pairs)
}

/// The first clause, numbered 1 to 7, that the candidate map violates.
pub fn first_failed_clause(s: &CodedSet, t: &CodedSet) -> Option<usize> {
    let n = s.nodes.len();
    if n != t.nodes.len() {
        return Some(1);
    }
    let (a, b) = (&s.nodes, &t.nodes);
    // Clause 4 first: with meets preserved, quantifying over meets is the
    // same as quantifying over nodes, since every node is its own meet.
    let mut meets_ok = true;
    'outer: for i in 0..n {
        for j in i + 1..n {
            if s.index(&meet(&a[i], &a[j])) != t.index(&meet(&b[i], &b[j])) {
                meets_ok = false;
                break 'outer;
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (x, y) = (&a[i], &a[j]);
            let (fx, fy) = (&b[i], &b[j]);
            if x.comparable(y) != fx.comparable(fy) {
                return Some(3);
            }
            if !x.comparable(y) && lex_less(x, y).ok() != lex_less(fx, fy).ok() {
                return Some(2);
            }
            if x.is_prefix_of(y) != fx.is_prefix_of(fy) {
                return Some(3);
            }
        }
    }
    if !meets_ok {
        return Some(4);
    }
    for i in 0..n {
        for j in 0..n {
            if (a[i].len() < a[j].len()) != (b[i].len() < b[j].len()) {
                return Some(5);
            }
        }
    }
    if (0..n).any(|i| s.is_coding(&a[i]) != t.is_coding(&b[i])) {
        return Some(6);
    }
    for ci in (0..n).filter(|&i| s.is_coding(&a[i])) {
        for u in (0..n).filter(|&u| a[u].len() >= a[ci].len()) {
            if s.passing(&a[u], &a[ci]) != t.passing(&b[u], &b[ci]) {
                return Some(7);
            }
        }
    }
    None
}

/// No node extends another, the meet closure has at most one node of each
/// length, and a node passing a meet it does not extend passes it with 0.
pub fn is_strongly_diagonal(x: &[BitSeq]) -> bool {
    for (i, s) in x.iter().enumerate() {
        for t in &x[i + 1..] {
            if s.comparable(t) {
                return false;
            }
        }
    }
    let set: BTreeSet<BitSeq> = x.iter().cloned().collect();
    let closure = crate::tree::meet_closure(&set);
    let mut lengths = BTreeSet::new();
    if !closure.iter().all(|u| lengths.insert(u.len())) {
        return false;
    }
    for (i, s) in x.iter().enumerate() {
        for t in &x[i + 1..] {
            let m = meet(s, t);
            for u in x {
                if m.len() < u.len() && !m.is_prefix_of(u) && u.get(m.len()) == Some(1) {
                    return false;
                }
            }
        }
    }
    true
}
