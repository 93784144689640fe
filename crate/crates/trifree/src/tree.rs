//! Node sets, meet closures and trees.
//!
//! A tree here is not a graph-theoretic tree but a set of nodes closed
//! under meets and under restriction to the lengths that occur in it. Lengths can be sparse; a tree need not contain a node of
//! every length.

use std::collections::{BTreeMap, BTreeSet};

use crate::bitseq::{lex_cmp, meet, BitSeq};
use crate::error::{Error, Result};

pub type NodeSet = BTreeSet<BitSeq>;

/// Sorts nodes lexicographically with prefixes first. After this sort every
/// pairwise meet of the set equals the meet of some adjacent pair.
fn lex_sorted<'a>(x: impl IntoIterator<Item = &'a BitSeq>) -> Vec<&'a BitSeq> {
    let mut v: Vec<&BitSeq> = x.into_iter().collect();
    v.sort_by(|a, b| lex_cmp(a, b));
    v
}

/// The smallest superset of `x` closed under pairwise meets.
pub fn meet_closure(x: &NodeSet) -> NodeSet {
    let mut out = x.clone();
    let sorted = lex_sorted(x);
    for w in sorted.windows(2) {
        out.insert(meet(w[0], w[1]));
    }
    out
}

/// Is `x` closed under meets?
pub fn is_meet_closed(x: &NodeSet) -> bool {
    let sorted = lex_sorted(x);
    sorted.windows(2).all(|w| x.contains(&meet(w[0], w[1])))
}

/// The distinct lengths of members of `x`, ascending.
pub fn lengths(x: &NodeSet) -> Vec<usize> {
    let mut v: Vec<usize> = x.iter().map(BitSeq::len).collect();
    v.dedup();
    v
}

/// Is `x` closed under restriction to lengths occurring in `x`?
///
/// It suffices that every node has its restriction to the next smaller
/// length present; the rest follows by induction down the levels.
pub fn is_level_closed(x: &NodeSet) -> bool {
    let lens = lengths(x);
    x.iter().all(|t| {
        let i = lens.partition_point(|&l| l < t.len());
        i == 0 || x.contains(&t.restrict(lens[i - 1]))
    })
}

/// The tree axioms: closed under meets and under restriction to levels.
pub fn is_tree(x: &NodeSet) -> bool {
    is_meet_closed(x) && is_level_closed(x)
}

/// `{z↾|u| : z ∈ x, u ∈ x^∧, |u| ≤ |z|}`, the tree induced by a node set.
pub fn induced_tree(x: &NodeSet) -> Tree {
    let closure = meet_closure(x);
    let lens = lengths(&closure);
    let mut nodes = NodeSet::new();
    for z in x {
        for &l in lens.iter().take_while(|&&l| l <= z.len()) {
            nodes.insert(z.restrict(l));
        }
    }
    Tree { nodes }
}

/// A node set satisfying [`is_tree`].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Tree {
    nodes: NodeSet,
}

impl Tree {
    /// Wraps `nodes`, checking the tree axioms.
    pub fn new(nodes: NodeSet) -> Result<Self> {
        if !is_meet_closed(&nodes) {
            return Err(Error::Precondition("node set is not closed under meets".into()));
        }
        if !is_level_closed(&nodes) {
            return Err(Error::Precondition("node set is not level-closed".into()));
        }
        Ok(Tree { nodes })
    }

    /// Wraps `nodes` without checking. Used by builders whose output is a
    /// tree by construction; the check is quadratic in the number of levels.
    pub fn from_nodes_unchecked(nodes: NodeSet) -> Self {
        debug_assert!(nodes.len() > 20_000 || is_tree(&nodes));
        Tree { nodes }
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn into_nodes(self) -> NodeSet {
        self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, s: &BitSeq) -> bool {
        self.nodes.contains(s)
    }

    pub fn lengths(&self) -> Vec<usize> {
        lengths(&self.nodes)
    }

    pub fn height(&self) -> usize {
        self.nodes.iter().next_back().map_or(0, BitSeq::len)
    }

    /// Members of length exactly `len`, in lexicographic order.
    pub fn level(&self, len: usize) -> impl Iterator<Item = &BitSeq> {
        self.nodes
            .range(BitSeq::zeros(len)..BitSeq::zeros(len + 1))
    }

    /// Members grouped by length.
    pub fn levels(&self) -> BTreeMap<usize, Vec<&BitSeq>> {
        let mut m: BTreeMap<usize, Vec<&BitSeq>> = BTreeMap::new();
        for t in &self.nodes {
            m.entry(t.len()).or_default().push(t);
        }
        m
    }

    /// The next length present in the tree above `len`.
    pub fn next_length(&self, len: usize) -> Option<usize> {
        self.nodes
            .range(BitSeq::zeros(len + 1)..)
            .next()
            .map(BitSeq::len)
    }

    /// Members of the next level that extend `t`.
    pub fn successors(&self, t: &BitSeq) -> Vec<&BitSeq> {
        match self.next_length(t.len()) {
            Some(l) => self.level(l).filter(|u| t.is_prefix_of(u)).collect(),
            None => Vec::new(),
        }
    }

    pub fn is_splitting(&self, t: &BitSeq) -> bool {
        self.successors(t).len() >= 2
    }

    pub fn splitting_nodes(&self) -> Vec<&BitSeq> {
        let levels = self.levels();
        let mut out = Vec::new();
        let keys: Vec<usize> = levels.keys().copied().collect();
        for w in keys.windows(2) {
            let above = &levels[&w[1]];
            for t in &levels[&w[0]] {
                if above.iter().filter(|u| t.is_prefix_of(u)).count() >= 2 {
                    out.push(*t);
                }
            }
        }
        out
    }

    /// Nodes with no proper extension in the tree.
    pub fn terminal_nodes(&self) -> Vec<&BitSeq> {
        let sorted = lex_sorted(&self.nodes);
        let mut out = Vec::new();
        for (i, t) in sorted.iter().enumerate() {
            let extended = sorted.get(i + 1).is_some_and(|u| t.is_prefix_of(u));
            if !extended {
                out.push(*t);
            }
        }
        out
    }

    /// The stem: the meet of all members (the empty sequence for an empty tree).
    pub fn stem(&self) -> BitSeq {
        let sorted = lex_sorted(&self.nodes);
        match (sorted.first(), sorted.last()) {
            (Some(a), Some(b)) => meet(a, b),
            _ => BitSeq::empty(),
        }
    }

    /// Is `s` an initial segment of some member? (membership in `T̂`)
    pub fn contains_hat(&self, s: &BitSeq) -> bool {
        self.nodes
            .range(BitSeq::zeros(s.len())..)
            .any(|t| s.is_prefix_of(t))
    }

    /// The level of `T̂` at length `len`: distinct restrictions of members
    /// at least that long, in lexicographic order. Every such member passes
    /// through the least level at or above `len`, so that level suffices.
    pub fn hat_level(&self, len: usize) -> Vec<BitSeq> {
        let Some(first) = self.nodes.range(BitSeq::zeros(len)..).next() else {
            return Vec::new();
        };
        let mut out: Vec<BitSeq> = self.level(first.len()).map(|t| t.restrict(len)).collect();
        out.dedup();
        out
    }
}
