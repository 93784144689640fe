//! Antichains of coding nodes, strict similarity and envelopes.
//!
//! An antichain here is detached from any host tree: every bit it needs is
//! stored in its nodes, except the passing number of a coding node at its
//! own length, which is taken to be 0 (a coding node never codes an edge to
//! itself).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::bitseq::BitSeq;
use crate::coding::{has_parallel_ones, CodingTree};
use crate::error::{Error, Result};
use crate::similarity::{strong_similarity_map, CodedSet};
use crate::tree::{induced_tree, meet_closure, NodeSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<BitSeq>", into = "Vec<BitSeq>")]
pub struct Antichain {
    /// Sorted by increasing length.
    nodes: Vec<BitSeq>,
}

impl TryFrom<Vec<BitSeq>> for Antichain {
    type Error = Error;

    fn try_from(nodes: Vec<BitSeq>) -> Result<Antichain> {
        Antichain::new(nodes)
    }
}

impl From<Antichain> for Vec<BitSeq> {
    fn from(z: Antichain) -> Vec<BitSeq> {
        z.nodes
    }
}

impl Antichain {
    /// Sorts by length and checks that no node extends another and no two
    /// nodes have the same length.
    pub fn new(nodes: impl IntoIterator<Item = BitSeq>) -> Result<Antichain> {
        let mut nodes: Vec<BitSeq> = nodes.into_iter().collect();
        nodes.sort();
        for (i, s) in nodes.iter().enumerate() {
            for t in &nodes[i + 1..] {
                if s.comparable(t) {
                    return Err(Error::Comparable(s.clone(), t.clone()));
                }
                if s.len() == t.len() {
                    return Err(Error::Precondition(format!("{s} and {t} have the same length")));
                }
            }
        }
        Ok(Antichain { nodes })
    }

    pub fn nodes(&self) -> &[BitSeq] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Z^∧`, sorted by length.
    pub fn meet_closure(&self) -> Vec<BitSeq> {
        let set: NodeSet = self.nodes.iter().cloned().collect();
        meet_closure(&set).into_iter().collect()
    }

    pub fn coded_set(&self) -> CodedSet {
        let ext: BTreeMap<BitSeq, u8> = self.nodes.iter().map(|z| (z.clone(), 0)).collect();
        CodedSet::new(self.meet_closure(), self.nodes.iter().cloned(), ext).expect("meet closure is meet-closed")
    }

    /// The tree induced by the antichain, with the antichain as its coding
    /// nodes.
    pub fn induced(&self) -> CodingTree {
        let set: NodeSet = self.nodes.iter().cloned().collect();
        CodingTree::new(induced_tree(&set), self.nodes.clone()).expect("antichain nodes have distinct lengths")
    }

    /// `I_l`: indices of the nodes longer than `l` with a 1 at `l`.
    pub fn index_set(&self, l: usize) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].len() > l && self.nodes[i].bit(l) == 1).collect()
    }

    /// The minimal levels of new sets of parallel 1's: positions `l` where
    /// `I_l` has at least two members and no earlier position has exactly
    /// the same index set.
    pub fn minimal_levels(&self) -> Vec<usize> {
        let mut positions: BTreeSet<usize> = BTreeSet::new();
        for z in &self.nodes {
            positions.extend(z.ones().iter().map(|&p| p as usize));
        }
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut out = Vec::new();
        for l in positions {
            let idx = self.index_set(l);
            if idx.len() >= 2 && seen.insert(idx) {
                out.push(l);
            }
        }
        out
    }

    /// `l*` for a minimal level `l`: the largest value such that no node of
    /// `Z^∧` has length strictly between `l` and it, and no later minimal
    /// level is at or below it.
    pub fn admissible_end(&self, l: usize, minimal: &[usize], closure: &[BitSeq]) -> usize {
        let next_node = closure.iter().map(BitSeq::len).find(|&x| x > l);
        let next_min = minimal.iter().copied().find(|&x| x > l).map(|x| x - 1);
        match (next_node, next_min) {
            (Some(a), Some(b)) => a.min(b),
            (a, b) => a.or(b).expect("a node is longer than any minimal level"),
        }
    }

    /// Is the new set of parallel 1's at `l` witnessed by the first node of
    /// the antichain at or above `l`, inside the admissible interval?
    pub fn minimally_witnessed(&self, l: usize, l_star: usize) -> bool {
        let Some(zk) = self.nodes.iter().find(|z| z.len() >= l) else { return false };
        let h = zk.len();
        h <= l_star && self.index_set(h) == self.index_set(l)
    }

    pub fn strict_similarity_sequence(&self) -> StrictSimilaritySequence {
        let closure = self.meet_closure();
        let minimal = self.minimal_levels();
        let mut levels = Vec::new();
        let mut index_sets = Vec::new();
        let mut admissible_ends = Vec::new();
        for &l in &minimal {
            let l_star = self.admissible_end(l, &minimal, &closure);
            if !self.minimally_witnessed(l, l_star) {
                levels.push(l);
                index_sets.push(self.index_set(l));
                admissible_ends.push(l_star);
            }
        }
        StrictSimilaritySequence {
            levels,
            index_sets,
            admissible_ends,
            critical_lengths: closure.iter().map(BitSeq::len).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictSimilaritySequence {
    /// Minimal levels of new parallel 1's that are not minimally witnessed.
    pub levels: Vec<usize>,
    pub index_sets: Vec<Vec<usize>>,
    /// `l*` for each entry of `levels`.
    pub admissible_ends: Vec<usize>,
    /// Lengths of the nodes of the meet closure, ascending.
    pub critical_lengths: Vec<usize>,
}

impl StrictSimilaritySequence {
    /// Ranks of the levels and of the critical lengths inside their merged
    /// set, equal values sharing a rank.
    fn ranks(&self) -> (Vec<usize>, Vec<usize>) {
        let merged: BTreeSet<usize> = self.levels.iter().chain(&self.critical_lengths).copied().collect();
        let merged: Vec<usize> = merged.into_iter().collect();
        let rank = |x: &usize| merged.binary_search(x).expect("present");
        (self.levels.iter().map(rank).collect(), self.critical_lengths.iter().map(rank).collect())
    }
}

/// Strict similarity: strongly similar meet closures, the same number of
/// unwitnessed levels with the same index sets, and the same interleaving of
/// those levels with the lengths of the meet closures.
pub fn strictly_similar(y: &Antichain, z: &Antichain) -> bool {
    if strong_similarity_map(&y.coded_set(), &z.coded_set()).is_none() {
        return false;
    }
    let (sy, sz) = (y.strict_similarity_sequence(), z.strict_similarity_sequence());
    sy.levels.len() == sz.levels.len()
        && sy.critical_lengths.len() == sz.critical_lengths.len()
        && sy.index_sets == sz.index_sets
        && sy.ranks() == sz.ranks()
}

/// A canonical key for the strict similarity class of an antichain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeCode {
    /// For each node of the meet closure in length order, the index of its
    /// longest proper initial segment in the closure.
    pub parents: Vec<Option<usize>>,
    /// The bit each node takes just past its parent.
    pub branches: Vec<u8>,
    /// For each node of the closure, its index in the antichain if it is one.
    pub coding: Vec<Option<usize>>,
    /// For each antichain node, the bits at its length of the closure nodes
    /// at least as long, in closure order.
    pub passing: Vec<Vec<u8>>,
    pub index_sets: Vec<Vec<usize>>,
    pub level_ranks: Vec<usize>,
    pub node_ranks: Vec<usize>,
}

pub fn type_code(z: &Antichain) -> TypeCode {
    let closure = z.meet_closure();
    let parents: Vec<Option<usize>> = closure
        .iter()
        .map(|u| (0..closure.len()).rev().find(|&j| closure[j].len() < u.len() && closure[j].is_prefix_of(u)))
        .collect();
    let branches = closure
        .iter()
        .zip(&parents)
        .map(|(u, p)| p.map_or(0, |j| u.bit(closure[j].len())))
        .collect();
    let coding = closure.iter().map(|u| z.nodes.iter().position(|x| x == u)).collect();
    let passing = z
        .nodes
        .iter()
        .map(|c| {
            closure
                .iter()
                .filter(|u| u.len() >= c.len())
                .map(|u| if u.len() == c.len() { 0 } else { u.bit(c.len()) })
                .collect()
        })
        .collect();
    let seq = z.strict_similarity_sequence();
    let (level_ranks, node_ranks) = seq.ranks();
    TypeCode {
        parents,
        branches,
        coding,
        passing,
        index_sets: seq.index_sets,
        level_ranks,
        node_ranks,
    }
}

/// An antichain together with witnessing coding nodes for each of its
/// unwitnessed new sets of parallel 1's.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Envelope {
    pub base: Antichain,
    pub witnesses: Vec<BitSeq>,
    pub union: Antichain,
}

/// Builds an envelope of `z` from `pool`, taking for each unwitnessed level
/// the shortest pool node that qualifies.
///
/// Pool nodes are witnesses in the sense of the incremental builder: each
/// has a single 1, in its last position, so it branches off the all-zero
/// node one position below its own length. That branching node is taken as
/// its meet with the rest of the envelope.
pub fn make_envelope(z: &Antichain, pool: &[BitSeq]) -> Result<Envelope> {
    let seq = z.strict_similarity_sequence();
    let mut chosen: Vec<BitSeq> = Vec::new();
    let mut sorted_pool: Vec<&BitSeq> = pool.iter().collect();
    sorted_pool.sort();
    for (j, &l) in seq.levels.iter().enumerate() {
        let l_star = seq.admissible_ends[j];
        let floor = if j == 0 { None } else { Some(seq.admissible_ends[j - 1]) };
        let found = sorted_pool.iter().find(|w| {
            let h = w.len();
            if h < l || h > l_star || z.index_set(h) != seq.index_sets[j] {
                return false;
            }
            if z.nodes.iter().chain(&chosen).any(|x| has_parallel_ones(w, x) || x.comparable(w)) {
                return false;
            }
            // The witness branches off at h - 1; clause (4) puts that
            // strictly between the previous admissible end and l.
            let branch = h - 1;
            floor.map_or(true, |f| branch > f) && branch < l
        });
        match found {
            Some(w) => chosen.push((*w).clone()),
            None => {
                return Err(Error::NotFound(format!(
                    "no pool node witnesses the parallel 1's of {:?} at level {l}",
                    seq.index_sets[j]
                )))
            }
        }
    }
    let union = Antichain::new(z.nodes.iter().cloned().chain(chosen.iter().cloned()))?;
    Ok(Envelope {
        base: z.clone(),
        witnesses: chosen,
        union,
    })
}

/// The nodes of `f` sitting where the base antichain sits in the envelope,
/// under the strong similarity from `e`'s meet closure to `f`'s.
pub fn restrict_envelope(f: &Antichain, e: &Envelope) -> Result<Antichain> {
    if strong_similarity_map(&e.union.coded_set(), &f.coded_set()).is_none() {
        return Err(Error::Precondition("the antichain is not strongly similar to the envelope".into()));
    }
    let picked = e
        .union
        .nodes
        .iter()
        .zip(&f.nodes)
        .filter(|(u, _)| e.base.nodes.contains(u))
        .map(|(_, x)| x.clone());
    Antichain::new(picked)
}
