//! Incremental trees and their witness pools.
//!
//! In the ambient tree the nodes that pass `c_n` with a 1 acquire their
//! common 1 all at once. The incremental tree `S` stretches the ambient tree
//! so that, just below `l_n`, those nodes acquire 1's one subset at a time:
//! first every pair, then every triple, and so on up to the whole set. Each
//! stage gets its own position, and a witness coding node of the host sits
//! exactly at that position, passed with a 1 by exactly the stage's subset.
//!
//! Block `k` of the slot at `l_n` spans two positions. The first carries a
//! 1 only in the witness `w_{n,k}`, which branches off the all-zero node
//! there. The second carries a 1 in the images of the nodes of `P_k`.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::ambient::LazyAmbientTree;
use crate::bitseq::BitSeq;
use crate::coding::CodingTree;
use crate::error::{Error, Result};
use crate::stretch::{Slot, Stretch};
use crate::tree::{NodeSet, Tree};

/// Largest number of nodes passing one coding node with a 1 for which every
/// subset gets a stage.
pub const MAX_MEMBERS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Index of the coding node of `S` this witness precedes.
    pub n: usize,
    /// Stage number inside the interval.
    pub k: usize,
    /// Images in `S` of the level-`l_n` nodes that pass the witness with 1,
    /// restricted to the witness length plus one.
    pub subset: Vec<BitSeq>,
    /// `|w_{n,k}|`.
    pub position: usize,
    pub node: BitSeq,
}

#[derive(Clone, Debug)]
pub struct IncrementalTree {
    tree: CodingTree,
    host: CodingTree,
    witnesses: Vec<Witness>,
}

impl IncrementalTree {
    /// The incremental tree `S`, with the immediate extensions of its top
    /// level attached.
    pub fn tree(&self) -> &CodingTree {
        &self.tree
    }

    /// `S` together with every witness and the nodes below them.
    pub fn host(&self) -> &CodingTree {
        &self.host
    }

    pub fn witnesses(&self) -> &[Witness] {
        &self.witnesses
    }

    pub fn witnesses_for(&self, n: usize) -> impl Iterator<Item = &Witness> {
        self.witnesses.iter().filter(move |w| w.n == n)
    }
}

/// Subsets of `0..m` that get a stage, ascending by size and then in colex
/// order: every subset of size at least two, and the whole set.
pub fn stages(m: usize) -> Vec<Vec<usize>> {
    let mut masks: Vec<u32> = (1u32..(1 << m)).filter(|s| s.count_ones() >= 2 || s.count_ones() as usize == m).collect();
    // Colex on bitmasks is plain numeric order.
    masks.sort_by_key(|&s| (s.count_ones(), s));
    masks
        .into_iter()
        .map(|s| (0..m).filter(|&i| s >> i & 1 == 1).collect())
        .collect()
}

/// Builds `S` through its first `n_coding` coding nodes, with the witness
/// pool.
pub fn build_incremental(ambient: &mut LazyAmbientTree, n_coding: usize) -> Result<IncrementalTree> {
    if n_coding == 0 {
        return Err(Error::Precondition("need at least one coding node".into()));
    }
    ambient.grow_to(n_coding)?;
    let coding: Vec<BitSeq> = ambient.coding()[..n_coding].to_vec();

    // Nodes of Lev(l_n) whose immediate extension passes c_n with 1.
    let mut members: Vec<Vec<BitSeq>> = Vec::new();
    for c in &coding {
        let l = c.len();
        let level = ambient.level(l)?;
        let mut ms = Vec::new();
        for t in level {
            if t != *c && ambient.extensions(&t, l + 1)?.iter().any(|e| e.get(l) == Some(1)) {
                ms.push(t);
            }
        }
        if ms.len() > MAX_MEMBERS {
            return Err(Error::Budget(format!(
                "{} nodes pass coding node {} with 1; at most {MAX_MEMBERS} are staged",
                ms.len(),
                members.len()
            )));
        }
        members.push(ms);
    }

    let stage_sets: Vec<Vec<Vec<usize>>> = members.iter().map(|ms| stages(ms.len())).collect();
    let slots: Vec<Slot> = coding
        .iter()
        .zip(&members)
        .zip(&stage_sets)
        .map(|((c, ms), st)| {
            let mut ones: HashMap<BitSeq, Vec<usize>> = HashMap::new();
            for (k, set) in st.iter().enumerate() {
                for &i in set {
                    ones.entry(ms[i].clone()).or_default().push(2 * k + 1);
                }
            }
            Slot {
                at: c.len(),
                width: 2 * st.len(),
                ones,
            }
        })
        .collect();
    let stretch = Stretch::new(slots);

    let top = coding.last().expect("nonempty").len();
    let mut s_nodes = NodeSet::new();
    for m in 0..=top {
        s_nodes.extend(ambient.level(m)?.iter().map(|t| stretch.image(t)));
    }
    let ext: Vec<BitSeq> = ambient.level(top + 1)?.iter().map(|t| stretch.image(t)).collect();
    let s_coding: Vec<BitSeq> = coding.iter().map(|c| stretch.image(c)).collect();

    let mut host_nodes = s_nodes.clone();
    let mut witnesses = Vec::new();
    let mut host_coding = Vec::new();
    for (n, c) in coding.iter().enumerate() {
        let start = stretch.slot_start(n);
        let width = stretch.slots()[n].width;
        let images: Vec<BitSeq> = ambient.level(c.len())?.iter().map(|t| stretch.image(t)).collect();
        for len in start..start + width {
            host_nodes.extend(images.iter().map(|u| u.restrict(len)));
        }
        for (k, set) in stage_sets[n].iter().enumerate() {
            let position = start + 2 * k + 1;
            let node = BitSeq::from_ones(position, [position - 1]);
            let subset = set
                .iter()
                .map(|&i| stretch.image(&members[n][i]).restrict(position + 1))
                .collect();
            host_nodes.insert(node.clone());
            host_coding.push(node.clone());
            witnesses.push(Witness { n, k, subset, position, node });
        }
        host_coding.push(s_coding[n].clone());
    }

    let tree = CodingTree::new(Tree::new(s_nodes)?, s_coding)?.with_extension(ext.clone())?;
    let host = CodingTree::new(Tree::new(host_nodes)?, host_coding)?.with_extension(ext)?;
    Ok(IncrementalTree { tree, host, witnesses })
}

/// Checks that every subset recorded for a witness is exactly the set of
/// nodes of the host passing it with a 1.
pub fn witnesses_are_exact(t: &IncrementalTree) -> bool {
    t.witnesses.iter().all(|w| {
        let passing: BTreeSet<BitSeq> = t
            .host
            .tree()
            .hat_level(w.position + 1)
            .into_iter()
            .filter(|u| u.get(w.position) == Some(1))
            .collect();
        passing == w.subset.iter().cloned().collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{check_incremental_parallel_ones, check_strong_coding_tree};

    #[test]
    fn stage_order() {
        assert_eq!(stages(1), vec![vec![0]]);
        assert_eq!(stages(2), vec![vec![0, 1]]);
        assert_eq!(
            stages(3),
            vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]]
        );
        assert_eq!(stages(5).len(), 32 - 5 - 1);
    }

    #[test]
    fn later_stages_never_contain_earlier_ones_unless_larger() {
        let st = stages(5);
        for (a, x) in st.iter().enumerate() {
            for y in &st[a + 1..] {
                let (x, y): (BTreeSet<_>, BTreeSet<_>) = (x.iter().collect(), y.iter().collect());
                assert!(!x.is_superset(&y));
            }
        }
    }

    #[test]
    fn small_incremental_tree() {
        let mut amb = LazyAmbientTree::canonical();
        let s = build_incremental(&mut amb, 4).unwrap();
        assert!(check_incremental_parallel_ones(s.tree()).passed());
        let r = check_strong_coding_tree(s.tree(), true);
        assert!(r.passed(), "{:?}", r.violation);
        assert!(witnesses_are_exact(&s));
        // Three nodes pass c_2 with 1.
        assert_eq!(s.witnesses_for(2).count(), 4);
        for w in s.witnesses() {
            assert!(!s.tree().nodes().contains(&w.node));
        }
    }

    #[test]
    fn through_six_coding_nodes() {
        let mut amb = LazyAmbientTree::canonical();
        let s = build_incremental(&mut amb, 6).unwrap();
        assert_eq!(s.witnesses().len(), 1 + 1 + 4 + 26 + 247 + 1013);
        assert!(check_incremental_parallel_ones(s.tree()).passed());
        assert!(check_strong_coding_tree(s.tree(), true).passed());
        assert!(witnesses_are_exact(&s));
    }

    #[test]
    fn too_many_members_is_a_budget_error() {
        let mut amb = LazyAmbientTree::canonical();
        assert!(matches!(build_incremental(&mut amb, 8), Err(Error::Budget(_))));
    }
}
