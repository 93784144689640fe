//! A diagonal antichain coding the same graph as the ambient tree.
//!
//! The antichain lives in a stretched copy of the ambient tree. One new
//! position is inserted just below each coding level `l_i`. Every image
//! node carries a 0 there. The copy of `c_i` takes the 1 instead and stops,
//! so it splits off from the image of `c_i` one level below its own length.
//! The stretched tree together with these new nodes is called the host.
//!
//! Passing numbers at the old positions are untouched by the stretch, so the
//! copies code exactly the graph that the coding nodes of the ambient tree
//! code.

use serde::Serialize;

use crate::ambient::LazyAmbientTree;
use crate::bitseq::BitSeq;
use crate::coding::{graph_of_coding_nodes, CodedGraph};
use crate::error::{Error, Result};
use crate::similarity::LevelSource;
use crate::stretch::{Slot, Stretch};

#[derive(Clone, Debug)]
pub struct DiagonalAntichain {
    ambient: LazyAmbientTree,
    stretch: Stretch,
    nodes: Vec<BitSeq>,
    /// Lengths of the meet-closure nodes that are not splitting
    /// predecessors of antichain nodes.
    level_set: Vec<usize>,
}

/// Summary of one antichain, for reporting.
#[derive(Clone, Debug, Serialize)]
pub struct DiagonalSummary {
    pub nodes: Vec<BitSeq>,
    pub lengths: Vec<usize>,
    pub ambient_lengths: Vec<usize>,
    pub level_set_size: usize,
}

/// Builds the first `n_coding` nodes of the diagonal antichain.
pub fn build_diagonal_antichain(ambient: &mut LazyAmbientTree, n_coding: usize) -> Result<DiagonalAntichain> {
    if n_coding == 0 {
        return Err(Error::Precondition("an antichain needs at least one coding node".into()));
    }
    ambient.grow_to(n_coding)?;
    let coding: Vec<BitSeq> = ambient.coding()[..n_coding].to_vec();
    let slots = coding
        .iter()
        .map(|c| Slot {
            at: c.len(),
            width: 1,
            ones: Default::default(),
        })
        .collect();
    let stretch = Stretch::new(slots);
    let nodes = coding
        .iter()
        .map(|c| {
            let k = stretch.sigma(c.len());
            let mut d = stretch.image(c).restrict(k - 1);
            d.push(1);
            d
        })
        .collect();
    let mut d = DiagonalAntichain {
        ambient: ambient.clone(),
        stretch,
        nodes,
        level_set: Vec::new(),
    };
    d.level_set = d.compute_level_set();
    Ok(d)
}

impl DiagonalAntichain {
    /// The antichain nodes `c^D_0, c^D_1, ...`.
    pub fn nodes(&self) -> &[BitSeq] {
        &self.nodes
    }

    /// `k_i = |c^D_i|`.
    pub fn lengths(&self) -> Vec<usize> {
        self.nodes.iter().map(BitSeq::len).collect()
    }

    /// `l_i = |c_i|` in the ambient tree.
    pub fn ambient_lengths(&self) -> Vec<usize> {
        self.ambient.coding()[..self.nodes.len()].iter().map(BitSeq::len).collect()
    }

    pub fn graph(&self) -> CodedGraph {
        graph_of_coding_nodes(&self.nodes)
    }

    pub fn summary(&self) -> DiagonalSummary {
        DiagonalSummary {
            nodes: self.nodes.clone(),
            lengths: self.lengths(),
            ambient_lengths: self.ambient_lengths(),
            level_set_size: self.level_set.len(),
        }
    }

    fn top(&self) -> usize {
        self.nodes.last().expect("nonempty").len()
    }

    /// The level of the host of length `len`, sorted. `len` may be at most
    /// one past the last antichain node.
    pub fn host_level(&self, len: usize) -> Vec<BitSeq> {
        let m = self.stretch.preimage_ceiling(len);
        let base = self.ambient.level_known(m).expect("ambient grown past the last coding node");
        let mut out: Vec<BitSeq> = base.iter().map(|t| self.stretch.image(t).restrict(len)).collect();
        out.extend(self.nodes.iter().filter(|d| d.len() == len).cloned());
        out.sort();
        out.dedup();
        out
    }

    /// The lengths at which the derived tree has levels.
    pub fn level_set(&self) -> &[usize] {
        &self.level_set
    }

    fn compute_level_set(&self) -> Vec<usize> {
        let top = self.top();
        let mut splitting: Vec<BitSeq> = Vec::new();
        for len in 0..top {
            let above = self.host_level(len + 1);
            let mut i = 0;
            while i < above.len() {
                let parent = above[i].restrict(len);
                let mut j = i + 1;
                while j < above.len() && above[j].restrict(len) == parent {
                    j += 1;
                }
                if j - i >= 2 {
                    splitting.push(parent);
                }
                i = j;
            }
        }
        let preds: Vec<BitSeq> = self
            .nodes
            .iter()
            .filter_map(|d| {
                splitting
                    .iter()
                    .filter(|s| s.len() < d.len() && s.is_prefix_of(d))
                    .max_by_key(|s| s.len())
                    .cloned()
            })
            .collect();
        let mut lens: Vec<usize> = splitting
            .iter()
            .filter(|s| !preds.contains(s))
            .map(BitSeq::len)
            .chain(self.nodes.iter().map(BitSeq::len))
            .collect();
        lens.sort_unstable();
        lens.dedup();
        lens
    }

    /// The derived tree: host levels at the lengths of [`Self::level_set`],
    /// without the antichain nodes, and the host level one past the last
    /// antichain node as extension data.
    pub fn star(&self) -> DerivedTree<'_> {
        DerivedTree { d: self }
    }

    /// The ambient tree up to the last coding node that was copied.
    pub fn ambient_prefix(&self) -> AmbientPrefix<'_> {
        AmbientPrefix {
            ambient: &self.ambient,
            top: self.ambient.coding()[self.nodes.len() - 1].len(),
        }
    }
}

pub struct DerivedTree<'a> {
    d: &'a DiagonalAntichain,
}

impl LevelSource for DerivedTree<'_> {
    fn lengths(&self) -> Vec<usize> {
        self.d.level_set.clone()
    }

    fn level(&self, len: usize) -> Vec<BitSeq> {
        let mut v = self.d.host_level(len);
        v.retain(|t| !self.d.nodes.contains(t));
        v
    }

    fn extension(&self) -> Vec<BitSeq> {
        self.d.host_level(self.d.top() + 1)
    }
}

/// Every level of the ambient tree up to `top`, with the next level as
/// extension data.
pub struct AmbientPrefix<'a> {
    ambient: &'a LazyAmbientTree,
    top: usize,
}

impl LevelSource for AmbientPrefix<'_> {
    fn lengths(&self) -> Vec<usize> {
        (0..=self.top).collect()
    }

    fn level(&self, len: usize) -> Vec<BitSeq> {
        self.ambient.level_known(len).expect("known")
    }

    fn extension(&self) -> Vec<BitSeq> {
        self.ambient.level_known(self.top + 1).expect("known")
    }
}
