//! Strong triangle-free trees.
//!
//! The builder grows the tree one level at a time. Every maximal node
//! `s` of length `n` gets the child `s⌢0`, and gets `s⌢1` exactly when `s`
//! has no parallel 1's with the newest coding node. The next coding node is
//! then picked among the new maximal nodes so that it serves either a
//! requirement from the schedule or the density sweep over `u_i`.

use crate::bitseq::BitSeq;
use crate::coding::{has_parallel_ones, CodingTree};
use crate::error::{Error, Result};
use crate::schedule::{NodeEnumeration, RequirementSchedule};
use crate::tree::{NodeSet, Tree};

/// Does `{c_k : k ∈ f}` code an edge? Returns the offending pair.
pub(crate) fn coded_edge(coding: &[BitSeq], f: &[usize]) -> Option<(usize, usize)> {
    for (a, &k) in f.iter().enumerate() {
        for &m in &f[a + 1..] {
            let (lo, hi) = (k.min(m), k.max(m));
            if coding[hi].get(coding[lo].len()) == Some(1) {
                return Some((lo, hi));
            }
        }
    }
    None
}

/// Does `t` pass exactly the coding nodes listed in `f` with 1, among those
/// shorter than `t`?
pub(crate) fn realizes(t: &BitSeq, coding: &[BitSeq], f: &[usize]) -> bool {
    coding
        .iter()
        .enumerate()
        .take_while(|(_, c)| c.len() < t.len())
        .all(|(k, c)| (t.get(c.len()) == Some(1)) == f.contains(&k))
}

/// The lexicographically least node of the top of `a` whose passing numbers
/// at the coding nodes are 1 exactly at the indices in `f`.
///
/// When `a` carries extension data the search runs over those immediate
/// extensions (the level one past the top); otherwise over the maximal nodes
/// of greatest length.
///
/// ```
/// use trifree::bitseq::bs;
/// use trifree::stf::{build_strong_tf_tree, witness_node};
/// use trifree::RequirementSchedule;
///
/// let s = build_strong_tf_tree(&RequirementSchedule::canonical(), 2).unwrap();
/// assert_eq!(witness_node(&s, &[]).unwrap(), bs("00"));
/// assert_eq!(witness_node(&s, &[0]).unwrap(), bs("01"));
/// ```
pub fn witness_node(a: &CodingTree, f: &[usize]) -> Result<BitSeq> {
    let coding = a.coding();
    let mut f: Vec<usize> = f.to_vec();
    f.sort_unstable();
    f.dedup();
    if let Some(&k) = f.iter().find(|&&k| k >= coding.len()) {
        return Err(Error::Index {
            index: k,
            available: coding.len(),
        });
    }
    if let Some((i, j)) = coded_edge(coding, &f) {
        return Err(Error::CodesEdge(vec![i, j]));
    }
    let candidates: Vec<&BitSeq> = if a.extension().is_empty() {
        a.tree().level(a.tree().height()).collect()
    } else {
        let mut v: Vec<&BitSeq> = a.extension().iter().collect();
        v.sort();
        v
    };
    candidates
        .into_iter()
        .find(|t| realizes(t, coding, &f))
        .cloned()
        .ok_or_else(|| Error::NotFound(format!("no top node realizes {f:?}")))
}

/// Checks the schedule entries `F_{3i+j}` read while choosing coding nodes
/// `c_{4i+j}`, `j ≤ 2`, for `4i+j < n_coding`.
pub(crate) fn validate_schedule_for(schedule: &RequirementSchedule, n_coding: usize) -> Result<()> {
    let upto = (0..n_coding)
        .filter(|n| n % 4 != 3)
        .map(|n| 3 * (n / 4) + n % 4 + 1)
        .max()
        .unwrap_or(0);
    schedule.validate(upto)
}

/// Builds the first `n_coding` levels' worth of a strong triangle-free tree
/// with coding nodes `c_n` of length `n + 1`, using the canonical node
/// enumeration.
pub fn build_strong_tf_tree(schedule: &RequirementSchedule, n_coding: usize) -> Result<CodingTree> {
    build_strong_tf_tree_with(schedule, &NodeEnumeration::canonical(), n_coding)
}

pub fn build_strong_tf_tree_with(
    schedule: &RequirementSchedule,
    node_enum: &NodeEnumeration,
    n_coding: usize,
) -> Result<CodingTree> {
    validate_schedule_for(schedule, n_coding)?;
    let mut nodes: NodeSet = [BitSeq::empty()].into_iter().collect();
    let mut coding: Vec<BitSeq> = Vec::new();
    let mut top = vec![BitSeq::empty()];
    for n in 0..n_coding {
        let mut next = Vec::with_capacity(2 * top.len());
        for s in &top {
            next.push(s.child(0));
            let splits = match coding.last() {
                Some(c) => !has_parallel_ones(s, c),
                None => true,
            };
            if splits {
                next.push(s.child(1));
            }
        }
        let c = choose_coding_node(n, &nodes, &top, &coding, schedule, node_enum)?;
        if !next.contains(&c) {
            return Err(Error::NotFound(format!("chosen coding node {c} is not in the tree")));
        }
        nodes.extend(next.iter().cloned());
        coding.push(c);
        top = next;
    }
    CodingTree::new(Tree::from_nodes_unchecked(nodes), coding)
}

fn choose_coding_node(
    n: usize,
    nodes: &NodeSet,
    top: &[BitSeq],
    coding: &[BitSeq],
    schedule: &RequirementSchedule,
    node_enum: &NodeEnumeration,
) -> Result<BitSeq> {
    let default = BitSeq::zeros(n).child(1);
    if n < 2 {
        return Ok(default);
    }
    let (i, j) = (n / 4, n % 4);
    match j {
        1 => {
            let f = schedule.get(3 * i + 1);
            if coded_edge(coding, &f).is_some() {
                return Ok(default);
            }
            // `top` holds the maximal nodes of length n; their restrictions
            // to n - 1 are the maximal nodes one level down.
            let mut below: Vec<BitSeq> = top.iter().map(|s| s.restrict(n - 1)).collect();
            below.sort();
            below.dedup();
            let t = below
                .into_iter()
                .find(|t| realizes(t, coding, &f))
                .ok_or_else(|| Error::NotFound(format!("no node realizes F_{} = {f:?}", 3 * i + 1)))?;
            Ok(t.child(0).child(1))
        }
        3 => {
            let u = node_enum.get(i);
            if u.len() <= i && nodes.contains(&u) {
                Ok(u.extend_zeros(n - u.len()).child(1))
            } else {
                Ok(default)
            }
        }
        _ => Ok(default),
    }
}
