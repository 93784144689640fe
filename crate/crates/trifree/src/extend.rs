//! Extension searches inside the ambient tree.
//!
//! These turn the existence arguments for extending a valid finite subtree
//! into concrete searches. Each one grows the ambient tree on demand and
//! keeps to leftmost extensions except where a 1 is wanted, so no parallel
//! 1's appear that are not forced.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::ambient::LazyAmbientTree;
use crate::bitseq::BitSeq;
use crate::coding::has_parallel_ones;
use crate::error::{Error, Result};
use crate::tree::{NodeSet, Tree};

/// Positions at or above `from` where at least two of `after` carry a 1 and
/// the corresponding members of `before` share no 1 below `from`.
///
/// `before[i]` must be a prefix of `after[i]`. Returns each position with
/// the indices of the nodes carrying the 1.
pub fn new_parallel_ones(before: &[BitSeq], after: &[BitSeq], from: usize) -> Vec<(usize, Vec<usize>)> {
    let mut positions: BTreeSet<usize> = BTreeSet::new();
    for a in after {
        positions.extend(a.ones().iter().map(|&p| p as usize).filter(|&p| p >= from));
    }
    let mut out = Vec::new();
    for p in positions {
        let js: Vec<usize> = (0..after.len()).filter(|&i| after[i].get(p) == Some(1)).collect();
        if js.len() < 2 {
            continue;
        }
        let shared = before[js[0]]
            .ones()
            .iter()
            .map(|&q| q as usize)
            .take_while(|&q| q < from)
            .any(|q| js[1..].iter().all(|&i| before[i].get(q) == Some(1)));
        if !shared {
            out.push((p, js));
        }
    }
    out
}

/// Extends every node of `xs` leftmost to length `len`.
///
/// When `len` does not pass the level of a coding node above the nodes, the
/// result has no new parallel 1's; debug builds check this.
pub fn leftmost_lift(ambient: &mut LazyAmbientTree, xs: &[BitSeq], len: usize) -> Result<Vec<BitSeq>> {
    let ys: Vec<BitSeq> = xs
        .iter()
        .map(|x| ambient.leftmost_extension(x, len))
        .collect::<Result<_>>()?;
    if cfg!(debug_assertions) {
        if let Some(from) = xs.iter().map(BitSeq::len).max() {
            let passes_coding = ambient.coding().iter().any(|c| c.len() >= from && c.len() < len);
            if !passes_coding && xs.iter().all(|x| x.len() == from) {
                debug_assert!(new_parallel_ones(xs, &ys, from).is_empty());
            }
        }
    }
    Ok(ys)
}

/// The immediate extensions in the ambient tree of the top level of `a`,
/// sorted.
pub fn a_plus(a: &Tree, ambient: &mut LazyAmbientTree) -> Result<Vec<BitSeq>> {
    let mut out = Vec::new();
    for t in a.level(a.height()) {
        out.extend(ambient.extensions(t, t.len() + 1)?);
    }
    out.sort();
    Ok(out)
}

/// Result of [`extend_with_passing_numbers`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PassingExtension {
    /// `k` with `c_k` the new coding node.
    pub coding_index: usize,
    pub coding_node: BitSeq,
    /// Extensions of the members of `A⁺` to length `l_k`, in the order of
    /// [`a_plus`]; the pivot's entry is the coding node.
    pub nodes: Vec<BitSeq>,
    /// Passing number of each extension at the coding node.
    pub passing: Vec<u8>,
}

/// Extends `A⁺` so that the pivot becomes a coding node `c_k` and every other
/// member passes it with the requested bit.
///
/// `eps` is indexed like [`a_plus`]. It must give 0 to the pivot and to
/// every member with parallel 1's with the pivot. The search takes the
/// first `k` whose coding node extends the pivot and lies past the top of
/// `A⁺`, for which every member wanting a 1 can still split off in the
/// interval of `c_k`; members are extended leftmost up to that interval.
pub fn extend_with_passing_numbers(
    ambient: &mut LazyAmbientTree,
    a: &Tree,
    pivot: usize,
    eps: &[u8],
) -> Result<PassingExtension> {
    let plus = a_plus(a, ambient)?;
    if eps.len() != plus.len() {
        return Err(Error::Precondition(format!(
            "{} passing numbers given for {} nodes",
            eps.len(),
            plus.len()
        )));
    }
    let Some(sd) = plus.get(pivot).cloned() else {
        return Err(Error::Index {
            index: pivot,
            available: plus.len(),
        });
    };
    if eps[pivot] != 0 {
        return Err(Error::Precondition("the pivot's own passing number must be 0".into()));
    }
    if let Some(i) = (0..plus.len()).find(|&i| eps[i] == 1 && has_parallel_ones(&plus[i], &sd)) {
        return Err(Error::Precondition(format!(
            "{} has parallel 1's with the pivot {sd}, so it cannot pass with 1",
            plus[i]
        )));
    }
    let ell = plus.iter().map(BitSeq::len).max().unwrap_or(0);
    let mut k = 0;
    loop {
        let ck = ambient.coding_node(k)?.clone();
        let floor = if k == 0 { 0 } else { ambient.coding()[k - 1].len() + 1 };
        if floor >= ell && sd.is_prefix_of(&ck) {
            if let Some(out) = try_interval(ambient, &plus, pivot, eps, k, floor)? {
                return Ok(out);
            }
        }
        k += 1;
    }
}

fn try_interval(
    ambient: &mut LazyAmbientTree,
    plus: &[BitSeq],
    pivot: usize,
    eps: &[u8],
    k: usize,
    floor: usize,
) -> Result<Option<PassingExtension>> {
    let ck = ambient.coding()[k].clone();
    let lk = ck.len();
    let mut nodes = Vec::with_capacity(plus.len());
    let mut passing = Vec::with_capacity(plus.len());
    for (i, s) in plus.iter().enumerate() {
        if i == pivot {
            nodes.push(ck.clone());
            passing.push(0);
            continue;
        }
        let u = ambient.leftmost_extension(s, floor)?;
        let hit = ambient
            .extensions(&u, lk + 1)?
            .into_iter()
            .find(|v| v.get(lk) == Some(eps[i]));
        match hit {
            Some(v) => {
                nodes.push(v.restrict(lk));
                passing.push(eps[i]);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(PassingExtension {
        coding_index: k,
        coding_node: ck,
        nodes,
        passing,
    }))
}

/// Extends `a` so that the nodes of `spl` split one after another, in the
/// given order and at most one per interval of the ambient tree, while the
/// nodes of `rest` are carried along leftmost.
///
/// Both lists must consist of top-level nodes of `a`; top-level nodes in
/// neither list are dropped. The returned tree has a level at each new
/// splitting length and a top level one past the last of them. With `spl`
/// empty it is `a` plus the leftmost lift of `rest` by one level.
pub fn extend_with_splitting(
    ambient: &mut LazyAmbientTree,
    a: &Tree,
    spl: &[BitSeq],
    rest: &[BitSeq],
) -> Result<Tree> {
    let top = a.height();
    for s in spl.iter().chain(rest) {
        if s.len() != top || !a.contains(s) {
            return Err(Error::Precondition(format!("{s} is not a top-level node of the subtree")));
        }
    }
    let distinct: BTreeSet<&BitSeq> = spl.iter().chain(rest).collect();
    if distinct.len() != spl.len() + rest.len() {
        return Err(Error::Precondition("spl and rest must list distinct nodes".into()));
    }
    let mut nodes: NodeSet = a.nodes().clone();
    // Frontier nodes, with the index of the `spl` entry each one still has
    // to split for.
    let mut frontier: Vec<(BitSeq, Option<usize>)> = spl
        .iter()
        .enumerate()
        .map(|(j, s)| (s.clone(), Some(j)))
        .chain(rest.iter().map(|s| (s.clone(), None)))
        .collect();
    let mut cur = top;
    let mut n = 0;
    for j in 0..spl.len() {
        let idx = frontier.iter().position(|(_, w)| *w == Some(j)).expect("pending");
        let (split_node, m) = loop {
            let floor = if n == 0 { 0 } else { ambient.coding_node(n - 1)?.len() + 1 };
            ambient.grow_to(n + 1)?;
            if floor >= cur {
                let u = ambient.leftmost_extension(&frontier[idx].0, floor)?;
                let order = &ambient.log()[n].splitting;
                if let Some(i) = order.iter().position(|s| *s == u) {
                    break (u.extend_zeros(i), floor + i);
                }
            }
            n += 1;
        };
        let xs: Vec<BitSeq> = frontier.iter().map(|(x, _)| x.clone()).collect();
        let lifted = leftmost_lift(ambient, &xs, m)?;
        nodes.extend(lifted.iter().cloned());
        for (slot, y) in frontier.iter_mut().zip(lifted) {
            slot.0 = y;
        }
        for (i, slot) in frontier.iter_mut().enumerate() {
            if i != idx {
                slot.0 = ambient.leftmost_extension(&slot.0, m + 1)?;
            }
        }
        frontier[idx] = (split_node.child(1), None);
        frontier.insert(idx, (split_node.child(0), None));
        for (x, _) in &frontier {
            nodes.insert(x.clone());
        }
        cur = m + 1;
        n += 1;
    }
    if spl.is_empty() {
        for (x, _) in &frontier {
            nodes.insert(ambient.leftmost_extension(x, top + 1)?);
        }
    }
    Tree::new(nodes)
}
