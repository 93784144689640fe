//! A desk-scale coloring probe.
//!
//! Copies of a pattern antichain among the coding nodes of a finite host are
//! colored, and subtrees of the host are searched for one on which few colors
//! survive. A subtree here is cut out by a set `X` of nodes at one length:
//! it is every initial segment of a member of `X`, and its coding nodes are
//! the coding nodes of the host it contains. A copy survives in the subtree
//! when all of its nodes are coding nodes of the subtree.
//!
//! Nothing here proves anything in general. The search is bounded and the report
//! only records what it saw.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use trifree::antichain::{strictly_similar, Antichain};
use trifree::criteria::check_splitting_criterion;
use trifree::{BitSeq, CodingTree, Error, NodeSet, Result, Tree};

/// Index sets of host coding nodes forming an antichain strictly similar to
/// `pattern`.
pub fn copies(host: &CodingTree, pattern: &Antichain) -> Vec<Vec<usize>> {
    let coding = host.coding();
    (0..coding.len())
        .combinations(pattern.len())
        .filter(|idx| {
            Antichain::new(idx.iter().map(|&i| coding[i].clone()))
                .is_ok_and(|z| strictly_similar(pattern, &z))
        })
        .collect()
}

/// The coloring of coding nodes of a strong triangle-free tree in which
/// every coding node extending `0^{|c|}⌢1` gets the color opposite to `c`.
///
/// Colors are 0 and 1, and `c_0 = ⟨1⟩` gets 0. Each coding node other than
/// `c_0` is colored from the coding node whose length is the position of
/// its first 1.
pub fn bad_coloring(coding: &[BitSeq]) -> Result<Vec<usize>> {
    let mut colors: Vec<usize> = Vec::with_capacity(coding.len());
    for c in coding {
        let Some(&first) = c.ones().first() else {
            return Err(Error::Precondition(format!("coding node {c} has no 1")));
        };
        let color = match first as usize {
            0 => 0,
            i => {
                let k = coding
                    .iter()
                    .position(|d| d.len() == i)
                    .ok_or_else(|| Error::Precondition(format!("no coding node of length {i}")))?;
                if k >= colors.len() {
                    return Err(Error::Precondition(format!("{c} is colored from a later coding node")));
                }
                1 - colors[k]
            }
        };
        colors.push(color);
    }
    Ok(colors)
}

/// The subtree cut out by `top`, all of one length, with the host nodes one
/// level further up as extension data.
pub fn subtree_from_top(host: &CodingTree, top: &[BitSeq]) -> Result<CodingTree> {
    let Some(len) = top.first().map(BitSeq::len) else {
        return Err(Error::Precondition("a subtree needs at least one top node".into()));
    };
    let mut nodes = NodeSet::new();
    for t in top {
        if t.len() != len {
            return Err(Error::Precondition(format!("{t} is not of length {len}")));
        }
        nodes.extend((0..=len).map(|k| t.restrict(k)));
    }
    let coding: Vec<BitSeq> = host.coding().iter().filter(|c| nodes.contains(c)).cloned().collect();
    let above: Vec<BitSeq> = if len == host.tree().height() {
        host.extension().to_vec()
    } else {
        host.tree().level(len + 1).cloned().collect()
    };
    let ext = above.into_iter().filter(|e| nodes.contains(&e.restrict(len))).collect();
    CodingTree::new(Tree::from_nodes_unchecked(nodes), coding)?.with_extension(ext)
}

/// The largest `m` such that every node of `t` of length at most `m`
/// extends to a coding node of `t`.
pub fn density_depth(t: &CodingTree) -> usize {
    let mut m = 0;
    while m < t.tree().height() && t.tree().level(m + 1).all(|u| t.coding().iter().any(|c| u.is_prefix_of(c))) {
        m += 1;
    }
    m
}

/// Subtree rule for strong triangle-free hosts, keeping the clauses of a
/// strong triangle-free tree that do not pin down lengths: empty stem, the
/// all-zero node at every coding length, the Splitting Criterion, and
/// coding nodes dense up to the depth the host itself reaches. At least two
/// coding nodes are required, since one node says nothing about density.
pub fn strong_tf_rule(host: &CodingTree) -> impl FnMut(&CodingTree) -> bool {
    let m = density_depth(host);
    move |s: &CodingTree| {
        s.coding().len() >= 2
            && s.tree().stem().is_empty()
            && s.coding().iter().all(|c| s.tree().contains(&BitSeq::zeros(c.len())))
            && density_depth(s) >= m
            && check_splitting_criterion(s).passed()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub top: Vec<BitSeq>,
    pub coding: Vec<BitSeq>,
    pub copies: usize,
    pub colors_realized: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub exhaustive: bool,
    /// Subtrees visited that satisfied the rule and kept at least one copy.
    pub found: usize,
    /// How many of those realize each number of colors.
    pub by_colors: BTreeMap<usize, usize>,
    /// A subtree realizing the fewest colors.
    pub best: Option<Finding>,
}

/// Searches subtrees cut at length `len`. Up to `max_exhaustive` candidate
/// top nodes every nonempty subset is tried; beyond that a greedy descent
/// drops one top node at a time.
pub fn search_subtrees(
    host: &CodingTree,
    len: usize,
    copies: &[Vec<usize>],
    colors: &[usize],
    rule: &mut dyn FnMut(&CodingTree) -> bool,
    max_exhaustive: usize,
) -> Result<SearchReport> {
    let level: Vec<BitSeq> = host.tree().level(len).cloned().collect();
    if level.is_empty() {
        return Err(Error::Precondition(format!("host has no level {len}")));
    }
    let mut report = SearchReport {
        exhaustive: level.len() <= max_exhaustive,
        found: 0,
        by_colors: BTreeMap::new(),
        best: None,
    };
    let mut visit = |top: Vec<BitSeq>, report: &mut SearchReport| -> Result<Option<(bool, usize, usize)>> {
        let s = subtree_from_top(host, &top)?;
        let inside: Vec<bool> = host.coding().iter().map(|c| s.nodes().contains(c)).collect();
        let kept: Vec<usize> = (0..copies.len())
            .filter(|&k| copies[k].iter().all(|&i| inside[i]))
            .collect();
        if kept.is_empty() {
            return Ok(None);
        }
        let mut seen: Vec<usize> = kept.iter().map(|&k| colors[k]).collect();
        seen.sort_unstable();
        seen.dedup();
        let ok = rule(&s);
        if ok {
            report.found += 1;
            *report.by_colors.entry(seen.len()).or_default() += 1;
            if report.best.as_ref().map_or(true, |b| seen.len() < b.colors_realized) {
                report.best = Some(Finding {
                    top,
                    coding: s.coding().to_vec(),
                    copies: kept.len(),
                    colors_realized: seen.len(),
                });
            }
        }
        Ok(Some((ok, seen.len(), kept.len())))
    };

    if report.exhaustive {
        for mask in 1u64..1 << level.len() {
            let top = (0..level.len()).filter(|&i| mask >> i & 1 == 1).map(|i| level[i].clone()).collect();
            visit(top, &mut report)?;
        }
    } else {
        let mut current = level;
        visit(current.clone(), &mut report)?;
        while current.len() > 1 {
            let mut best: Option<((bool, usize, isize), usize)> = None;
            for drop in 0..current.len() {
                let mut top = current.clone();
                top.remove(drop);
                if let Some((ok, c, k)) = visit(top, &mut report)? {
                    let score = (!ok, c, -(k as isize));
                    if best.map_or(true, |(s, _)| score < s) {
                        best = Some((score, drop));
                    }
                }
            }
            let Some((_, drop)) = best else { break };
            current.remove(drop);
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColorReport {
    pub seed: u64,
    pub colors: usize,
    pub copies: usize,
    pub copies_per_color: Vec<usize>,
    pub colors_realized: usize,
    pub search: SearchReport,
}

/// Colors every copy of `pattern` in `host` at random from `seed` and
/// searches subtrees cut at the host's top level.
pub fn color_experiment(
    host: &CodingTree,
    pattern: &Antichain,
    colors: usize,
    seed: u64,
    rule: &mut dyn FnMut(&CodingTree) -> bool,
    max_exhaustive: usize,
) -> Result<ColorReport> {
    if colors == 0 {
        return Err(Error::Precondition("need at least one color".into()));
    }
    let found = copies(host, pattern);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let assigned: Vec<usize> = found.iter().map(|_| rng.gen_range(0..colors)).collect();
    report_for(host, &found, &assigned, colors, seed, rule, max_exhaustive)
}

/// Like [`color_experiment`], with a coloring supplied by the caller.
pub fn report_for(
    host: &CodingTree,
    copies: &[Vec<usize>],
    assigned: &[usize],
    colors: usize,
    seed: u64,
    rule: &mut dyn FnMut(&CodingTree) -> bool,
    max_exhaustive: usize,
) -> Result<ColorReport> {
    let mut per = vec![0; colors];
    for &c in assigned {
        per[c] += 1;
    }
    let search = search_subtrees(host, host.tree().height(), copies, assigned, rule, max_exhaustive)?;
    Ok(ColorReport {
        seed,
        colors,
        copies: copies.len(),
        colors_realized: per.iter().filter(|&&k| k > 0).count(),
        copies_per_color: per,
        search,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use trifree::bitseq::bs;
    use trifree::stf::build_strong_tf_tree;
    use trifree::RequirementSchedule;

    fn host(n: usize) -> CodingTree {
        build_strong_tf_tree(&RequirementSchedule::canonical(), n).unwrap()
    }

    fn single() -> Antichain {
        Antichain::new([bs("1")]).unwrap()
    }

    #[test]
    fn single_node_copies_are_the_coding_nodes() {
        let h = host(5);
        assert_eq!(copies(&h, &single()).len(), 5);
    }

    #[test]
    fn one_color_is_monochromatic() {
        let h = host(5);
        let r = color_experiment(&h, &single(), 1, 7, &mut strong_tf_rule(&h), 16).unwrap();
        assert_eq!(r.colors_realized, 1);
        assert!(r.search.by_colors.keys().all(|&k| k == 1));
    }

    #[test]
    fn constant_coloring_reduces_to_one_at_once() {
        let h = host(5);
        let found = copies(&h, &single());
        let zero = vec![0; found.len()];
        for seed in [0, 1, 99] {
            let r = report_for(&h, &found, &zero, 3, seed, &mut strong_tf_rule(&h), 16).unwrap();
            assert_eq!(r.search.best.unwrap().colors_realized, 1);
        }
    }

    #[test]
    fn same_seed_same_report() {
        let h = host(6);
        let a = color_experiment(&h, &single(), 2, 42, &mut |_| true, 0).unwrap();
        let b = color_experiment(&h, &single(), 2, 42, &mut |_| true, 0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bad_coloring_alternates_along_the_zero_branch() {
        let h = host(6);
        let colors = bad_coloring(h.coding()).unwrap();
        for (n, c) in h.coding().iter().enumerate() {
            let i = c.ones()[0] as usize;
            if i > 0 {
                assert_ne!(colors[n], colors[i - 1], "c_{n} = {c}");
            }
        }
        assert_eq!(colors[0], 0);
    }

    #[test]
    fn the_full_host_is_a_strong_tf_subtree() {
        let h = host(5);
        let top: Vec<BitSeq> = h.tree().level(5).cloned().collect();
        let s = subtree_from_top(&h, &top).unwrap();
        assert_eq!(s.coding(), h.coding());
        assert!(strong_tf_rule(&h)(&s));
        assert!(density_depth(&h) >= 1);
    }
}
