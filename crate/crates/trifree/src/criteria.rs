//! Structural validators for trees with coding nodes.
//!
//! Every check returns a [`Report`]: a pass/fail flag plus, on failure, the
//! first offending clause, level and nodes. Checks never panic on malformed
//! input; precondition failures are reported as violations of their own.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::bitseq::BitSeq;
use crate::coding::{has_parallel_ones, CodingTree};
use crate::error::{Error, Result};
use crate::schedule::RequirementSchedule;

/// The first offending spot found by a validator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Dotted clause identifier such as `poc.unwitnessed`.
    pub clause: String,
    pub level: Option<usize>,
    pub nodes: Vec<BitSeq>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub passed: bool,
    pub violation: Option<Violation>,
}

impl Report {
    pub(crate) fn from_outcome(check: &str, outcome: Outcome) -> Report {
        Report {
            check: check.to_string(),
            passed: outcome.is_ok(),
            violation: outcome.err(),
        }
    }

    pub fn passed(&self) -> bool {
        self.passed
    }
}

pub(crate) type Outcome = std::result::Result<(), Violation>;

pub(crate) fn violation(
    clause: &str,
    level: Option<usize>,
    nodes: Vec<BitSeq>,
    detail: impl Into<String>,
) -> Violation {
    Violation {
        clause: clause.to_string(),
        level,
        nodes,
        detail: detail.into(),
    }
}

fn fail(clause: &str, level: Option<usize>, nodes: Vec<BitSeq>, detail: impl Into<String>) -> Outcome {
    Err(violation(clause, level, nodes, detail))
}

/// Precomputed level structure of a coding tree.
pub(crate) struct View<'a> {
    pub ct: &'a CodingTree,
    pub lengths: Vec<usize>,
    /// Nodes of each level in lexicographic order, parallel to `lengths`.
    pub levels: Vec<Vec<&'a BitSeq>>,
    pub children: HashMap<&'a BitSeq, usize>,
    pub splitting: BTreeMap<usize, Vec<&'a BitSeq>>,
    pub terminal: Vec<&'a BitSeq>,
    pub coding_len: Vec<usize>,
    pub stem: BitSeq,
}

impl<'a> View<'a> {
    pub fn new(ct: &'a CodingTree) -> View<'a> {
        let mut lengths = Vec::new();
        let mut levels: Vec<Vec<&BitSeq>> = Vec::new();
        for t in ct.nodes() {
            if lengths.last() != Some(&t.len()) {
                lengths.push(t.len());
                levels.push(Vec::new());
            }
            levels.last_mut().expect("pushed above").push(t);
        }
        let mut children = HashMap::new();
        let mut splitting: BTreeMap<usize, Vec<&BitSeq>> = BTreeMap::new();
        let mut terminal = Vec::new();
        for idx in 0..levels.len() {
            let below = &levels[idx];
            if idx + 1 == levels.len() {
                terminal.extend(below.iter().copied());
                continue;
            }
            let len = lengths[idx];
            let mut counts: HashMap<BitSeq, usize> = HashMap::new();
            for u in &levels[idx + 1] {
                *counts.entry(u.restrict(len)).or_default() += 1;
            }
            for &t in below {
                let c = counts.get(t).copied().unwrap_or(0);
                children.insert(t, c);
                if c == 0 {
                    terminal.push(t);
                }
                if c >= 2 {
                    splitting.entry(len).or_default().push(t);
                }
            }
        }
        View {
            ct,
            lengths,
            levels,
            children,
            splitting,
            terminal,
            coding_len: ct.coding_lengths(),
            stem: ct.tree().stem(),
        }
    }

    pub fn top(&self) -> usize {
        self.lengths.last().copied().unwrap_or(0)
    }

    pub fn level_index(&self, len: usize) -> Option<usize> {
        self.lengths.binary_search(&len).ok()
    }

    pub fn coding_at(&self, len: usize) -> Option<usize> {
        self.coding_len.binary_search(&len).ok()
    }

    pub fn child_count(&self, t: &BitSeq) -> usize {
        self.children.get(t).copied().unwrap_or(0)
    }


    /// Least critical length at or above `len`.
    pub fn next_critical_at_or_above(&self, len: usize) -> Option<usize> {
        let s = self.splitting.range(len..).next().map(|(&l, _)| l);
        let c = self.coding_len.iter().copied().find(|&l| l >= len);
        match (s, c) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Members of level `idx` extending `u`. They form a contiguous block of
    /// the lex-sorted level.
    pub fn extensions_at(&self, idx: usize, u: &BitSeq) -> &[&'a BitSeq] {
        let level = &self.levels[idx];
        let leftmost = u.extend_zeros(self.lengths[idx].saturating_sub(u.len()));
        let start = level.partition_point(|v| **v < leftmost);
        let end = start + level[start..].iter().take_while(|v| u.is_prefix_of(v)).count();
        &level[start..end]
    }

    /// Immediate extensions of `u` in `T̂`, when the tree (or its attached
    /// extension data) determines them.
    pub fn immediate_ext(&self, u: &BitSeq) -> Option<Vec<BitSeq>> {
        let len = u.len();
        if len < self.top() {
            let idx = self.lengths.partition_point(|&l| l <= len);
            let set: BTreeSet<BitSeq> = self
                .extensions_at(idx, u)
                .iter()
                .map(|v| v.restrict(len + 1))
                .collect();
            return Some(set.into_iter().collect());
        }
        let ext: Vec<BitSeq> = self
            .ct
            .extension()
            .iter()
            .filter(|e| u.is_prefix_of(e))
            .cloned()
            .collect();
        (!ext.is_empty()).then_some(ext)
    }

    /// The passing number of `u`'s unique immediate extension at `|u|`.
    pub fn ext_bit(&self, u: &BitSeq) -> Option<u8> {
        match self.immediate_ext(u) {
            Some(v) if v.len() == 1 => v[0].get(u.len()),
            _ => None,
        }
    }

    /// The level of `T̂` at `len`, using extension data one past the top.
    pub fn hat_level(&self, len: usize) -> Vec<BitSeq> {
        if len == self.top() + 1 && !self.ct.extension().is_empty() {
            let set: BTreeSet<BitSeq> = self.ct.extension().iter().cloned().collect();
            return set.into_iter().collect();
        }
        self.ct.tree().hat_level(len)
    }

    /// Nodes that carry every bit of the tree: terminal nodes plus extension data.
    pub fn leaves(&self) -> impl Iterator<Item = &BitSeq> {
        self.terminal.iter().copied().chain(self.ct.extension().iter())
    }
}

/// Triangle-Free Criterion: no node passes two coding nodes with 1 when the
/// later of the two has passing number 1 at the earlier.
pub fn check_tfc(t: &CodingTree) -> Report {
    Report::from_outcome("tfc", tfc_outcome(&View::new(t)))
}

fn tfc_outcome(v: &View) -> Outcome {
    let coding = v.ct.coding();
    let pos: HashMap<usize, usize> = v.coding_len.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    for u in v.leaves() {
        let hit: Vec<usize> = u
            .ones()
            .iter()
            .filter_map(|&p| pos.get(&(p as usize)).copied())
            .collect();
        for (a, &n) in hit.iter().enumerate() {
            for &i in &hit[..a] {
                if coding[n].get(v.coding_len[i]) == Some(1) {
                    return fail(
                        "tfc",
                        Some(v.coding_len[n]),
                        vec![u.clone(), coding[i].clone(), coding[n].clone()],
                        format!("node passes c_{i} and c_{n} with 1 while c_{n} passes c_{i} with 1"),
                    );
                }
            }
        }
    }
    Ok(())
}

/// Splitting Criterion for non-skew trees: above the stem, nodes split only
/// at coding levels, and there a non-maximal node splits exactly when it has
/// no parallel 1's with the coding node.
pub fn check_splitting_criterion(t: &CodingTree) -> Report {
    Report::from_outcome("splitting", splitting_outcome(&View::new(t)))
}

fn splitting_outcome(v: &View) -> Outcome {
    for (&len, nodes) in &v.splitting {
        if len > v.stem.len() && v.coding_at(len).is_none() {
            return fail(
                "splitting.off-coding-level",
                Some(len),
                nodes.iter().map(|&s| s.clone()).collect(),
                "splitting above the stem away from a coding level",
            );
        }
    }
    for (n, c) in v.ct.coding().iter().enumerate() {
        let Some(idx) = v.level_index(c.len()) else { continue };
        if idx + 1 == v.levels.len() {
            continue;
        }
        for &u in &v.levels[idx] {
            let kids = v.child_count(u);
            if kids == 0 {
                continue;
            }
            let should = !has_parallel_ones(u, c);
            if should != (kids >= 2) {
                return fail(
                    "splitting",
                    Some(c.len()),
                    vec![u.clone(), c.clone()],
                    format!(
                        "node {} at the level of c_{n}, expected it to {}",
                        if kids >= 2 { "splits" } else { "does not split" },
                        if should { "split" } else { "not split" }
                    ),
                );
            }
        }
    }
    Ok(())
}

/// Strong triangle-free tree: `l_n = n+1`, maximal nodes at `l_{N-1}`, empty
/// stem, `c_0 = ⟨1⟩` and `c_n(l_{n-1}) = 1`, all-zero nodes at every coding
/// length, and the Splitting Criterion.
pub fn check_strong_tf_tree(t: &CodingTree) -> Report {
    Report::from_outcome("strong-tf-tree", stf_outcome(&View::new(t)))
}

fn stf_outcome(v: &View) -> Outcome {
    let coding = v.ct.coding();
    for (n, c) in coding.iter().enumerate() {
        if c.len() != n + 1 {
            return fail("stf.lengths", Some(c.len()), vec![c.clone()], format!("c_{n} should have length {}", n + 1));
        }
    }
    let want_top = coding.last().map_or(0, BitSeq::len);
    if let Some(u) = v.terminal.iter().find(|u| u.len() != want_top) {
        return fail("stf.maximal", Some(u.len()), vec![(*u).clone()], format!("maximal nodes must have length {want_top}"));
    }
    if !v.stem.is_empty() {
        return fail("stf.stem", Some(v.stem.len()), vec![v.stem.clone()], "stem must be empty");
    }
    if let Some(c0) = coding.first() {
        if c0.to_string() != "1" {
            return fail("stf.coding", Some(1), vec![c0.clone()], "c_0 must be ⟨1⟩");
        }
    }
    for n in 1..coding.len() {
        if coding[n].get(coding[n - 1].len()) != Some(1) {
            return fail("stf.coding", Some(coding[n - 1].len()), vec![coding[n].clone()], format!("c_{n} must pass c_{} with 1", n - 1));
        }
    }
    for c in coding {
        if !v.ct.tree().contains(&BitSeq::zeros(c.len())) {
            return fail("stf.zeros", Some(c.len()), vec![], "all-zero node missing");
        }
    }
    splitting_outcome(v)
}

/// Critical nodes listed by length, with the positions of the coding nodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkewProfile {
    pub critical_nodes: Vec<BitSeq>,
    /// `coding_indices[n] = m_n` with `critical_nodes[m_n] = c_n`.
    pub coding_indices: Vec<usize>,
}

pub fn skew_profile(t: &CodingTree) -> std::result::Result<SkewProfile, Violation> {
    profile_of(&View::new(t))
}

fn profile_of(v: &View) -> std::result::Result<SkewProfile, Violation> {
    let mut critical_nodes = Vec::new();
    let mut coding_indices = Vec::new();
    for (idx, &len) in v.lengths.iter().enumerate() {
        let mut here: Vec<BitSeq> = v.splitting.get(&len).map_or(Vec::new(), |s| s.iter().map(|&x| x.clone()).collect());
        if let Some(n) = v.coding_at(len) {
            let c = &v.ct.coding()[n];
            if !here.contains(c) {
                here.push(c.clone());
            }
            coding_indices.push(critical_nodes.len());
        }
        let is_top = idx + 1 == v.lengths.len();
        if here.len() > 1 || (here.is_empty() && !is_top) {
            return Err(violation(
                "skew.critical-count",
                Some(len),
                here,
                "each level below the top needs exactly one critical node",
            ));
        }
        critical_nodes.extend(here);
    }
    for u in v.leaves() {
        for &p in u.ones() {
            if let Some(s) = v.splitting.get(&(p as usize)) {
                if !s.iter().any(|s| s.is_prefix_of(u)) {
                    return Err(violation(
                        "skew.passing",
                        Some(p as usize),
                        vec![u.clone(), s[0].clone()],
                        "node passes a splitting node it does not extend with passing number 1",
                    ));
                }
            }
        }
    }
    Ok(SkewProfile {
        critical_nodes,
        coding_indices,
    })
}

/// One critical node per level, and nodes pass splitting nodes they do not
/// extend with 0.
pub fn check_strongly_skew(t: &CodingTree) -> Report {
    Report::from_outcome("strongly-skew", skew_profile(t).map(|_| ()))
}

/// Lower end of the `n`-th interval: `l_{n-1}`, or the stem length for `n = 0`.
fn interval_floor(v: &View, n: usize) -> usize {
    if n == 0 {
        v.stem.len()
    } else {
        v.coding_len[n - 1]
    }
}

/// Splitting nodes with length strictly inside the `n`-th interval.
fn interval_splitting<'v>(v: &'v View, n: usize) -> Vec<&'v BitSeq> {
    let lo = interval_floor(v, n);
    let hi = v.coding_len[n];
    v.splitting
        .range(lo + 1..hi)
        .flat_map(|(_, s)| s.iter().copied())
        .collect()
}

fn spl_of(v: &View, n: usize) -> Vec<BitSeq> {
    let lo = interval_floor(v, n);
    let set: BTreeSet<BitSeq> = interval_splitting(v, n).into_iter().map(|d| d.restrict(lo + 1)).collect();
    set.into_iter().collect()
}

/// `Spl(T, n)`: the nodes of `T̂` at the bottom of the `n`-th interval that
/// extend to a splitting node inside it.
pub fn spl_set(t: &CodingTree, n: usize) -> Result<Vec<BitSeq>> {
    let v = View::new(t);
    profile_of(&v).map_err(|e| Error::Precondition(format!("tree is not strongly skew: {}", e.detail)))?;
    if n >= v.coding_len.len() {
        return Err(Error::Index {
            index: n,
            available: v.coding_len.len(),
        });
    }
    Ok(spl_of(&v, n))
}

/// The longest splitting node that is a proper initial segment of `s`.
pub fn splitpred(t: &CodingTree, s: &BitSeq) -> Result<BitSeq> {
    let v = View::new(t);
    v.splitting
        .range(..s.len())
        .rev()
        .flat_map(|(_, nodes)| nodes.iter())
        .find(|d| d.is_prefix_of(s))
        .map(|&d| d.clone())
        .ok_or_else(|| Error::NoSplitPredecessor(s.clone()))
}

/// Common 1-positions of all nodes below `limit`.
fn common_ones_below(nodes: &[&BitSeq], limit: usize) -> bool {
    let Some(first) = nodes.first() else { return false };
    first
        .ones()
        .iter()
        .take_while(|&&p| (p as usize) < limit)
        .any(|&p| nodes[1..].iter().all(|u| u.get(p as usize) == Some(1)))
}

/// Groups the nodes of level `idx` by the positions in `[from, len)` where
/// they carry a 1.
fn ones_by_position<'v>(v: &'v View, idx: usize, from: usize) -> BTreeMap<usize, Vec<&'v BitSeq>> {
    let mut by: BTreeMap<usize, Vec<&BitSeq>> = BTreeMap::new();
    for &u in &v.levels[idx] {
        let start = u.ones().partition_point(|&p| (p as usize) < from);
        for &p in &u.ones()[start..] {
            by.entry(p as usize).or_default().push(u);
        }
    }
    by
}

/// Parallel 1's Criterion: every new set of parallel 1's is witnessed by a
/// coding node before any other critical node appears.
///
/// Nodes at a coding level are read through their immediate extensions, so a
/// coding node can witness sets sitting directly below its own level. When
/// the top level is a coding level without attached extension data, the
/// witness check at that level is skipped.
pub fn check_parallel_ones_criterion(t: &CodingTree) -> Report {
    Report::from_outcome("poc", poc_outcome(&View::new(t)))
}

pub(crate) fn poc_outcome(v: &View) -> Outcome {
    if let Err(e) = profile_of(v) {
        return fail("poc.precondition", e.level, e.nodes, format!("tree is not strongly skew: {}", e.detail));
    }
    for idx in 0..v.levels.len() {
        let len = v.lengths[idx];
        let prev = if idx == 0 { 0 } else { v.lengths[idx - 1] };
        let coding_here = v.coding_at(len).is_some();
        for (l, ys) in ones_by_position(v, idx, prev) {
            if ys.len() < 2 || v.coding_at(l).is_some() || common_ones_below(&ys, l) {
                continue;
            }
            if !coding_here {
                return fail(
                    "poc.unwitnessed",
                    Some(l),
                    ys.iter().map(|&u| u.clone()).collect(),
                    format!("new parallel 1's with no coding node before the next critical level {len}"),
                );
            }
            for &y in &ys {
                if v.ext_bit(y) == Some(0) {
                    return fail(
                        "poc.unwitnessed",
                        Some(l),
                        ys.iter().map(|&u| u.clone()).collect(),
                        format!("coding node at {len} does not witness the set: {y} passes it with 0"),
                    );
                }
            }
        }
    }
    Ok(())
}

/// Strong coding tree clauses for a finite tree.
///
/// With `depth_truncated`, density is read as: no node below the last coding
/// level is terminal. Without it, every node must extend to a coding node.
pub fn check_strong_coding_tree(t: &CodingTree, depth_truncated: bool) -> Report {
    Report::from_outcome("strong-coding-tree", sct_outcome(&View::new(t), depth_truncated))
}

fn sct_outcome(v: &View, truncated: bool) -> Outcome {
    profile_of(v)?;
    let coding = v.ct.coding();
    let n_coding = coding.len();
    for &len in &v.lengths {
        if !v.ct.tree().contains(&BitSeq::zeros(len)) {
            return fail("sct.zeros", Some(len), vec![], "all-zero node missing");
        }
    }
    if truncated {
        let last = v.coding_len.last().copied().unwrap_or(0);
        if let Some(u) = v.terminal.iter().find(|u| u.len() < last) {
            return fail("sct.density", Some(u.len()), vec![(*u).clone()], "terminal node below the last coding level");
        }
    } else if let Some(u) = v.ct.nodes().iter().find(|u| !coding.iter().any(|c| u.is_prefix_of(c))) {
        return fail("sct.density", Some(u.len()), vec![u.clone()], "node extends to no coding node");
    }
    for n in 1..n_coding {
        if coding[n].get(v.coding_len[n - 1]) != Some(1) {
            return fail("sct.passing", Some(v.coding_len[n - 1]), vec![coding[n].clone()], format!("c_{n} must pass c_{} with 1", n - 1));
        }
    }
    poc_outcome(v)?;
    if n_coding == 0 {
        return Ok(());
    }
    let c0 = &coding[0];
    if !v.stem.child(1).is_prefix_of(c0) || v.child_count(c0) >= 2 {
        return fail("sct.first-coding", Some(c0.len()), vec![c0.clone()], "c_0 must extend stem⌢1 and must not split");
    }
    for n in 0..n_coding {
        let lo = interval_floor(v, n);
        let ln = v.coding_len[n];
        let hat = v.hat_level(lo + 1);
        let spl = spl_of(v, n);
        for s in &hat {
            let in_spl = spl.contains(s);
            let expect = if n == 0 {
                *s == v.stem.child(0)
            } else {
                !has_parallel_ones(s, &coding[n].restrict(lo + 1))
            };
            if in_spl != expect {
                return fail(
                    "sct.splitting",
                    Some(lo + 1),
                    vec![s.clone(), coding[n].clone()],
                    format!("membership in Spl(T,{n}) disagrees with the splitting criterion"),
                );
            }
        }
        let idx = v.level_index(ln).expect("coding node is a member");
        let check_one = |prefix: &BitSeq, bit: u8, clause: &str| -> Outcome {
            let above = v.extensions_at(idx, prefix);
            if above.len() != 1 {
                return fail(clause, Some(ln), vec![prefix.clone()], format!("{} extensions at length {ln}, expected one", above.len()));
            }
            let u = above[0];
            if let Some(ext) = v.immediate_ext(u) {
                if ext != vec![u.child(bit)] {
                    return fail(clause, Some(ln), vec![u.clone()], format!("immediate extension should be {}⌢{bit}", u));
                }
            }
            Ok(())
        };
        for s in &hat {
            if spl.contains(s) {
                let d = interval_splitting(v, n)
                    .into_iter()
                    .find(|d| s.is_prefix_of(d))
                    .expect("member of Spl extends a splitting node");
                for bit in 0..2u8 {
                    check_one(&d.child(bit), bit, "sct.split-branch")?;
                }
            } else {
                check_one(s, 0, "sct.non-split")?;
            }
        }
    }
    Ok(())
}

/// Finite form of the universality requirement: the Triangle-Free Criterion
/// plus, for each resolvable schedule entry that codes no edge, some coding
/// node `c_n`, `n ≥ q`, passing `c_m` with 1 exactly for `m ∈ F_q`, `m < q`.
///
/// Entry `F_q` with `q = 3i+j` is resolvable once the tree has coding node
/// `max(4i+j, q+1)`. Builders serve it with `c_{4i+j}`, which only controls
/// passing numbers below `l_{4i+j-1}`, hence the `q+1` for small `i`.
pub fn check_a3_tree_finite(t: &CodingTree, schedule: &RequirementSchedule) -> Result<Report> {
    let n_coding = t.coding().len();
    let resolvable = |q: usize| (4 * (q / 3) + q % 3).max(q + 1) < n_coding;
    let entries = (0..).take_while(|&q| resolvable(q)).count();
    schedule.validate(entries)?;
    let v = View::new(t);
    if let Err(e) = tfc_outcome(&v) {
        return Ok(Report::from_outcome("a3-tree", Err(e)));
    }
    let coding = t.coding();
    for q in 0..entries {
        let f = schedule.get(q);
        if f.iter().any(|&k| k >= n_coding) {
            continue;
        }
        let codes_edge = f.iter().enumerate().any(|(a, &j)| {
            f[a + 1..].iter().any(|&k| coding[k].get(coding[j].len()) == Some(1))
        });
        if codes_edge {
            continue;
        }
        let realized = (q..n_coding).any(|n| {
            (0..q).all(|m| (coding[n].get(coding[m].len()) == Some(1)) == f.contains(&m))
        });
        if !realized {
            return Ok(Report::from_outcome(
                "a3-tree",
                fail("a3.requirement", None, vec![], format!("no coding node realizes F_{q} = {f:?}")),
            ));
        }
    }
    Ok(Report::from_outcome("a3-tree", Ok(())))
}

/// A position `l` where at least two distinct nodes first carry a common 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewParallelOnes {
    pub level: usize,
    /// Restrictions to `level + 1` of the nodes with a 1 at `level`.
    pub nodes: Vec<BitSeq>,
}

/// Minimal levels of new sets of parallel 1's: at least two distinct nodes
/// have a 1 at `l`, and no earlier position has a 1 in all of them.
pub fn minimal_parallel_levels(t: &CodingTree) -> Vec<NewParallelOnes> {
    minimal_levels_of(&View::new(t))
}

fn minimal_levels_of(v: &View) -> Vec<NewParallelOnes> {
    let mut out = Vec::new();
    for idx in 0..v.levels.len() {
        let prev = if idx == 0 { 0 } else { v.lengths[idx - 1] };
        for (l, ys) in ones_by_position(v, idx, prev) {
            if ys.len() >= 2 && !common_ones_below(&ys, l) {
                out.push(NewParallelOnes {
                    level: l,
                    nodes: ys.iter().map(|u| u.restrict(l + 1)).collect(),
                });
            }
        }
    }
    out
}

/// Nodes of `T̂` one past `len` that have a 1 at `len`, restricted to `len + 1`.
fn ones_at(v: &View, len: usize) -> BTreeSet<BitSeq> {
    v.hat_level(len + 1).into_iter().filter(|u| u.get(len) == Some(1)).collect()
}

/// Strict Parallel 1's Criterion: the POC, and each minimal level of new
/// parallel 1's is followed by a coding node before any other critical or
/// terminal node, carrying exactly the same set.
pub fn check_spoc(t: &CodingTree) -> Report {
    Report::from_outcome("spoc", spoc_outcome(&View::new(t)))
}

fn spoc_outcome(v: &View) -> Outcome {
    poc_outcome(v)?;
    for m in minimal_levels_of(v) {
        let l = m.level;
        let Some(cl) = v.next_critical_at_or_above(l) else {
            return fail("spoc.no-critical", Some(l), m.nodes, "no critical node above a new set of parallel 1's");
        };
        if v.coding_at(cl).is_none() {
            return fail("spoc.critical-not-coding", Some(l), m.nodes, format!("first critical node at or above is a splitting node at {cl}"));
        }
        if let Some(u) = v.terminal.iter().find(|u| u.len() >= l && u.len() < cl) {
            return fail("spoc.terminal", Some(l), vec![(*u).clone()], format!("terminal node inside [{l}, {cl})"));
        }
        let carried: BTreeSet<BitSeq> = ones_at(v, cl).iter().map(|u| u.restrict(l + 1)).collect();
        let here: BTreeSet<BitSeq> = m.nodes.iter().cloned().collect();
        if carried != here {
            return fail("spoc.set-changed", Some(l), m.nodes, format!("coding node at {cl} is passed with 1 by a different set"));
        }
    }
    Ok(())
}

/// Incremental new parallel 1's: whenever at least three nodes acquire a new
/// common 1 at `l`, every proper subset of size at least two has already been
/// the exact set of 1's at some position between the last critical node below
/// `l` and `l`.
pub fn check_incremental_parallel_ones(t: &CodingTree) -> Report {
    Report::from_outcome("incremental", incremental_outcome(&View::new(t)))
}

const MAX_SUBSET_BITS: usize = 20;

fn incremental_outcome(v: &View) -> Outcome {
    for m in minimal_levels_of(v) {
        let l = m.level;
        let k = m.nodes.len();
        if k < 3 {
            continue;
        }
        if k > MAX_SUBSET_BITS {
            return fail("incremental.too-wide", Some(l), m.nodes, "too many nodes to enumerate subsets");
        }
        let floor = v
            .next_critical_at_or_above(0)
            .map(|_| {
                let mut last = None;
                for (&sl, _) in v.splitting.range(..l) {
                    last = Some(sl);
                }
                for &cl in v.coding_len.iter().filter(|&&cl| cl < l) {
                    last = Some(last.map_or(cl, |x: usize| x.max(cl)));
                }
                last
            })
            .flatten();
        let start = floor.map_or(0, |f| f + 1);
        // Exact sets of 1's, as index masks into `m.nodes`, seen in (floor, l).
        let mut seen = BTreeSet::new();
        for p in start..l {
            let mut mask = 0usize;
            let mut others = false;
            for u in v.hat_level(p + 1).iter().filter(|u| u.get(p) == Some(1)) {
                match m.nodes.iter().position(|z| u.is_prefix_of(z)) {
                    Some(i) => mask |= 1 << i,
                    None => others = true,
                }
            }
            if !others && mask.count_ones() >= 2 {
                // Distinct restrictions: each index must come from its own node.
                let distinct: BTreeSet<BitSeq> = m
                    .nodes
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, z)| z.restrict(p + 1))
                    .collect();
                if distinct.len() == mask.count_ones() as usize {
                    seen.insert(mask);
                }
            }
        }
        let full = (1usize << k) - 1;
        for mask in 1..full {
            if mask.count_ones() >= 2 && !seen.contains(&mask) {
                let nodes = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| m.nodes[i].clone()).collect();
                return fail("incremental.missing-subset", Some(l), nodes, "proper subset never appeared as its own set of parallel 1's");
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitseq::bs;
    use crate::tree::NodeSet;

    fn ct(nodes: &[&str], coding: &[&str]) -> CodingTree {
        let set: NodeSet = nodes.iter().map(|s| bs(s)).collect();
        CodingTree::from_parts(set, coding.iter().map(|s| bs(s)).collect()).unwrap()
    }

    fn height_two() -> CodingTree {
        ct(&["", "0", "1", "00", "01", "10"], &["1", "01"])
    }

    #[test]
    fn height_two_is_strong_tf() {
        let t = height_two();
        assert!(check_strong_tf_tree(&t).passed());
        assert!(check_tfc(&t).passed());
    }

    #[test]
    fn relabelled_second_coding_node_fails() {
        let t = ct(&["", "0", "1", "00", "01", "10"], &["1", "10"]);
        let r = check_strong_tf_tree(&t);
        assert!(!r.passed());
        assert_eq!(r.violation.unwrap().clause, "stf.coding");
    }

    #[test]
    fn single_coding_node_passes_tfc() {
        assert!(check_tfc(&ct(&["", "1"], &["1"])).passed());
    }

    #[test]
    fn triangle_is_caught() {
        // c_1 passes c_0 with 1, c_2 passes both with 1.
        let t = ct(&["", "1", "11", "111"], &["1", "11", "111"]);
        assert!(!check_tfc(&t).passed());
    }

    #[test]
    fn splitting_coding_node_with_a_one_fails() {
        let t = ct(&["", "0", "1", "00", "01", "10", "11"], &["1"]);
        assert!(!check_splitting_criterion(&t).passed());
    }

    #[test]
    fn skew_needs_a_critical_node_on_every_lower_level() {
        assert!(check_strongly_skew(&ct(&["", "0", "1"], &[])).passed());
        assert!(!check_strongly_skew(&ct(&["", "0", "00"], &[])).passed());
    }

    #[test]
    fn strong_tf_tree_is_not_skew() {
        let t = ct(
            &["", "0", "1", "00", "01", "10", "000", "001", "010", "100", "101"],
            &["1", "01", "001"],
        );
        assert!(check_strong_tf_tree(&t).passed());
        assert!(!check_strongly_skew(&t).passed());
        assert!(!check_strong_coding_tree(&t, true).passed());
    }

    #[test]
    fn spoc_vacuous_without_parallel_ones() {
        let t = ct(&["", "0", "1"], &["1"]);
        assert!(minimal_parallel_levels(&t).is_empty());
        assert!(check_spoc(&t).passed());
    }

    #[test]
    fn poc_flags_splitting_before_witness() {
        // Two nodes first share a 1 at position 1, then a splitting node
        // appears at length 3 before any coding node.
        let t = ct(
            &["", "0", "1", "01", "11", "010", "110", "0100", "0101", "1100"],
            &[],
        );
        assert!(!check_parallel_ones_criterion(&t).passed());
    }
}
