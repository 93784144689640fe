//! The strong coding tree `bT`, grown lazily.
//!
//! Only the levels just above each coding node, `Lev(l_n + 1)`, are stored.
//! Every other level is the set of restrictions of the next stored one,
//! because each node of `bT` has an extension at every greater length.
//!
//! One step of the construction takes `Lev(l_{n-1} + 1)`, listed in
//! decreasing lexicographic order as `s_0, …, s_{K-1}`, picks the node
//! `s_{k*}` that will become `c_n`, and lets `Spl` be the nodes with no
//! parallel 1's with `s_{k*}`. The `i`-th node of `Spl` splits at
//! `s⌢0^i`; its left branch continues with zeros and its right branch is
//! `s⌢0^i⌢1⌢0^{p-1}⌢1` with `p = |Spl| - i`. All other nodes continue with
//! zeros. Thus `l_n = l_{n-1} + |Spl| + 1` and `c_n = s_{k*}⌢0^{|Spl|}`.

use serde::Serialize;

use crate::bitseq::BitSeq;
use crate::coding::{has_parallel_ones, CodingTree};
use crate::error::{Error, Result};
use crate::schedule::{NodeEnumeration, RequirementSchedule};
use crate::stf::{coded_edge, realizes};
use crate::tree::{NodeSet, Tree};

/// Limits on how far the ambient tree may grow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest node length that may be created.
    pub max_length: usize,
    /// Largest number of nodes in a single level.
    pub max_width: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_length: 1 << 16,
            max_width: 1 << 16,
        }
    }
}

/// Which rule chose the node that becomes the next coding node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum CaseKind {
    /// `s_{K-2}`, the node `0^{l-1}⌢⟨1,1⟩`.
    Forced,
    /// Extension of the least node realizing the requirement `F_entry`.
    Requirement { entry: usize, set: Vec<usize> },
    /// `F_entry` codes an edge, so the forced choice is used.
    RequirementCodesEdge { entry: usize, set: Vec<usize> },
    /// Extension of `u_index` from the node enumeration.
    Density { index: usize, node: BitSeq },
    /// `u_index` is not low enough in the tree yet; forced choice used.
    DensityDeferred { index: usize, node: BitSeq },
}

/// One entry of the replayable build log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BuildStep {
    pub n: usize,
    pub case: CaseKind,
    /// Index of `s_{k*}` in decreasing lexicographic order.
    pub k_star: usize,
    pub chosen: BitSeq,
    /// `Spl(bT, n)` in decreasing lexicographic order.
    pub splitting: Vec<BitSeq>,
    pub coding_node: BitSeq,
    /// Width of `Lev(l_n + 1)`.
    pub width: usize,
}

/// A growing prefix of the strong coding tree `bT`.
#[derive(Clone, Debug)]
pub struct LazyAmbientTree {
    schedule: RequirementSchedule,
    node_enum: NodeEnumeration,
    budget: Budget,
    coding: Vec<BitSeq>,
    /// `tops[0] = Lev(1)`, `tops[n + 1] = Lev(l_n + 1)`, each sorted.
    tops: Vec<Vec<BitSeq>>,
    log: Vec<BuildStep>,
}

/// Builds `bT` through `n_coding` coding nodes.
///
/// ```
/// use trifree::ambient::build_strong_coding_tree;
/// use trifree::{NodeEnumeration, RequirementSchedule};
///
/// let mut t = build_strong_coding_tree(
///     &RequirementSchedule::canonical(),
///     &NodeEnumeration::canonical(),
///     2,
/// )
/// .unwrap();
/// let lev4: Vec<String> = t.level(4).unwrap().iter().map(|s| s.to_string()).collect();
/// assert_eq!(lev4, ["0000", "0110", "1000", "1001"]);
/// ```
pub fn build_strong_coding_tree(
    schedule: &RequirementSchedule,
    node_enum: &NodeEnumeration,
    n_coding: usize,
) -> Result<LazyAmbientTree> {
    let mut t = LazyAmbientTree::new(schedule.clone(), node_enum.clone());
    t.grow_to(n_coding)?;
    Ok(t)
}

impl LazyAmbientTree {
    pub fn new(schedule: RequirementSchedule, node_enum: NodeEnumeration) -> Self {
        LazyAmbientTree {
            schedule,
            node_enum,
            budget: Budget::default(),
            coding: Vec::new(),
            tops: vec![vec![BitSeq::from_ones(1, []), BitSeq::from_ones(1, [0])]],
            log: Vec::new(),
        }
    }

    /// The tree grown with the canonical schedule and enumeration.
    pub fn canonical() -> Self {
        Self::new(RequirementSchedule::canonical(), NodeEnumeration::canonical())
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn schedule(&self) -> &RequirementSchedule {
        &self.schedule
    }

    /// Coding nodes built so far.
    pub fn coding(&self) -> &[BitSeq] {
        &self.coding
    }

    pub fn coding_lengths(&self) -> Vec<usize> {
        self.coding.iter().map(BitSeq::len).collect()
    }

    pub fn log(&self) -> &[BuildStep] {
        &self.log
    }

    /// Largest length whose level is known without growing.
    pub fn known_height(&self) -> usize {
        self.tops.last().expect("at least Lev(1)")[0].len()
    }

    /// Grows until at least `n` coding nodes exist.
    pub fn grow_to(&mut self, n: usize) -> Result<()> {
        while self.coding.len() < n {
            self.step()?;
        }
        Ok(())
    }

    /// Grows until the level of length `len` is known.
    pub fn ensure_height(&mut self, len: usize) -> Result<()> {
        while self.known_height() < len {
            self.step()?;
        }
        Ok(())
    }

    /// The coding node `c_n`, growing as needed.
    pub fn coding_node(&mut self, n: usize) -> Result<&BitSeq> {
        self.grow_to(n + 1)?;
        Ok(&self.coding[n])
    }

    /// Index into `tops` of the least stored level at or above `len`.
    fn top_index(&self, len: usize) -> Option<usize> {
        let i = self.tops.partition_point(|lev| lev[0].len() < len);
        (i < self.tops.len()).then_some(i)
    }

    /// `Lev(len)` if already known, sorted.
    pub fn level_known(&self, len: usize) -> Option<Vec<BitSeq>> {
        if len == 0 {
            return Some(vec![BitSeq::empty()]);
        }
        let top = &self.tops[self.top_index(len)?];
        let mut out: Vec<BitSeq> = top.iter().map(|t| t.restrict(len)).collect();
        out.dedup();
        Some(out)
    }

    /// `Lev(len)`, sorted, growing as needed.
    pub fn level(&mut self, len: usize) -> Result<Vec<BitSeq>> {
        self.ensure_height(len)?;
        Ok(self.level_known(len).expect("height ensured"))
    }

    /// Nodes of `Lev(len)` extending `s`, sorted. `len` must be known.
    fn extensions_known(&self, s: &BitSeq, len: usize) -> Vec<BitSeq> {
        let Some(i) = self.top_index(len.max(1)) else { return Vec::new() };
        let top = &self.tops[i];
        let lo = s.extend_zeros(top[0].len().saturating_sub(s.len()));
        let start = top.partition_point(|t| *t < lo);
        let mut out: Vec<BitSeq> = top[start..]
            .iter()
            .take_while(|t| s.is_prefix_of(t))
            .map(|t| t.restrict(len))
            .collect();
        out.dedup();
        out
    }

    /// Nodes of `Lev(len)` extending `s`, sorted, growing as needed.
    pub fn extensions(&mut self, s: &BitSeq, len: usize) -> Result<Vec<BitSeq>> {
        self.ensure_height(len)?;
        Ok(self.extensions_known(s, len))
    }

    pub fn contains(&mut self, s: &BitSeq) -> Result<bool> {
        self.ensure_height(s.len())?;
        Ok(self.contains_known(s))
    }

    fn contains_known(&self, s: &BitSeq) -> bool {
        s.is_empty() || !self.extensions_known(s, s.len()).is_empty()
    }

    /// The lexicographically least node of length `target_len` extending `s`.
    pub fn leftmost_extension(&mut self, s: &BitSeq, target_len: usize) -> Result<BitSeq> {
        if target_len < s.len() {
            return Err(Error::Length {
                needed: s.len(),
                got: target_len,
            });
        }
        if !self.contains(s)? {
            return Err(Error::NotMember(s.clone()));
        }
        self.extensions(s, target_len)?
            .into_iter()
            .next()
            .ok_or_else(|| Error::NotMember(s.clone()))
    }

    /// The lexicographically greatest node of length `target_len` extending `s`.
    pub fn rightmost_extension(&mut self, s: &BitSeq, target_len: usize) -> Result<BitSeq> {
        if target_len < s.len() {
            return Err(Error::Length {
                needed: s.len(),
                got: target_len,
            });
        }
        self.extensions(s, target_len)?
            .pop()
            .ok_or_else(|| Error::NotMember(s.clone()))
    }

    /// Passing number of the unique immediate extension of `s` at `|s|`,
    /// or `None` when `s` splits.
    pub fn ext_bit(&mut self, s: &BitSeq) -> Result<Option<u8>> {
        let ext = self.extensions(s, s.len() + 1)?;
        match ext.as_slice() {
            [] => Err(Error::NotMember(s.clone())),
            [one] => Ok(one.get(s.len())),
            _ => Ok(None),
        }
    }

    /// Index `n` of the coding node of length `len`, if any.
    pub fn coding_index_at(&self, len: usize) -> Option<usize> {
        self.coding.binary_search_by_key(&len, BitSeq::len).ok()
    }

    /// All nodes of length at most `len` as a tree, with the coding nodes
    /// among them and `Lev(len + 1)` attached as extension data.
    pub fn truncated(&mut self, len: usize) -> Result<CodingTree> {
        self.ensure_height(len + 1)?;
        let mut nodes = NodeSet::new();
        for m in 0..=len {
            nodes.extend(self.level_known(m).expect("known"));
        }
        let coding = self.coding.iter().filter(|c| c.len() <= len).cloned().collect();
        let ext = self.level_known(len + 1).expect("known");
        CodingTree::new(Tree::from_nodes_unchecked(nodes), coding)?.with_extension(ext)
    }

    /// The finite strong coding tree `r_{m_n + 1}(bT)`: everything up to the
    /// level of `c_n`, with `Lev(l_n + 1)` as extension data.
    pub fn prefix(&mut self, n: usize) -> Result<CodingTree> {
        let len = self.coding_node(n)?.len();
        self.truncated(len)
    }

    fn step(&mut self) -> Result<()> {
        let n = self.coding.len();
        let base = &self.tops[n];
        let width = base.len();
        // s_k in decreasing order is base[width - 1 - k].
        let (case, chosen) = self.choose(n)?;
        let k_star = width - 1 - base.binary_search(&chosen).map_err(|_| Error::NotMember(chosen.clone()))?;
        let spl: Vec<BitSeq> = base
            .iter()
            .rev()
            .filter(|s| !has_parallel_ones(s, &chosen))
            .cloned()
            .collect();
        if spl.contains(&chosen) {
            return Err(Error::Precondition(format!(
                "node {chosen} chosen for c_{n} has no 1's and would split"
            )));
        }
        let q = spl.len();
        let l_prev = base[0].len() - 1;
        let l_n = l_prev + 1 + q;
        if l_n + 1 > self.budget.max_length || width + q > self.budget.max_width {
            return Err(Error::Budget(format!(
                "c_{n} needs length {} and a level of width {}",
                l_n + 1,
                width + q
            )));
        }
        let mut next: Vec<BitSeq> = Vec::with_capacity(width + q);
        for s in base {
            next.push(s.extend_zeros(q + 1));
        }
        for (i, s) in spl.iter().enumerate() {
            let p = q - i;
            next.push(s.extend_zeros(i).child(1).extend_zeros(p - 1).child(1));
        }
        next.sort();
        let coding_node = chosen.extend_zeros(q);
        self.log.push(BuildStep {
            n,
            case,
            k_star,
            chosen,
            splitting: spl,
            coding_node: coding_node.clone(),
            width: next.len(),
        });
        self.coding.push(coding_node);
        self.tops.push(next);
        Ok(())
    }

    /// `l_{n-1}` with `l_{-1} = 0`.
    fn l(&self, n: isize) -> usize {
        if n < 0 {
            0
        } else {
            self.coding[n as usize].len()
        }
    }

    fn choose(&self, n: usize) -> Result<(CaseKind, BitSeq)> {
        let base = &self.tops[n];
        let forced = base[1].clone();
        let (i, j) = (n / 4, n % 4);
        if j != 3 {
            self.schedule.validate(3 * i + j + 1)?;
        }
        if n <= 1 || j == 0 || j == 2 {
            return Ok((CaseKind::Forced, forced));
        }
        let n_i = n as isize;
        if j == 1 {
            let entry = 3 * i + 1;
            let set = self.schedule.get(entry);
            if coded_edge(&self.coding, &set).is_some() {
                return Ok((CaseKind::RequirementCodesEdge { entry, set }, forced));
            }
            let low = &self.tops[n - 2];
            let t = low
                .iter()
                .find(|t| realizes(t, &self.coding, &set))
                .ok_or_else(|| Error::NotFound(format!("no node of Lev(l_{} + 1) realizes F_{entry} = {set:?}", n - 3)))?;
            let t1 = self
                .extensions_known(t, self.l(n_i - 2) + 1)
                .into_iter()
                .next()
                .ok_or_else(|| Error::NotMember(t.clone()))?;
            let chosen = self
                .extensions_known(&t1, base[0].len())
                .pop()
                .ok_or_else(|| Error::NotFound(format!("{t1} has no extension in Lev(l_{} + 1)", n - 1)))?;
            return Ok((CaseKind::Requirement { entry, set }, chosen));
        }
        let u = self.node_enum.get(i);
        if u.len() > self.l(n_i - 3) + 1 || !self.contains_known(&u) {
            return Ok((CaseKind::DensityDeferred { index: i, node: u }, forced));
        }
        let u1 = self
            .extensions_known(&u, self.l(n_i - 2) + 1)
            .into_iter()
            .next()
            .ok_or_else(|| Error::NotMember(u.clone()))?;
        let pos = self.l(n_i - 1);
        let chosen = self
            .extensions_known(&u1, base[0].len())
            .into_iter()
            .find(|v| v.get(pos) == Some(1))
            .ok_or_else(|| Error::NotFound(format!("{u1} does not split in interval {}", n - 1)))?;
        Ok((CaseKind::Density { index: i, node: u }, chosen))
    }
}
