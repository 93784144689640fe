//! Requirement schedules `F_0, F_1, …`.
//!
//! A schedule lists finite sets of earlier coding-node indices. The builders
//! read `F_{3i+j}` when choosing coding node `4i+j` and try to realize it as
//! the neighbourhood of the new vertex among the old ones.
//!
//! The canonical schedule packs every finite set into the positions `3i+1`
//! with a Cantor-style sweep: write `i = w(w+1)/2 + r` with `r ≤ w` and take
//! `F_{3i+1}` to be the set whose bitmask is `k = w - r`. Each `k` occurs once
//! for every `w ≥ k`, so every finite set recurs infinitely often, and the
//! largest element of the set is at most `log2(k) < 3i - 1`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bitseq::BitSeq;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequirementSchedule {
    /// Explicit leading entries. Positions past the end fall back to the
    /// canonical schedule.
    explicit: Vec<Vec<usize>>,
}

/// `(k, r)` with `i = w(w+1)/2 + r`, `r ≤ w`, `k = w - r`.
fn cantor_unpair(i: usize) -> (usize, usize) {
    let mut w = (((8 * i + 1) as f64).sqrt() as usize).saturating_sub(1) / 2;
    // Correct for floating point at the boundaries.
    while (w + 1) * (w + 2) / 2 <= i {
        w += 1;
    }
    while w * (w + 1) / 2 > i {
        w -= 1;
    }
    let r = i - w * (w + 1) / 2;
    (w - r, r)
}

fn mask_to_set(mut k: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut bit = 0;
    while k > 0 {
        if k & 1 == 1 {
            out.push(bit);
        }
        k >>= 1;
        bit += 1;
    }
    out
}

fn canonical_entry(index: usize) -> Vec<usize> {
    if index % 3 != 1 {
        return Vec::new();
    }
    let (k, _) = cantor_unpair(index / 3);
    mask_to_set(k)
}

impl RequirementSchedule {
    pub fn canonical() -> Self {
        Self::default()
    }

    /// A schedule whose first entries are given explicitly. Every entry is
    /// checked against the schedule shape.
    pub fn with_prefix(entries: Vec<Vec<usize>>) -> Result<Self> {
        let mut explicit = entries;
        for e in &mut explicit {
            e.sort_unstable();
            e.dedup();
        }
        let s = RequirementSchedule { explicit };
        for i in 0..s.explicit.len() {
            s.check_entry(i)?;
        }
        Ok(s)
    }

    /// `F_index`, sorted ascending.
    pub fn get(&self, index: usize) -> Vec<usize> {
        match self.explicit.get(index) {
            Some(e) => e.clone(),
            None => canonical_entry(index),
        }
    }

    fn check_entry(&self, index: usize) -> Result<()> {
        let set = self.get(index);
        let fail = |reason| {
            Err(Error::Schedule {
                index,
                set: set.clone(),
                reason,
            })
        };
        if index % 3 != 1 && !set.is_empty() {
            return fail("entries at positions 3i and 3i+2 must be empty");
        }
        if set.last().is_some_and(|&m| m + 2 > index) {
            return fail("every member must be at most index - 2");
        }
        Ok(())
    }

    /// Checks the first `upto` entries.
    pub fn validate(&self, upto: usize) -> Result<()> {
        (0..upto).try_for_each(|i| self.check_entry(i))
    }

    /// Parses the line format: one entry per line, comma-separated indices,
    /// `-` for the empty set. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line == "-" {
                entries.push(Vec::new());
                continue;
            }
            let mut set = Vec::new();
            for tok in line.split(',') {
                let tok = tok.trim();
                let v = tok.parse::<usize>().map_err(|_| {
                    Error::Parse(format!("schedule line {}: bad index {tok:?}", lineno + 1))
                })?;
                set.push(v);
            }
            entries.push(set);
        }
        Self::with_prefix(entries)
    }

    /// Renders the first `upto` entries in the line format.
    pub fn to_text(&self, upto: usize) -> String {
        let mut out = String::new();
        for i in 0..upto {
            let set = self.get(i);
            if set.is_empty() {
                out.push_str("-\n");
            } else {
                let parts: Vec<String> = set.iter().map(usize::to_string).collect();
                let _ = writeln!(out, "{}", parts.join(","));
            }
        }
        out
    }
}

/// An enumeration `u_0, u_1, …` of all finite binary sequences with
/// `|u_i| ≤ i`, used to make coding nodes dense.
///
/// The canonical order is by length, then lexicographic: `⟨⟩, 0, 1, 00, …`.
/// An explicit prefix may replace the first entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeEnumeration {
    explicit: Vec<BitSeq>,
}

impl NodeEnumeration {
    pub fn canonical() -> Self {
        Self::default()
    }

    pub fn with_prefix(entries: Vec<BitSeq>) -> Result<Self> {
        if let Some((i, u)) = entries.iter().enumerate().find(|(i, u)| u.len() > *i) {
            return Err(Error::Precondition(format!(
                "enumeration entry u_{i} = {u} is longer than {i}"
            )));
        }
        Ok(NodeEnumeration { explicit: entries })
    }

    pub fn get(&self, i: usize) -> BitSeq {
        if let Some(u) = self.explicit.get(i) {
            return u.clone();
        }
        // Sequences of length `len` occupy indices 2^len - 1 .. 2^(len+1) - 1.
        let len = (usize::BITS - 1 - (i + 1).leading_zeros()) as usize;
        let rank = i + 1 - (1usize << len);
        BitSeq::from_ones(len, (0..len).filter(|&b| rank >> (len - 1 - b) & 1 == 1))
    }
}
