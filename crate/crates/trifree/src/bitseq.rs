//! Finite binary sequences.
//!
//! A [`BitSeq`] is a node of the full binary tree `2^{<ω}`. Nodes that show up
//! in coding trees are long but sparse (a node only carries a `1` where it
//! takes the right branch of a split or passes a coding node with an edge),
//! so the sequence is stored as its length plus the sorted positions of its
//! `1` entries.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite 0/1 sequence.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitSeq {
    len: u32,
    ones: Vec<u32>,
}

impl BitSeq {
    /// The empty sequence.
    pub fn empty() -> Self {
        Self::default()
    }

    /// The all-zero sequence of length `len`.
    pub fn zeros(len: usize) -> Self {
        BitSeq {
            len: len as u32,
            ones: Vec::new(),
        }
    }

    /// Builds a sequence from explicit bits. Entries other than 0 and 1 are
    /// rejected.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut ones = Vec::new();
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => ones.push(i as u32),
                other => return Err(Error::Parse(format!("bit value {other} is not 0 or 1"))),
            }
        }
        Ok(BitSeq {
            len: bits.len() as u32,
            ones,
        })
    }

    /// Builds a sequence of length `len` with a `1` at each listed position.
    pub fn from_ones(len: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut ones: Vec<u32> = positions.into_iter().map(|p| p as u32).collect();
        ones.sort_unstable();
        ones.dedup();
        assert!(
            ones.last().map_or(true, |&p| (p as usize) < len),
            "1-position out of range for length {len}"
        );
        BitSeq {
            len: len as u32,
            ones,
        }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Positions holding a `1`, ascending.
    pub fn ones(&self) -> &[u32] {
        &self.ones
    }

    pub fn count_ones(&self) -> usize {
        self.ones.len()
    }

    pub fn is_all_zero(&self) -> bool {
        self.ones.is_empty()
    }

    /// The entry at position `i`, or `None` past the end.
    pub fn get(&self, i: usize) -> Option<u8> {
        if i >= self.len() {
            return None;
        }
        Some(self.ones.binary_search(&(i as u32)).is_ok() as u8)
    }

    /// The entry at position `i`. Panics past the end.
    pub fn bit(&self, i: usize) -> u8 {
        self.get(i)
            .unwrap_or_else(|| panic!("position {i} out of range for length {}", self.len))
    }

    pub fn bits(&self) -> Vec<u8> {
        let mut v = vec![0u8; self.len()];
        for &p in &self.ones {
            v[p as usize] = 1;
        }
        v
    }

    /// `s↾n`, the initial segment of length `n` (clamped to `|s|`).
    pub fn restrict(&self, n: usize) -> BitSeq {
        let n = n.min(self.len());
        let cut = self.ones.partition_point(|&p| (p as usize) < n);
        BitSeq {
            len: n as u32,
            ones: self.ones[..cut].to_vec(),
        }
    }

    /// `s⌢b`.
    pub fn push(&mut self, b: u8) {
        debug_assert!(b <= 1);
        if b == 1 {
            self.ones.push(self.len);
        }
        self.len += 1;
    }

    pub fn child(&self, b: u8) -> BitSeq {
        let mut c = self.clone();
        c.push(b);
        c
    }

    /// `s⌢0^k`.
    pub fn extend_zeros(&self, k: usize) -> BitSeq {
        BitSeq {
            len: self.len + k as u32,
            ones: self.ones.clone(),
        }
    }

    /// `s⌢t`.
    pub fn concat(&self, t: &BitSeq) -> BitSeq {
        let mut ones = self.ones.clone();
        ones.extend(t.ones.iter().map(|&p| p + self.len));
        BitSeq {
            len: self.len + t.len,
            ones,
        }
    }

    /// True when `self ⊆ other`, i.e. `self` is an initial segment of `other`.
    pub fn is_prefix_of(&self, other: &BitSeq) -> bool {
        if self.len > other.len {
            return false;
        }
        let cut = other.ones.partition_point(|&p| p < self.len);
        other.ones[..cut] == self.ones[..]
    }

    /// True when one of the two extends the other.
    pub fn comparable(&self, other: &BitSeq) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// The first position where the two sequences differ, if they differ
    /// inside their common length.
    fn first_difference(&self, other: &BitSeq) -> Option<usize> {
        let common = self.len.min(other.len);
        let mut i = 0;
        while i < self.ones.len() && i < other.ones.len() && self.ones[i] == other.ones[i] {
            i += 1;
        }
        let a = self.ones.get(i).copied().unwrap_or(u32::MAX);
        let b = other.ones.get(i).copied().unwrap_or(u32::MAX);
        let d = a.min(b);
        (d < common).then_some(d as usize)
    }

    /// Length of the longest common initial segment.
    pub fn meet_len(&self, other: &BitSeq) -> usize {
        self.first_difference(other)
            .unwrap_or_else(|| self.len().min(other.len()))
    }
}

/// The longest common initial segment `s ∧ t`.
pub fn meet(s: &BitSeq, t: &BitSeq) -> BitSeq {
    s.restrict(s.meet_len(t))
}

/// The lexicographic order on incomparable nodes: `s <lex t` iff `s` takes the
/// `0` branch and `t` the `1` branch at their meet. Comparable pairs have no
/// defined order and are reported as an error.
pub fn lex_less(s: &BitSeq, t: &BitSeq) -> Result<bool> {
    match s.first_difference(t) {
        Some(d) => Ok(s.bit(d) == 0),
        None => Err(Error::Comparable(s.clone(), t.clone())),
    }
}

/// Passing number of `t` at `s`: the entry `t(|s|)`.
pub fn passing_number(t: &BitSeq, s: &BitSeq) -> Result<u8> {
    t.get(s.len()).ok_or(Error::Length {
        needed: s.len() + 1,
        got: t.len(),
    })
}

/// Total order by bits, reading a proper prefix as smaller than its
/// extensions. On a level set this is the usual lexicographic order.
pub fn lex_cmp(s: &BitSeq, t: &BitSeq) -> Ordering {
    match s.first_difference(t) {
        Some(d) => s.bit(d).cmp(&t.bit(d)),
        None => s.len.cmp(&t.len),
    }
}

/// Nodes are ordered by length first, then lexicographically, so that a
/// `BTreeSet<BitSeq>` iterates level by level from left to right.
impl Ord for BitSeq {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| lex_cmp(self, other))
    }
}

impl PartialOrd for BitSeq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut next = self.ones.iter().peekable();
        for i in 0..self.len {
            if next.peek() == Some(&&i) {
                next.next();
                f.write_str("1")?;
            } else {
                f.write_str("0")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{self}⟩")
    }
}

impl FromStr for BitSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut ones = Vec::new();
        let mut len = 0u32;
        for ch in s.trim().chars() {
            match ch {
                '0' => {}
                '1' => ones.push(len),
                other => return Err(Error::Parse(format!("unexpected character {other:?} in bit string"))),
            }
            len += 1;
        }
        Ok(BitSeq { len, ones })
    }
}

impl Serialize for BitSeq {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitSeq {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for parsing a bit string in tests and examples.
///
/// ```
/// use trifree::bitseq::bs;
/// assert_eq!(bs("0110").to_string(), "0110");
/// ```
pub fn bs(s: &str) -> BitSeq {
    s.parse().expect("valid bit string")
}
