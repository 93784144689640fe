//! Stretching a tree by inserting blocks of bit positions.
//!
//! A stretch inserts, just before position `at` of every node, a block of
//! `width` new positions. The bits a node receives in that block depend only
//! on its restriction to `at`. Nodes shorter than `at` receive nothing.
//! Inserting the same bits into every extension of a node keeps meets,
//! lexicographic order and the relative order of lengths intact, which is
//! what the diagonal and incremental builders rely on.

use std::collections::HashMap;

use crate::bitseq::BitSeq;

#[derive(Clone, Debug)]
pub(crate) struct Slot {
    /// Original position before which the block goes.
    pub at: usize,
    pub width: usize,
    /// Offsets inside the block carrying a 1, keyed by the node's
    /// restriction to `at`. Missing keys get all zeros.
    pub ones: HashMap<BitSeq, Vec<usize>>,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Stretch {
    /// Sorted by `at`, at most one slot per position.
    slots: Vec<Slot>,
    /// `cumulative[k]`: total width of `slots[..=k]`.
    cumulative: Vec<usize>,
}

impl Stretch {
    pub fn new(mut slots: Vec<Slot>) -> Stretch {
        slots.sort_by_key(|s| s.at);
        let mut total = 0;
        let cumulative = slots
            .iter()
            .map(|s| {
                total += s.width;
                total
            })
            .collect();
        Stretch { slots, cumulative }
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    /// Total width of the slots at positions `<= x`.
    fn inserted_through(&self, x: usize) -> usize {
        let k = self.slots.partition_point(|s| s.at <= x);
        if k == 0 {
            0
        } else {
            self.cumulative[k - 1]
        }
    }

    /// New position of original position `x`; also the new length of a
    /// node of original length `x`.
    pub fn sigma(&self, x: usize) -> usize {
        x + self.inserted_through(x)
    }

    /// First new position of slot `k`.
    pub fn slot_start(&self, k: usize) -> usize {
        self.sigma(self.slots[k].at) - self.slots[k].width
    }

    pub fn image(&self, t: &BitSeq) -> BitSeq {
        let mut ones: Vec<usize> = t.ones().iter().map(|&p| self.sigma(p as usize)).collect();
        for (k, slot) in self.slots.iter().enumerate() {
            if slot.at > t.len() {
                break;
            }
            if let Some(offsets) = slot.ones.get(&t.restrict(slot.at)) {
                let start = self.slot_start(k);
                ones.extend(offsets.iter().map(|o| start + o));
            }
        }
        BitSeq::from_ones(self.sigma(t.len()), ones)
    }

    /// The least original length whose image is at least `len` long.
    pub fn preimage_ceiling(&self, len: usize) -> usize {
        let (mut lo, mut hi) = (0, len);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.sigma(mid) >= len {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitseq::{bs, meet};

    fn sample() -> Stretch {
        let mut ones = HashMap::new();
        ones.insert(bs("1"), vec![1]);
        Stretch::new(vec![
            Slot { at: 1, width: 2, ones },
            Slot { at: 3, width: 1, ones: HashMap::new() },
        ])
    }

    #[test]
    fn positions_and_lengths() {
        let s = sample();
        assert_eq!(s.sigma(0), 0);
        assert_eq!(s.sigma(1), 3);
        assert_eq!(s.sigma(2), 4);
        assert_eq!(s.sigma(3), 6);
        assert_eq!(s.slot_start(0), 1);
        assert_eq!(s.slot_start(1), 5);
        assert_eq!(s.preimage_ceiling(5), 3);
        assert_eq!(s.preimage_ceiling(4), 2);
    }

    #[test]
    fn images_keep_meets() {
        let s = sample();
        assert_eq!(s.image(&bs("1")), bs("101"));
        assert_eq!(s.image(&bs("0110")), bs("0001100"));
        let xs = ["0000", "0110", "1000", "1001"].map(bs);
        for a in &xs {
            for b in &xs {
                assert_eq!(s.image(&meet(a, b)), meet(&s.image(a), &s.image(b)));
            }
        }
    }
}
