use proptest::collection::{btree_set, vec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trifree::bitseq::{lex_less, meet, passing_number};
use trifree::tree::{induced_tree, is_tree};
use trifree::{BitSeq, NodeSet};

fn node(max_len: usize) -> impl Strategy<Value = BitSeq> {
    vec(0u8..2, 0..=max_len).prop_map(|b| BitSeq::from_bits(&b).unwrap())
}

fn level_set(len: usize) -> impl Strategy<Value = Vec<BitSeq>> {
    btree_set(vec(0u8..2, len), 2..8)
        .prop_map(|set| set.into_iter().map(|b| BitSeq::from_bits(&b).unwrap()).collect())
}

proptest! {
    #[test]
    fn meet_is_commutative(s in node(12), t in node(12)) {
        prop_assert_eq!(meet(&s, &t), meet(&t, &s));
    }

    #[test]
    fn meet_is_associative(s in node(10), t in node(10), u in node(10)) {
        prop_assert_eq!(meet(&meet(&s, &t), &u), meet(&s, &meet(&t, &u)));
    }

    #[test]
    fn meet_is_idempotent(s in node(16)) {
        prop_assert_eq!(meet(&s, &s), s);
    }

    #[test]
    fn meet_length_bounds(s in node(10), t in node(10)) {
        let m = meet(&s, &t).len();
        prop_assert!(m <= s.len().min(t.len()));
        prop_assert_eq!(m == s.len(), s.is_prefix_of(&t));
    }

    #[test]
    fn meet_of_an_extension(s in node(8), tail in node(8)) {
        let t = s.concat(&tail);
        prop_assert_eq!(meet(&s, &t), s);
    }

    #[test]
    fn induced_trees_are_trees(xs in btree_set(node(9), 1..10)) {
        let x: NodeSet = xs.into_iter().collect();
        let t = induced_tree(&x);
        prop_assert!(is_tree(t.nodes()));
        for s in &x {
            prop_assert!(t.contains(s));
        }
        for a in t.nodes() {
            for b in t.nodes() {
                prop_assert!(t.contains(&meet(a, b)));
            }
        }
    }

    #[test]
    fn lex_less_is_a_strict_total_order(level in (1usize..8).prop_flat_map(level_set)) {
        for a in &level {
            for b in &level {
                if a == b {
                    continue;
                }
                let ab = lex_less(a, b).unwrap();
                let ba = lex_less(b, a).unwrap();
                prop_assert!(ab != ba);
                for c in &level {
                    if c != a && c != b && ab && lex_less(b, c).unwrap() {
                        prop_assert!(lex_less(a, c).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn text_form_round_trips(s in node(40)) {
        let text = s.to_string();
        prop_assert_eq!(text.len(), s.len());
        prop_assert_eq!(text.parse::<BitSeq>().unwrap(), s.clone());
        let json = serde_json::to_string(&s).unwrap();
        prop_assert_eq!(serde_json::from_str::<BitSeq>(&json).unwrap(), s);
    }
}

#[test]
fn passing_numbers_match_index_lookup() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..10_000 {
        let tl = rng.gen_range(1..70);
        let raw: Vec<u8> = (0..tl).map(|_| rng.gen_range(0..2)).collect();
        let t = BitSeq::from_bits(&raw).unwrap();
        let sl = rng.gen_range(0..tl + 3);
        let s = BitSeq::zeros(sl);
        match passing_number(&t, &s) {
            Ok(b) => assert_eq!(b, raw[sl]),
            Err(_) => assert!(sl >= tl),
        }
    }
}
