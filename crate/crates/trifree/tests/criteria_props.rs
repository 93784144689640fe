mod common;

use std::collections::BTreeSet;

use common::{adversarial_fixtures, dense_tree, dense_tree_from, has_triangle_by_scan, random_coding_nodes};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trifree::coding::graph_coded_by;
use trifree::criteria::{
    check_parallel_ones_criterion, check_spoc, check_strong_coding_tree, check_strongly_skew, check_tfc, skew_profile,
};
use trifree::{CodingTree, LazyAmbientTree};

fn random_dense(seed: u64) -> CodingTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    dense_tree(&random_coding_nodes(&mut rng, 7, 12, 0.55))
}

/// Prefixes of the ambient tree cut at every length up to `height`.
fn ambient_cuts(height: usize) -> Vec<CodingTree> {
    let mut amb = LazyAmbientTree::canonical();
    (1..=height).map(|len| amb.truncated(len).unwrap()).collect()
}

proptest! {
    #[test]
    fn tfc_matches_a_triangle_scan_on_dense_trees(seed in any::<u64>()) {
        let t = random_dense(seed);
        let scan = has_triangle_by_scan(t.coding());
        prop_assert_eq!(graph_coded_by(&t).is_triangle_free(), !scan);
        prop_assert_eq!(check_tfc(&t).passed(), !scan, "{:?}", t.coding());
    }

    #[test]
    fn spoc_implies_poc(seed in any::<u64>()) {
        let t = random_dense(seed);
        if check_spoc(&t).passed() {
            prop_assert!(check_parallel_ones_criterion(&t).passed());
        }
    }

    #[test]
    fn strong_coding_trees_pass_tfc(seed in any::<u64>()) {
        let t = random_dense(seed);
        if check_strong_coding_tree(&t, true).passed() {
            prop_assert!(check_tfc(&t).passed());
        }
    }
}

#[test]
fn adversarial_fixtures_are_labelled_correctly() {
    for (name, coding, triangle) in adversarial_fixtures() {
        let t = dense_tree_from(&coding);
        assert_eq!(has_triangle_by_scan(t.coding()), triangle, "{name}");
        assert_eq!(check_tfc(&t).passed(), !triangle, "{name}");
    }
}

#[test]
fn ambient_cuts_satisfy_the_implications() {
    for t in ambient_cuts(60) {
        if check_strong_coding_tree(&t, true).passed() {
            assert!(check_tfc(&t).passed());
        }
        if check_spoc(&t).passed() {
            assert!(check_parallel_ones_criterion(&t).passed());
        }
    }
}

#[test]
fn skew_trees_have_one_critical_node_per_critical_level() {
    let mut seen = 0;
    let candidates = ambient_cuts(60).into_iter().chain((0..500).map(random_dense));
    for t in candidates {
        if !check_strongly_skew(&t).passed() {
            continue;
        }
        seen += 1;
        let p = skew_profile(&t).unwrap();
        let lengths: BTreeSet<usize> = p.critical_nodes.iter().map(|c| c.len()).collect();
        assert_eq!(lengths.len(), p.critical_nodes.len());
        for (n, &m) in p.coding_indices.iter().enumerate() {
            assert_eq!(p.critical_nodes[m], t.coding()[n]);
        }
        let splitting: BTreeSet<_> = t.tree().splitting_nodes().into_iter().cloned().collect();
        assert!(splitting.iter().all(|s| p.critical_nodes.contains(s)));
    }
    assert!(seen >= 60, "{seen}");
}

#[test]
fn each_coding_node_passes_its_predecessor_with_one() {
    let mut amb = LazyAmbientTree::canonical();
    amb.grow_to(13).unwrap();
    let c = amb.coding();
    for n in 1..c.len() {
        assert_eq!(c[n].bit(c[n - 1].len()), 1, "c_{n}");
    }
}

#[test]
fn nodes_split_within_two_intervals() {
    let mut amb = LazyAmbientTree::canonical();
    amb.grow_to(13).unwrap();
    let lens = amb.coding_lengths();
    for n in (0..lens.len() - 2).step_by(2) {
        let above = amb.level(lens[n + 2]).unwrap();
        for t in amb.level(lens[n]).unwrap() {
            assert!(
                above.iter().filter(|u| t.is_prefix_of(u)).count() >= 2,
                "{t} at l_{n} has one extension at l_{}",
                n + 2
            );
        }
    }
}
