use std::collections::HashMap;

use itertools::Itertools;
use trifree::antichain::{make_envelope, restrict_envelope, strictly_similar, type_code, Antichain, Envelope};
use trifree::criteria::check_spoc;
use trifree::incremental::build_incremental;
use trifree::similarity::first_failed_clause;
use trifree::{BitSeq, LazyAmbientTree};

#[test]
fn coding_node_antichains_of_the_incremental_tree() {
    let s = build_incremental(&mut LazyAmbientTree::canonical(), 6).unwrap();
    let pool: Vec<BitSeq> = s.witnesses().iter().map(|w| w.node.clone()).collect();
    let mut seen = 0;
    for k in 1..=3 {
        for nodes in s.tree().coding().iter().cloned().combinations(k) {
            // Later coding nodes may extend earlier ones.
            let Ok(z) = Antichain::new(nodes) else { continue };
            seen += 1;
            let e = make_envelope(&z, &pool).unwrap();
            assert!(check_spoc(&e.union.induced()).passed(), "{z:?}");
            assert_eq!(restrict_envelope(&e.union, &e).unwrap(), z);
        }
    }
    assert_eq!(seen, 36);
}

/// Antichains of two or three nodes drawn from whole levels of the
/// incremental tree at its coding lengths, not only from coding nodes.
fn level_antichains() -> (Vec<Antichain>, Vec<BitSeq>) {
    let s = build_incremental(&mut LazyAmbientTree::canonical(), 6).unwrap();
    let pool = s.witnesses().iter().map(|w| w.node.clone()).collect();
    let nodes: Vec<BitSeq> = s
        .tree()
        .coding_lengths()
        .into_iter()
        .flat_map(|l| s.tree().tree().level(l).cloned().collect::<Vec<_>>())
        .collect();
    let zs = (2..=3)
        .flat_map(|k| nodes.iter().cloned().combinations(k))
        .filter_map(|c| Antichain::new(c).ok())
        .collect();
    (zs, pool)
}

/// Envelopes that exist pass SPOC even on the wider population, but two
/// strictly similar antichains can have envelopes that are not: their
/// witnesses hang off the host's all-zero branch, and where they branch off
/// relative to the base nodes changes the shape of the meet closure.
#[test]
fn envelopes_of_strictly_similar_level_antichains_can_differ() {
    let (zs, pool) = level_antichains();
    let mut classes: HashMap<_, Vec<(usize, Envelope)>> = HashMap::new();
    for (i, z) in zs.iter().enumerate() {
        let Ok(e) = make_envelope(z, &pool) else { continue };
        assert!(check_spoc(&e.union.induced()).passed(), "{z:?}");
        let members = classes.entry(type_code(z)).or_default();
        if let Some((j, f)) = members.first() {
            assert!(strictly_similar(&zs[*j], z));
            if !strictly_similar(&f.union, &e.union) {
                let clause = first_failed_clause(&f.union.coded_set(), &e.union.coded_set());
                assert!(matches!(clause, Some(2 | 3)), "{clause:?}: {:?} vs {:?}", f.union, e.union);
                assert!(!f.witnesses.is_empty() || !e.witnesses.is_empty());
                return;
            }
        }
        members.push((i, e));
    }
    panic!("every pair of envelopes was strictly similar");
}
