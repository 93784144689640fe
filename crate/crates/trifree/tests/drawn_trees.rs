//! Small hand-drawn trees, checked structurally.

mod common;

use common::{bits, dense_tree_from, load_fixture};
use trifree::coding::graph_coded_by;
use trifree::criteria::{
    check_incremental_parallel_ones, check_spoc, check_strong_coding_tree, check_strong_tf_tree, spl_set, splitpred,
};
use trifree::stf::build_strong_tf_tree;
use trifree::{CodedGraph, LazyAmbientTree, NodeSet, RequirementSchedule};

#[test]
fn four_cycle_tree() {
    let t = dense_tree_from(&["1", "01", "001", "0101"]);
    let want: NodeSet = ["", "0", "1", "00", "01", "001", "010", "0101"].iter().map(|s| bits(s)).collect();
    assert_eq!(t.nodes(), &want);
    let g = graph_coded_by(&t);
    assert!(g.is_isomorphic(&CodedGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()));
}

#[test]
fn first_coding_nodes_of_the_strong_coding_tree() {
    let mut amb = LazyAmbientTree::canonical();
    let p = amb.prefix(1).unwrap();
    assert_eq!(p.coding(), &[bits("10"), bits("01100")]);
    assert_eq!(splitpred(&p, &bits("01100")).unwrap(), bits("0"));
    assert_eq!(splitpred(&p, &bits("10")).unwrap(), bits(""));
    assert_eq!(spl_set(&p, 1).unwrap(), vec![bits("000"), bits("100")]);
}

#[test]
fn drawn_strong_coding_tree_validates() {
    let f = load_fixture("drawn_sct.json");
    assert_eq!(f.coding().len(), 4);
    let r = check_strong_coding_tree(&f, true);
    assert!(r.passed(), "{:?}", r.violation);
    assert!(check_spoc(&f).passed());
    assert!(graph_coded_by(&f).is_triangle_free());
}

#[test]
fn drawn_tree_has_no_incremental_parallel_ones() {
    let f = load_fixture("drawn_sct.json");
    let r = check_incremental_parallel_ones(&f);
    assert!(!r.passed());
    assert_eq!(r.violation.unwrap().clause, "incremental.missing-subset");
}

#[test]
fn drawn_tree_agrees_with_the_construction_through_length_ten() {
    let f = load_fixture("drawn_sct.json");
    let mut amb = LazyAmbientTree::canonical();
    for len in 0..=10 {
        let drawn: Vec<_> = f.tree().level(len).cloned().collect();
        assert_eq!(drawn, amb.level(len).unwrap(), "length {len}");
    }
    assert_eq!(&f.coding()[..3], &amb.coding()[..3]);
    // From length 11 on the drawing and the canonical build part ways: the
    // drawn fourth coding node has length 13, the built one length 15.
    assert_eq!(f.coding()[3].len(), 13);
    assert_eq!(amb.coding_node(3).unwrap().len(), 15);
}

#[test]
fn six_vertex_strong_triangle_free_tree() {
    let t = load_fixture("example_stf.json");
    assert_eq!(
        t.coding(),
        &[bits("1"), bits("01"), bits("001"), bits("1001"), bits("00001"), bits("010101")]
    );
    let r = check_strong_tf_tree(&t);
    assert!(r.passed(), "{:?}", r.violation);
    let g = graph_coded_by(&t);
    assert_eq!(g.vertex_count, 6);
    assert_eq!(g.edges.len(), 7);
    assert!(g.is_triangle_free());
    // The canonical build shares the first three coding nodes and breaks
    // the tie at c_3 the other way.
    let built = build_strong_tf_tree(&RequirementSchedule::canonical(), 4).unwrap();
    assert_eq!(&built.coding()[..3], &t.coding()[..3]);
    assert_eq!(built.coding()[3], bits("0001"));
}
