//! Graphviz output: the tree drawn top-down with coding nodes filled, and
//! the graph they code in a cluster beside it.

use std::fmt::Write;

use trifree::coding::graph_coded_by;
use trifree::{BitSeq, CodingTree};

fn node_id(t: &BitSeq) -> String {
    format!("n{t}")
}

/// Renders `t` as a DOT digraph named `name`.
///
/// Every level goes on its own rank, so nodes of equal length line up as in
/// a drawing of a binary tree. A 0 edge leans left and a 1 edge leans right.
pub fn tree_to_dot(t: &CodingTree, name: &str) -> String {
    let mut out = String::new();
    let name = name.replace('"', "'");
    writeln!(out, "digraph \"{name}\" {{").unwrap();
    writeln!(out, "  rankdir=TB;").unwrap();
    writeln!(out, "  node [shape=circle, width=0.25, fontsize=9];").unwrap();
    writeln!(out, "  subgraph cluster_tree {{").unwrap();
    writeln!(out, "    label=\"tree\";").unwrap();
    for (len, level) in t.tree().levels() {
        let ids: Vec<String> = level.iter().map(|u| node_id(u)).collect();
        writeln!(out, "    subgraph rank{len} {{ rank=same; {}; }}", ids.join("; ")).unwrap();
        for u in level {
            let label = if len == 0 { "root".to_string() } else { u.to_string() };
            match t.coding().iter().position(|c| c == u) {
                Some(i) => writeln!(
                    out,
                    "    {} [label=\"{label}\", style=filled, fillcolor=black, fontcolor=white, xlabel=\"c{i}\"];",
                    node_id(u)
                )
                .unwrap(),
                None => writeln!(out, "    {} [label=\"{label}\"];", node_id(u)).unwrap(),
            }
        }
    }
    for v in t.nodes() {
        // The parent is the longest proper initial segment in the tree.
        let Some(u) = (0..v.len()).rev().map(|k| v.restrict(k)).find(|u| t.tree().contains(u)) else {
            continue;
        };
        let bit = v.bit(u.len());
        writeln!(
            out,
            "    {} -> {} [label=\"{bit}\", tailport={}];",
            node_id(&u),
            node_id(v),
            if bit == 0 { "sw" } else { "se" }
        )
        .unwrap();
    }
    writeln!(out, "  }}").unwrap();

    let g = graph_coded_by(t);
    writeln!(out, "  subgraph cluster_graph {{").unwrap();
    writeln!(out, "    label=\"coded graph\";").unwrap();
    for v in 0..g.vertex_count {
        writeln!(out, "    v{v} [label=\"v{v}\", shape=circle];").unwrap();
    }
    for &(a, b) in &g.edges {
        writeln!(out, "    v{a} -> v{b} [dir=none];").unwrap();
    }
    writeln!(out, "  }}").unwrap();
    writeln!(out, "}}").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use trifree::stf::build_strong_tf_tree;
    use trifree::RequirementSchedule;

    #[test]
    fn coding_nodes_are_filled() {
        let t = build_strong_tf_tree(&RequirementSchedule::canonical(), 3).unwrap();
        let d = tree_to_dot(&t, "bS");
        assert_eq!(d.matches("style=filled").count(), 3);
        assert!(d.contains("n1 [label=\"1\", style=filled"));
        assert!(d.contains("v0 -> v1 [dir=none]"));
        assert_eq!(d.matches('{').count(), d.matches('}').count());
    }
}
