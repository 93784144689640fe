//! Counting strict similarity types of antichains that code a graph.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::antichain::{type_code, Antichain, TypeCode};
use crate::coding::{graph_of_coding_nodes, CodedGraph};
use crate::criteria::check_incremental_parallel_ones;
use crate::diagonal::DiagonalAntichain;
use crate::error::{Error, Result};
use crate::similarity::is_strongly_diagonal;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeEnumeration {
    pub graph: CodedGraph,
    pub depth: usize,
    /// Subsets of the host that code the graph, before filtering.
    pub coding_subsets: usize,
    /// Of those, the incremental strongly diagonal ones.
    pub kept: usize,
    pub count: usize,
    pub codes: Vec<TypeCode>,
    pub representatives: Vec<Antichain>,
}

/// Antichains among the first `depth` nodes of `host` that code `g` in some
/// vertex order, are strongly diagonal and have incremental parallel 1's.
pub fn coding_antichains(g: &CodedGraph, host: &DiagonalAntichain, depth: usize) -> Result<(usize, Vec<Antichain>)> {
    if let Some(t) = g.find_triangle() {
        return Err(Error::NotTriangleFree(t));
    }
    if depth > host.nodes().len() {
        return Err(Error::Precondition(format!(
            "host has {} nodes, depth {depth} requested",
            host.nodes().len()
        )));
    }
    let pool = &host.nodes()[..depth];
    let combos: Vec<Vec<usize>> = (0..depth).combinations(g.vertex_count).collect();
    let hits: Vec<(bool, Option<Antichain>)> = combos
        .par_iter()
        .map(|idx| {
            let nodes: Vec<_> = idx.iter().map(|&i| pool[i].clone()).collect();
            if !graph_of_coding_nodes(&nodes).is_isomorphic(g) {
                return (false, None);
            }
            let keep = if is_strongly_diagonal(&nodes) {
                Antichain::new(nodes)
                    .ok()
                    .filter(|z| check_incremental_parallel_ones(&z.induced()).passed())
            } else {
                None
            };
            (true, keep)
        })
        .collect();
    let coding = hits.iter().filter(|h| h.0).count();
    Ok((coding, hits.into_iter().filter_map(|h| h.1).collect()))
}

pub fn enumerate_types(g: &CodedGraph, host: &DiagonalAntichain, depth: usize) -> Result<TypeEnumeration> {
    let (coding_subsets, kept) = coding_antichains(g, host, depth)?;
    let coded: Vec<(TypeCode, Antichain)> = kept.par_iter().map(|z| (type_code(z), z.clone())).collect();
    let mut classes: BTreeMap<TypeCode, Antichain> = BTreeMap::new();
    for (code, z) in coded {
        classes.entry(code).or_insert(z);
    }
    let (codes, representatives): (Vec<_>, Vec<_>) = classes.into_iter().unzip();
    Ok(TypeEnumeration {
        graph: g.clone(),
        depth,
        coding_subsets,
        kept: kept.len(),
        count: codes.len(),
        codes,
        representatives,
    })
}

/// Number of subtrees containing the root of the complete binary tree with
/// `height` levels below the root.
pub fn rooted_subtrees(height: usize) -> BigUint {
    let mut a = BigUint::from(1u32);
    for _ in 0..height {
        let b = &a + 1u32;
        a = &b * &b;
    }
    a
}

/// The subtree factor of the crude bound for a graph: rooted subtrees of the
/// binary tree of height `2(|G| + 1)`. The factor counting placements of
/// incremental parallel 1's has no closed form and is left out.
pub fn upper_bound_crude(g: &CodedGraph) -> BigUint {
    rooted_subtrees(2 * (g.vertex_count + 1))
}
