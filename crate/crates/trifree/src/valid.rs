//! Valid subtrees of the ambient tree.
//!
//! A level set of a subtree is safe when extending its members leftmost up
//! to just past the next coding node produces no set of parallel 1's that
//! was not already present below the level. Levels strictly inside the
//! subtree already have their extensions fixed by the subtree itself, so
//! only the frontier is tested: the top level, and the immediate extensions
//! of its nodes in the ambient tree.

use crate::ambient::LazyAmbientTree;
use crate::bitseq::BitSeq;
use crate::criteria::{violation, Outcome, Report};
use crate::error::{Error, Result};
use crate::tree::Tree;

/// Does every node of `members` (indices into `xs`) carry a 1 at some
/// common position below `limit`?
fn common_one_below(xs: &[BitSeq], members: &[usize], limit: usize) -> bool {
    let Some((&first, rest)) = members.split_first() else { return false };
    xs[first]
        .ones()
        .iter()
        .map(|&p| p as usize)
        .take_while(|&p| p < limit)
        .any(|p| rest.iter().all(|&i| xs[i].get(p) == Some(1)))
}

/// Checks one level set `xs`, all of length `l`.
fn level_outcome(xs: &[BitSeq], ambient: &mut LazyAmbientTree) -> Result<Outcome> {
    if xs.len() < 2 {
        return Ok(Ok(()));
    }
    let l = xs[0].len();
    let mut n = 0;
    loop {
        let c = ambient.coding_node(n)?;
        if c.len() == l && xs.contains(c) {
            return Ok(Ok(()));
        }
        if c.len() > l {
            break;
        }
        n += 1;
    }
    let ln = ambient.coding_node(n)?.len();
    let ys: Vec<BitSeq> = xs
        .iter()
        .map(|x| ambient.leftmost_extension(x, ln + 1))
        .collect::<Result<_>>()?;
    for p in l..=ln {
        let ones: Vec<usize> = (0..ys.len()).filter(|&i| ys[i].get(p) == Some(1)).collect();
        if ones.len() >= 2 && !common_one_below(xs, &ones, l) {
            let nodes = ones.iter().map(|&i| xs[i].clone()).collect();
            return Ok(Err(violation(
                "valid.predetermined",
                Some(l),
                nodes,
                format!("leftmost extensions first share a 1 at {p}, before c_{n} is reached"),
            )));
        }
    }
    Ok(Ok(()))
}

/// Checks that the frontier of `a` has no pre-determined new parallel 1's
/// in `ambient`.
pub fn check_valid_subtree(a: &Tree, ambient: &mut LazyAmbientTree) -> Result<Report> {
    for t in a.nodes() {
        if !ambient.contains(t)? {
            return Err(Error::NotMember(t.clone()));
        }
    }
    let top: Vec<BitSeq> = a.level(a.height()).cloned().collect();
    let mut ext = Vec::new();
    for t in &top {
        ext.extend(ambient.extensions(t, t.len() + 1)?);
    }
    for xs in [&top, &ext] {
        let out = level_outcome(xs, ambient)?;
        if out.is_err() {
            return Ok(Report::from_outcome("valid", out));
        }
    }
    Ok(Report::from_outcome("valid", Ok(())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitseq::bs;

    fn tree(xs: &[&str]) -> Tree {
        Tree::new(xs.iter().map(|s| bs(s)).collect()).unwrap()
    }

    #[test]
    fn counterexample_is_invalid() {
        let mut t = LazyAmbientTree::canonical();
        let r = check_valid_subtree(&tree(&["", "0000", "1001"]), &mut t).unwrap();
        assert!(!r.passed());
        assert_eq!(r.violation.unwrap().clause, "valid.predetermined");
    }

    #[test]
    fn initial_segments_are_valid() {
        let mut t = LazyAmbientTree::canonical();
        t.grow_to(6).unwrap();
        for n in 0..6 {
            let a = t.prefix(n).unwrap();
            let r = check_valid_subtree(a.tree(), &mut t).unwrap();
            assert!(r.passed(), "n={n}: {:?}", r.violation);
        }
    }

    #[test]
    fn mid_interval_cut_is_committed() {
        // At length 8 two nodes have already taken right branches in the
        // interval of c_2, so both must pass c_2 with a 1.
        let mut t = LazyAmbientTree::canonical();
        let a = t.truncated(8).unwrap();
        let r = check_valid_subtree(a.tree(), &mut t).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn outsider_is_rejected() {
        let mut t = LazyAmbientTree::canonical();
        assert!(matches!(
            check_valid_subtree(&tree(&["", "11"]), &mut t),
            Err(Error::NotMember(_))
        ));
    }
}
