pub mod ambient;
pub mod antichain;
pub mod bitseq;
pub mod coding;
pub mod criteria;
pub mod diagonal;
pub mod enumerate;
pub mod error;
pub mod incremental;
pub mod extend;
pub mod schedule;
pub mod similarity;
pub(crate) mod stretch;
pub mod stf;
pub mod tree;
pub mod valid;

pub use bitseq::BitSeq;
pub use coding::{CodedGraph, CodingTree};
pub use error::{Error, Result};
pub use tree::{NodeSet, Tree};
pub use schedule::{NodeEnumeration, RequirementSchedule};
pub use ambient::{build_strong_coding_tree, LazyAmbientTree};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/bit-sequences.md")]
    mod bit_sequences {}
    #[doc = include_str!("../../../book/src/coding-trees.md")]
    mod coding_trees {}
    #[doc = include_str!("../../../book/src/criteria.md")]
    mod criteria {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/similarity.md")]
    mod similarity {}
    #[doc = include_str!("../../../book/src/antichains.md")]
    mod antichains {}
}
