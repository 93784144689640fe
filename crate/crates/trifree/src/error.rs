use thiserror::Error;

use crate::bitseq::BitSeq;

#[derive(Debug, Error)]
pub enum Error {
    #[error("nodes {0} and {1} are comparable, so they have no lexicographic order")]
    Comparable(BitSeq, BitSeq),

    #[error("sequence of length {got} is too short, need length at least {needed}")]
    Length { needed: usize, got: usize },

    #[error("index {index} out of range (only {available} available)")]
    Index { index: usize, available: usize },

    #[error("{0} has no splitting predecessor")]
    NoSplitPredecessor(BitSeq),

    #[error("node {0} is not in the tree")]
    NotMember(BitSeq),

    #[error("schedule entry F_{index} = {set:?} violates the schedule shape: {reason}")]
    Schedule {
        index: usize,
        set: Vec<usize>,
        reason: &'static str,
    },

    #[error("index set {0:?} codes an edge")]
    CodesEdge(Vec<usize>),

    #[error("graph is not triangle-free: {0:?}")]
    NotTriangleFree([usize; 3]),

    #[error("search failed: {0}")]
    NotFound(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource budget exceeded: {0}")]
    Budget(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
