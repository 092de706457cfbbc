use thiserror::Error;

use crate::pbij::{GroundSet, Point};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground set mismatch: {left} vs {right}")]
    GroundMismatch { left: GroundSet, right: GroundSet },

    #[error("point {point} lies outside the ground set {ground}")]
    PointOutOfRange { point: Point, ground: GroundSet },

    #[error("invalid partial bijection: {0}")]
    InvalidElement(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("enumeration bound exceeded: n = {n} > {bound}")]
    BoundExceeded { n: u32, bound: u32 },

    #[error("parse error at offset {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("atom {atom} is not admissible: {reason}")]
    Inadmissible { atom: String, reason: String },

    #[error("the two elements are equal, there is nothing to separate")]
    EqualElements,

    #[error("no fresh point is available in {0}")]
    NoFreshPoint(GroundSet),

    #[error("translation map is not a total bijection of the ground set")]
    NotTotal,

    #[error("basic open set is empty")]
    EmptyBasic,

    #[error("union over an infinite ground set is not finitely representable: {symbolic}")]
    InfiniteUnion { symbolic: String },

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("sequence tail cannot certify per-point stabilization ({0})")]
    Uncertified(String),

    #[error("metric {0} does not apply to partial bijections")]
    UnsupportedMetric(String),

    #[error(
        "cannot lift: |X| = {x_size} > |Y \\ X| = {outside}, and then no permutation of Y projects \
         to the empty map"
    )]
    NotSurjective { x_size: u32, outside: u32 },

    #[error("X of size {x_size} does not embed in Y of size {y_size}")]
    InvalidEmbedding { x_size: u32, y_size: u32 },

    #[error("u-atoms do not describe a partial injection: {0}")]
    InconsistentPairs(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}
