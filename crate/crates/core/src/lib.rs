//! The symmetric inverse semigroup `I(X)` with its partial product topology
//! and the metrics `rho`, `rho*`, `d`, checked against exhaustive small-instance oracles.

pub mod compose;
pub mod corpus;
mod cursor;
pub mod dyadic;
mod error;
pub mod expr;
pub mod metric;
pub mod pbij;
pub mod quotient;
pub mod sequence;
pub mod topo;
pub mod verify;

pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use pbij::{GroundSet, PartialBijection, Permutation, Point, SetDescriptor, Tail};
