//! The symmetric inverse semigroup `I(X)`: elements, composition, inversion,
//! the restriction order and exhaustive enumeration.

mod enumerate;
mod ground;
mod partial;
mod perm;

pub use enumerate::{enumerate_all, enumerate_all_bounded, symmetric_inverse_order, DEFAULT_ENUMERATION_BOUND};
pub use ground::{GroundSet, Point, SetDescriptor};
pub use partial::{PartialBijection, Tail};
pub use perm::Permutation;

pub(crate) use partial::parse_literal;
pub(crate) use perm::parse_permutation;

/// `f ∘ g`.
pub fn compose(f: &PartialBijection, g: &PartialBijection) -> crate::Result<PartialBijection> {
    f.compose(g)
}

pub fn inverse(f: &PartialBijection) -> PartialBijection {
    f.inverse()
}

/// `1_A`.
pub fn idempotent_on(ground: GroundSet, set: &SetDescriptor) -> crate::Result<PartialBijection> {
    PartialBijection::identity_on(ground, set)
}

/// `u_{x,y}`.
pub fn singleton_map(ground: GroundSet, x: Point, y: Point) -> crate::Result<PartialBijection> {
    PartialBijection::singleton(ground, x, y)
}

/// The restriction order `f ⊆ g`.
pub fn restricts(f: &PartialBijection, g: &PartialBijection) -> crate::Result<bool> {
    f.restricts(g)
}
