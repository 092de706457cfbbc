//! Named rules standing in for black-box sequences.

use crate::error::{Error, Result};
use crate::pbij::{GroundSet, PartialBijection, SetDescriptor};

pub const GENERATORS: [&str; 3] = ["singleton_walk", "initial_segment", "alternating"];

/// The `k`-th element produced by the named rule.
pub fn generate(rule: &str, k: u32) -> Result<PartialBijection> {
    let n = GroundSet::Naturals;
    match rule {
        "singleton_walk" => PartialBijection::singleton(n, 0, k),
        "initial_segment" => PartialBijection::identity_on(n, &SetDescriptor::range(0, k)),
        "alternating" if k.is_multiple_of(2) => PartialBijection::singleton(n, 0, 1),
        "alternating" => Ok(PartialBijection::empty(n)),
        other => Err(Error::InvalidSequence(format!(
            "unknown generator `{other}` (known: {})",
            GENERATORS.join(", ")
        ))),
    }
}
