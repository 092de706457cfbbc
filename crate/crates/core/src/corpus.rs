//! The curated sequence corpus, embedded at build time.

use crate::error::Result;
use crate::sequence::SequenceSpec;

pub const CORPUS: &[(&str, &str)] = &[
    ("constant_finite", include_str!("../corpus/constant_finite.json")),
    ("constant_with_tail", include_str!("../corpus/constant_with_tail.json")),
    ("diagonal_singleton", include_str!("../corpus/diagonal_singleton.json")),
    ("escaping_preimage", include_str!("../corpus/escaping_preimage.json")),
    (
        "horizon_initial_segment",
        include_str!("../corpus/horizon_initial_segment.json"),
    ),
    ("identity_punctured", include_str!("../corpus/identity_punctured.json")),
    ("initial_segment", include_str!("../corpus/initial_segment.json")),
    (
        "mixed_prefix_schedule",
        include_str!("../corpus/mixed_prefix_schedule.json"),
    ),
    (
        "prefix_then_constant",
        include_str!("../corpus/prefix_then_constant.json"),
    ),
    ("receding_identity", include_str!("../corpus/receding_identity.json")),
    ("shifted_pair", include_str!("../corpus/shifted_pair.json")),
    ("shrinking_window", include_str!("../corpus/shrinking_window.json")),
    ("singleton_return", include_str!("../corpus/singleton_return.json")),
    ("singleton_walk", include_str!("../corpus/singleton_walk.json")),
    (
        "swap_growing_identity",
        include_str!("../corpus/swap_growing_identity.json"),
    ),
    ("transposition_walk", include_str!("../corpus/transposition_walk.json")),
];

pub fn corpus() -> Result<Vec<SequenceSpec>> {
    CORPUS.iter().map(|(_, text)| SequenceSpec::from_json(text)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_parses_and_validates() {
        let specs = corpus().unwrap();
        assert!(specs.len() >= 12);
        for ((name, _), s) in CORPUS.iter().zip(&specs) {
            assert_eq!(s.name.as_deref(), Some(*name));
            s.validate().unwrap();
        }
    }
}
