use itertools::Itertools;

use super::ground::{GroundSet, Point};
use super::partial::PartialBijection;
use crate::error::{Error, Result};

/// Largest `n` for which `enumerate_all` runs without an explicit bound.
pub const DEFAULT_ENUMERATION_BOUND: u32 = 5;

/// Every element of `I(Finite(n))`, exactly once.
///
/// Order: domain subset in colex order (increasing bitmask), then image subset
/// in colex order, then the matching bijection in lexicographic order.
pub fn enumerate_all(n: u32) -> Result<Vec<PartialBijection>> {
    enumerate_all_bounded(n, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_all_bounded(n: u32, bound: u32) -> Result<Vec<PartialBijection>> {
    if n > bound {
        return Err(Error::BoundExceeded { n, bound });
    }
    let ground = GroundSet::Finite(n);
    let members = |mask: u32| -> Vec<Point> { (0..n).filter(|i| mask >> i & 1 == 1).collect() };
    let mut out = Vec::new();
    for dom_mask in 0u32..1 << n {
        let dom = members(dom_mask);
        for im_mask in (0u32..1 << n).filter(|m| m.count_ones() == dom_mask.count_ones()) {
            let im = members(im_mask);
            for images in im.iter().copied().permutations(im.len()) {
                let f = PartialBijection::finite(ground, dom.iter().copied().zip(images))?;
                out.push(f);
            }
        }
    }
    Ok(out)
}

/// `|I(Finite(n))| = sum_k C(n,k)^2 k!`.
pub fn symmetric_inverse_order(n: u32) -> u64 {
    let n = u64::from(n);
    let mut total = 1u64;
    let mut binom = 1u64; // C(n, k)
    let mut fact = 1u64; // k!
    for k in 1..=n {
        binom = binom * (n - k + 1) / k;
        fact *= k;
        total += binom * binom * fact;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Independent recurrence for the order of I(n): a(n) = 2n a(n-1) - (n-1)^2 a(n-2).
    fn by_recurrence(n: u32) -> u64 {
        let (mut a, mut b) = (1i64, 2i64);
        if n == 0 {
            return 1;
        }
        for k in 2..=i64::from(n) {
            let c = 2 * k * b - (k - 1) * (k - 1) * a;
            a = b;
            b = c;
        }
        b as u64
    }

    #[test]
    fn counts_match_formula() {
        let expected = [1u64, 2, 7, 34, 209, 1546];
        for n in 0..=5u32 {
            assert_eq!(symmetric_inverse_order(n), expected[n as usize]);
            assert_eq!(by_recurrence(n), expected[n as usize]);
            let all = enumerate_all(n).unwrap();
            assert_eq!(all.len() as u64, expected[n as usize]);
            let distinct: HashSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
        }
    }

    #[test]
    fn order_is_deterministic() {
        let all = enumerate_all(2).unwrap();
        let text: Vec<String> = all.iter().map(|f| f.to_string()).collect();
        assert_eq!(
            text,
            [
                "{}",
                "{0->0}",
                "{0->1}",
                "{1->0}",
                "{1->1}",
                "{0->0, 1->1}",
                "{0->1, 1->0}"
            ]
        );
        assert_eq!(
            enumerate_all(0).unwrap(),
            vec![PartialBijection::empty(GroundSet::Finite(0))]
        );
    }

    #[test]
    fn bound_is_enforced() {
        assert_eq!(enumerate_all(6), Err(Error::BoundExceeded { n: 6, bound: 5 }));
        assert_eq!(enumerate_all_bounded(6, 6).unwrap().len(), 13327);
    }
}
