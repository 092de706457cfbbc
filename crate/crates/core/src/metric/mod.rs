//! Exact dyadic metrics on `I(N)` and on `2^N`.
//!
//! Points are weighted `w(n) = 2^-(n+1)`, so `rho <= 1`, `d <= 2` and `eta <= 1`.

mod cauchy;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use cauchy::{cauchy_limit, inverse_pair_limit, CauchyOutcome, CauchyWitness, InversePair};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::pbij::{PartialBijection, Point, SetDescriptor, Tail};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MetricKind {
    Rho,
    RhoStar,
    DMetric,
    Eta,
}

impl MetricKind {
    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::Rho => "rho",
            MetricKind::RhoStar => "rho*",
            MetricKind::DMetric => "d",
            MetricKind::Eta => "eta",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rho" => Ok(MetricKind::Rho),
            "rho*" | "rho_star" | "rho-star" | "rhostar" => Ok(MetricKind::RhoStar),
            "d" | "d_metric" | "dmetric" => Ok(MetricKind::DMetric),
            "eta" => Ok(MetricKind::Eta),
            other => Err(Error::parse(0, format!("unknown metric `{other}`"))),
        }
    }
}

/// The pair `(a_n, b_n)`: `a_n = 1` when `n` lies in exactly one domain,
/// `b_n = 1` when both maps are defined at `n` with different values.
pub fn disagreement(f: &PartialBijection, g: &PartialBijection, n: Point) -> Result<(u8, u8)> {
    if f.ground() != g.ground() {
        return Err(Error::GroundMismatch {
            left: f.ground(),
            right: g.ground(),
        });
    }
    f.ground().check(n)?;
    Ok(match (f.eval(n), g.eval(n)) {
        (Some(x), Some(y)) => (0, u8::from(x != y)),
        (None, None) => (0, 0),
        _ => (1, 0),
    })
}

/// `rho(f, g) = sum_n (a_n + b_n) w(n)`.
pub fn rho(f: &PartialBijection, g: &PartialBijection) -> Result<Dyadic> {
    if f.ground() != g.ground() {
        return Err(Error::GroundMismatch {
            left: f.ground(),
            right: g.ground(),
        });
    }
    let bound = f.support_bound().max(g.support_bound());
    let limit = match f.ground().size() {
        Some(n) => bound.min(n),
        None => bound,
    };
    let mut total = Dyadic::zero();
    for n in 0..limit {
        let (a, b) = disagreement(f, g, n)?;
        if a + b > 0 {
            total += Dyadic::weight(n);
        }
    }
    // Above the bound both maps are uniform; only a tail/no-tail mismatch disagrees,
    // at every remaining point.
    let f_tail = matches!(f.tail(), Tail::Identity { .. });
    let g_tail = matches!(g.tail(), Tail::Identity { .. });
    if f_tail != g_tail {
        total += Dyadic::pow2_neg(bound);
    }
    Ok(total)
}

/// `rho*(f, g) = rho(f^-1, g^-1)`.
pub fn rho_star(f: &PartialBijection, g: &PartialBijection) -> Result<Dyadic> {
    rho(&f.inverse(), &g.inverse())
}

/// `d = rho + rho*`.
pub fn d_metric(f: &PartialBijection, g: &PartialBijection) -> Result<Dyadic> {
    Ok(rho(f, g)? + rho_star(f, g)?)
}

/// `eta(A, B) = sum_{n in A △ B} w(n)`.
pub fn eta(a: &SetDescriptor, b: &SetDescriptor) -> Dyadic {
    weight_of(&a.symmetric_difference(b))
}

/// Total weight of a finite or cofinite set.
pub fn weight_of(set: &SetDescriptor) -> Dyadic {
    match set {
        SetDescriptor::Finite(s) => s.iter().map(|&n| Dyadic::weight(n)).sum(),
        SetDescriptor::Cofinite(missing) => {
            let gone: Dyadic = missing.iter().map(|&n| Dyadic::weight(n)).sum();
            Dyadic::one()
                .checked_sub(&gone)
                .expect("weights of distinct points sum to at most one")
        }
    }
}

/// Distance between two partial bijections under a metric on `I(X)`.
pub fn distance(kind: MetricKind, f: &PartialBijection, g: &PartialBijection) -> Result<Dyadic> {
    match kind {
        MetricKind::Rho => rho(f, g),
        MetricKind::RhoStar => rho_star(f, g),
        MetricKind::DMetric => d_metric(f, g),
        MetricKind::Eta => Err(Error::UnsupportedMetric(kind.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbij::GroundSet;

    const N: GroundSet = GroundSet::Naturals;

    fn pb(s: &str) -> PartialBijection {
        s.parse().unwrap()
    }

    fn u(x: Point, y: Point) -> PartialBijection {
        PartialBijection::singleton(N, x, y).unwrap()
    }

    #[test]
    fn disagreement_cases() {
        let f = pb("{0->1}");
        assert_eq!(disagreement(&f, &f, 0).unwrap(), (0, 0));
        let one0 = PartialBijection::identity_on(N, &SetDescriptor::finite([0])).unwrap();
        assert_eq!(disagreement(&one0, &PartialBijection::empty(N), 0).unwrap(), (1, 0));
        assert_eq!(disagreement(&f, &pb("{0->2}"), 0).unwrap(), (0, 1));
    }

    #[test]
    fn initial_segments_approach_the_identity() {
        let all = PartialBijection::identity(N);
        for k in 0..12 {
            let seg = PartialBijection::identity_on(N, &SetDescriptor::range(0, k)).unwrap();
            assert_eq!(rho(&seg, &all).unwrap(), Dyadic::pow2_neg(k));
        }
    }

    #[test]
    fn singleton_distances() {
        for j in 0..6 {
            for k in 0..6 {
                if j == k {
                    continue;
                }
                assert_eq!(rho(&u(0, j), &u(0, k)).unwrap(), Dyadic::pow2_neg(1));
                let star = Dyadic::weight(j) + Dyadic::weight(k);
                assert_eq!(rho_star(&u(0, j), &u(0, k)).unwrap(), star);
                assert_eq!(d_metric(&u(0, j), &u(0, k)).unwrap(), Dyadic::pow2_neg(1) + star);
            }
        }
    }

    #[test]
    fn eta_examples() {
        let a = SetDescriptor::finite([2, 3]);
        assert!(eta(&a, &a).is_zero());
        assert_eq!(
            eta(&SetDescriptor::empty(), &SetDescriptor::finite([0])),
            Dyadic::pow2_neg(1)
        );
        assert_eq!(eta(&SetDescriptor::all(), &SetDescriptor::empty()), Dyadic::one());
        assert_eq!(
            eta(&SetDescriptor::cofinite([0]), &SetDescriptor::empty()),
            Dyadic::pow2_neg(1)
        );
    }

    #[test]
    fn idempotent_distance_is_twice_eta() {
        let sets = [
            SetDescriptor::finite([0, 4]),
            SetDescriptor::cofinite([1]),
            SetDescriptor::empty(),
            SetDescriptor::cofinite([0, 2, 3]),
        ];
        for a in &sets {
            for b in &sets {
                let fa = PartialBijection::identity_on(N, a).unwrap();
                let fb = PartialBijection::identity_on(N, b).unwrap();
                assert_eq!(d_metric(&fa, &fb).unwrap(), eta(a, b).double());
            }
        }
    }

    #[test]
    fn finite_ground_sums_only_inside() {
        let g = GroundSet::Finite(3);
        let f = PartialBijection::identity(g);
        let e = PartialBijection::empty(g);
        assert_eq!(rho(&f, &e).unwrap().to_string(), "7/2^3");
        assert!(disagreement(&f, &e, 3).is_err());
        assert!(distance(MetricKind::Eta, &f, &e).is_err());
    }
}
