use serde::Serialize;

use super::MetricKind;
use crate::error::{Error, Result};
use crate::pbij::{GroundSet, PartialBijection, Point, Tail};
use crate::sequence::{Fate, SequenceSpec};

/// Two indices past which consecutive elements keep disagreeing at `point`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CauchyWitness {
    pub metric: MetricKind,
    pub point: Point,
    /// `true` when the point is an image point (the disagreement is in the inverses).
    pub on_image: bool,
    pub indices: (u32, u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CauchyOutcome {
    Limit(PartialBijection),
    NotCauchy(CauchyWitness),
}

impl CauchyOutcome {
    pub fn limit(&self) -> Option<&PartialBijection> {
        match self {
            CauchyOutcome::Limit(f) => Some(f),
            CauchyOutcome::NotCauchy(_) => None,
        }
    }
}

/// The pointwise limit: `dom f` is the limit of the domains and `f(p)` the
/// eventual value at `p`.
fn pointwise_limit(seq: &SequenceSpec, metric: MetricKind, on_image: bool) -> Result<CauchyOutcome> {
    let generic = seq.generic_point();
    let mut pairs = Vec::new();
    let mut tail = Tail::NoTail;
    for pf in seq.fates()? {
        match pf.fate {
            Fate::Unstable => {
                return Ok(CauchyOutcome::NotCauchy(CauchyWitness {
                    metric,
                    point: pf.point,
                    on_image,
                    indices: (pf.settle, pf.settle + 1),
                }))
            }
            Fate::MapsTo(y) if pf.point == generic => {
                debug_assert_eq!(y, generic);
                tail = Tail::identity_from(generic);
            }
            Fate::MapsTo(y) => pairs.push((pf.point, y)),
            Fate::Outside => {}
        }
    }
    Ok(CauchyOutcome::Limit(PartialBijection::new(
        GroundSet::Naturals,
        pairs,
        tail,
    )?))
}

/// Decides Cauchyness of a certified sequence and builds its limit.
pub fn cauchy_limit(seq: &SequenceSpec, metric: MetricKind) -> Result<CauchyOutcome> {
    if !seq.is_certified() {
        return Err(Error::Uncertified(format!(
            "{} is generator-backed; only horizon-bounded verdicts are available",
            seq.label()
        )));
    }
    seq.validate()?;
    match metric {
        MetricKind::Rho => pointwise_limit(seq, metric, false),
        MetricKind::RhoStar => Ok(match pointwise_limit(&seq.inverse(), metric, true)? {
            CauchyOutcome::Limit(g) => CauchyOutcome::Limit(g.inverse()),
            other => other,
        }),
        MetricKind::DMetric => {
            let forward = pointwise_limit(seq, metric, false)?;
            let CauchyOutcome::Limit(f) = forward else {
                return Ok(forward);
            };
            match pointwise_limit(&seq.inverse(), metric, true)? {
                CauchyOutcome::Limit(g) if g == f.inverse() => Ok(CauchyOutcome::Limit(f)),
                CauchyOutcome::Limit(g) => Err(Error::InvalidSequence(format!(
                    "limits of the sequence ({f}) and of its inverses ({g}) are not mutually inverse"
                ))),
                not_cauchy => Ok(not_cauchy),
            }
        }
        MetricKind::Eta => Err(Error::UnsupportedMetric(metric.to_string())),
    }
}

/// Limits of a sequence and of its inverses under the same metric.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InversePair {
    pub forward: PartialBijection,
    pub backward: PartialBijection,
    /// `backward = forward^-1`.
    pub consistent: bool,
}

/// When both `(f_k)` and `(f_k^-1)` are Cauchy, their limits are mutually inverse.
pub fn inverse_pair_limit(seq: &SequenceSpec, metric: MetricKind) -> Result<Option<InversePair>> {
    let forward = cauchy_limit(seq, metric)?;
    let backward = cauchy_limit(&seq.inverse(), metric)?;
    Ok(match (forward, backward) {
        (CauchyOutcome::Limit(s), CauchyOutcome::Limit(t)) => Some(InversePair {
            consistent: t == s.inverse(),
            forward: s,
            backward: t,
        }),
        _ => None,
    })
}
