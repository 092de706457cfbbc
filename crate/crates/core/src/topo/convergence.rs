use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use serde::Serialize;

use super::atom::TopologyKind;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::metric::{distance, MetricKind};
use crate::pbij::{PartialBijection, Point};
use crate::sequence::{Fate, SequenceSpec, SequenceTail};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Converges,
    Diverges {
        point: Point,
        reason: String,
    },
    /// Only a finite window was inspected.
    Undetermined {
        horizon: u32,
        evidence: String,
    },
}

impl Verdict {
    pub fn converges(&self) -> bool {
        matches!(self, Verdict::Converges)
    }

    pub fn is_undetermined(&self) -> bool {
        matches!(self, Verdict::Undetermined { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Converges => f.write_str("converges"),
            Verdict::Diverges { point, reason } => write!(f, "diverges at x = {point} ({reason})"),
            Verdict::Undetermined { horizon, evidence } => write!(f, "undetermined up to index {horizon} ({evidence})"),
        }
    }
}

fn horizon_window(seq: &SequenceSpec, target: &PartialBijection) -> Result<Verdict> {
    let SequenceTail::Generator { horizon, .. } = &seq.tail else {
        unreachable!("only generator tails are uncertified");
    };
    let h = *horizon;
    let top = target.support_bound() + 1;
    let mut last_bad = None;
    for k in h / 2..=h {
        let f = seq.element(k)?;
        if let Some(x) = (0..=top).find(|&x| f.eval(x) != target.eval(x)) {
            last_bad = Some((k, x));
        }
    }
    let evidence = match last_bad {
        None => format!("agrees with the target on points 0..={top} for indices {}..={h}", h / 2),
        Some((k, x)) => format!("disagrees with the target at point {x} for index {k}"),
    };
    Ok(Verdict::Undetermined { horizon: h, evidence })
}

/// Points up to this bound decide convergence to `target`: past it both the
/// sequence and the target behave uniformly.
fn decisive_bound(seq: &SequenceSpec, target: &PartialBijection) -> Point {
    seq.generic_point().max(target.support_bound())
}

/// Pointwise convergence: eventually `x in dom f_k` with `f_k(x) = f(x)` for
/// `x in dom f`, and eventually `x not in dom f_k` otherwise.
pub fn converges_tau1(seq: &SequenceSpec, target: &PartialBijection) -> Result<Verdict> {
    seq.validate()?;
    if !seq.is_certified() {
        return horizon_window(seq, target);
    }
    for x in 0..=decisive_bound(seq, target) {
        let fate = seq.fate(x)?.fate;
        let reason = match (fate, target.eval(x)) {
            (Fate::MapsTo(y), Some(z)) if y == z => continue,
            (Fate::Outside, None) => continue,
            (Fate::Unstable, _) => "value never stabilizes".to_string(),
            (Fate::MapsTo(y), None) => format!("eventually maps {x} to {y}, the target is undefined there"),
            (Fate::MapsTo(y), Some(z)) => format!("eventually maps {x} to {y}, the target maps it to {z}"),
            (Fate::Outside, Some(z)) => format!("eventually leaves the domain, the target maps {x} to {z}"),
        };
        return Ok(Verdict::Diverges { point: x, reason });
    }
    Ok(Verdict::Converges)
}

/// `tau2`-convergence is `tau1`-convergence of the inverses to the inverse.
pub fn converges_tau2(seq: &SequenceSpec, target: &PartialBijection) -> Result<Verdict> {
    Ok(match converges_tau1(&seq.inverse(), &target.inverse())? {
        Verdict::Diverges { point, reason } => Verdict::Diverges {
            point,
            reason: format!("inverse sequence at image point: {reason}"),
        },
        other => other,
    })
}

pub fn converges_taupp(seq: &SequenceSpec, target: &PartialBijection) -> Result<Verdict> {
    let one = converges_tau1(seq, target)?;
    let two = converges_tau2(seq, target)?;
    Ok(match (one, two) {
        (d @ Verdict::Diverges { .. }, _) | (_, d @ Verdict::Diverges { .. }) => d,
        (u @ Verdict::Undetermined { .. }, _) | (_, u @ Verdict::Undetermined { .. }) => u,
        _ => Verdict::Converges,
    })
}

pub fn converges(seq: &SequenceSpec, target: &PartialBijection, kind: TopologyKind) -> Result<Verdict> {
    match kind {
        TopologyKind::Tau1 => converges_tau1(seq, target),
        TopologyKind::Tau2 => converges_tau2(seq, target),
        TopologyKind::TauPP => converges_taupp(seq, target),
        TopologyKind::Tau0 => Err(Error::Inadmissible {
            atom: "tau0".into(),
            reason: "convergence verdicts are provided for tau1, tau2 and tau_pp".into(),
        }),
    }
}

/// The metric counterpart of each topology.
pub fn paired_topology(metric: MetricKind) -> Result<TopologyKind> {
    match metric {
        MetricKind::Rho => Ok(TopologyKind::Tau1),
        MetricKind::RhoStar => Ok(TopologyKind::Tau2),
        MetricKind::DMetric => Ok(TopologyKind::TauPP),
        MetricKind::Eta => Err(Error::UnsupportedMetric(metric.to_string())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MetricVerdict {
    Converges,
    /// The distances decrease to a positive limit.
    Diverges {
        limit: Dyadic,
    },
    Undetermined {
        horizon: u32,
        last_distance: Dyadic,
    },
}

impl MetricVerdict {
    pub fn converges(&self) -> bool {
        matches!(self, MetricVerdict::Converges)
    }
}

impl fmt::Display for MetricVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricVerdict::Converges => f.write_str("converges"),
            MetricVerdict::Diverges { limit } => write!(f, "diverges (distance tends to {limit})"),
            MetricVerdict::Undetermined { horizon, last_distance } => {
                write!(f, "undetermined (distance {last_distance} at index {horizon})")
            }
        }
    }
}

fn signed(d: &Dyadic, exponent: u32) -> BigInt {
    BigInt::from_biguint(Sign::Plus, d.scaled_numerator(exponent))
}

/// Decides `dist(f_k, target) -> 0` from exact distances alone.
///
/// Past the generic index the distance has the form `A + B 2^-k`: settled
/// points contribute a constant, and each moving pair or block contributes a
/// fixed multiple of `2^-k`. Four consecutive distances fit and confirm that
/// form; the sequence converges iff `A = 0`.
pub fn metric_verdict(seq: &SequenceSpec, target: &PartialBijection, metric: MetricKind) -> Result<MetricVerdict> {
    paired_topology(metric)?;
    seq.validate()?;
    if let SequenceTail::Generator { horizon, .. } = &seq.tail {
        return Ok(MetricVerdict::Undetermined {
            horizon: *horizon,
            last_distance: distance(metric, &seq.element(*horizon)?, target)?,
        });
    }
    let bound = decisive_bound(seq, target);
    let r = seq.generic_index().max(bound + seq.offset_bound() + 1);
    let ds: Vec<Dyadic> = (r..r + 4)
        .map(|k| distance(metric, &seq.element(k)?, target))
        .collect::<Result<_>>()?;
    let e = ds.iter().map(Dyadic::exponent).max().unwrap_or(0);
    let n: Vec<BigInt> = ds.iter().map(|d| signed(d, e)).collect();
    let a: BigInt = &n[1] * 2 - &n[0];
    let b: BigInt = &n[0] - &a;
    let fits = (&n[2] - &a) * 4 == b && (&n[3] - &a) * 8 == b;
    let a: BigUint = match a.to_biguint() {
        Some(a) if fits => a,
        _ => {
            return Err(Error::Uncertified(format!(
                "distance profile of {} from index {r} is not of the form A + B 2^-k",
                seq.label()
            )))
        }
    };
    Ok(if a == BigUint::ZERO {
        MetricVerdict::Converges
    } else {
        MetricVerdict::Diverges {
            limit: Dyadic::new(a, e),
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Agreement {
    pub metric: MetricKind,
    pub topology: TopologyKind,
    pub topological: Verdict,
    pub metric_verdict: MetricVerdict,
    pub agrees: bool,
}

/// Compares the topological verdict with the independent metric verdict.
pub fn metric_convergence_agrees(
    seq: &SequenceSpec,
    target: &PartialBijection,
    metric: MetricKind,
) -> Result<Agreement> {
    let topology = paired_topology(metric)?;
    let topological = converges(seq, target, topology)?;
    let metric_verdict = metric_verdict(seq, target, metric)?;
    let agrees = match (&topological, &metric_verdict) {
        (Verdict::Undetermined { .. }, MetricVerdict::Undetermined { .. }) => true,
        (Verdict::Undetermined { .. }, _) | (_, MetricVerdict::Undetermined { .. }) => false,
        (t, m) => t.converges() == m.converges(),
    };
    Ok(Agreement {
        metric,
        topology,
        topological,
        metric_verdict,
        agrees,
    })
}
