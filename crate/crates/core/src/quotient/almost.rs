use serde::Serialize;

use crate::compose::restrict_map;
use crate::error::Result;
use crate::metric::MetricKind;
use crate::pbij::{PartialBijection, Point, SetDescriptor};
use crate::sequence::SequenceSpec;
use crate::topo::{converges_taupp, metric_verdict, MetricVerdict, Verdict};

/// Complements of the cofinite sets tried for the restricted hypothesis.
pub const DEFAULT_COFINITE_SETS: [&[Point]; 3] = [&[0], &[1], &[0, 1, 2]];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlmostConvergence {
    pub target: PartialBijection,
    /// `f_k -> f` in `tau_pp`.
    pub tau_pp: Verdict,
    /// `f_k ∘ 1_A -> f ∘ 1_A` in `d`, per cofinite `A`.
    pub restricted: Vec<(SetDescriptor, MetricVerdict)>,
    /// `f_k -> f` in `d`.
    pub conclusion: MetricVerdict,
    pub hypotheses_hold: bool,
    pub holds: bool,
}

/// Checks that `tau_pp`-convergence together with `d`-convergence after
/// restricting to some cofinite `A` yields `d`-convergence.
pub fn almost_convergence(
    seq: &SequenceSpec,
    target: &PartialBijection,
    missing: &[&[Point]],
) -> Result<AlmostConvergence> {
    let tau_pp = converges_taupp(seq, target)?;
    let restricted = missing
        .iter()
        .map(|m| {
            let a = SetDescriptor::cofinite(m.iter().copied());
            let v = metric_verdict(
                &seq.right_restrict(&a)?,
                &restrict_map(target, &a)?,
                MetricKind::DMetric,
            )?;
            Ok((a, v))
        })
        .collect::<Result<Vec<_>>>()?;
    let conclusion = metric_verdict(seq, target, MetricKind::DMetric)?;
    let hypotheses_hold = tau_pp.converges() && restricted.iter().any(|(_, v)| v.converges());
    Ok(AlmostConvergence {
        target: target.clone(),
        holds: !hypotheses_hold || conclusion.converges(),
        tau_pp,
        restricted,
        conclusion,
        hypotheses_hold,
    })
}
