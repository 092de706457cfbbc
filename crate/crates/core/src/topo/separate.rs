use std::fmt;

use serde::Serialize;

use super::atom::{BasicOpenSet, SubbasicAtom, TopologyKind};
use super::member::{is_empty, member_basic};
use crate::error::{Error, Result};
use crate::pbij::PartialBijection;

/// Which of the two separated elements an open set contains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SeparationWitness {
    /// A basic set containing exactly one of the two elements.
    OneSided { open: BasicOpenSet, contains: Side },
    /// Disjoint basics, the first containing `f` and the second `g`.
    Disjoint { first: BasicOpenSet, second: BasicOpenSet },
}

impl fmt::Display for SeparationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeparationWitness::OneSided {
                open,
                contains: Side::First,
            } => write!(f, "{open} contains only the first"),
            SeparationWitness::OneSided {
                open,
                contains: Side::Second,
            } => write!(f, "{open} contains only the second"),
            SeparationWitness::Disjoint { first, second } => write!(f, "{first} and {second} are disjoint"),
        }
    }
}

impl SeparationWitness {
    /// Re-checks the witness from scratch: membership of both elements and,
    /// for two-sided witnesses, emptiness of the intersection.
    pub fn certify(&self, f: &PartialBijection, g: &PartialBijection) -> Result<bool> {
        match self {
            SeparationWitness::OneSided { open, contains } => {
                let (inside, outside) = match contains {
                    Side::First => (f, g),
                    Side::Second => (g, f),
                };
                Ok(member_basic(inside, open)? && !member_basic(outside, open)?)
            }
            SeparationWitness::Disjoint { first, second } => {
                Ok(member_basic(f, first)? && member_basic(g, second)? && is_empty(&first.and(second), f.ground())?)
            }
        }
    }

    fn inverted(self) -> SeparationWitness {
        match self {
            SeparationWitness::OneSided { open, contains } => SeparationWitness::OneSided {
                open: open.inverted(),
                contains,
            },
            SeparationWitness::Disjoint { first, second } => SeparationWitness::Disjoint {
                first: first.inverted(),
                second: second.inverted(),
            },
        }
    }
}

fn hausdorff_tau1(f: &PartialBijection, g: &PartialBijection) -> Result<SeparationWitness> {
    let x = f.first_disagreement(g).ok_or(Error::EqualElements)?;
    let at = |h: &PartialBijection| match h.eval(x) {
        Some(y) => BasicOpenSet::atom(SubbasicAtom::V(x, y)),
        None => BasicOpenSet::atom(SubbasicAtom::W1(x)),
    };
    Ok(SeparationWitness::Disjoint {
        first: at(f),
        second: at(g),
    })
}

/// Separating open sets following the case split on the least point where
/// `f` and `g` disagree.
pub fn separate(f: &PartialBijection, g: &PartialBijection, kind: TopologyKind) -> Result<SeparationWitness> {
    if f.ground() != g.ground() {
        return Err(Error::GroundMismatch {
            left: f.ground(),
            right: g.ground(),
        });
    }
    match kind {
        TopologyKind::Tau0 => {
            let x = f.first_disagreement(g).ok_or(Error::EqualElements)?;
            Ok(match (f.eval(x), g.eval(x)) {
                (Some(y), _) => SeparationWitness::OneSided {
                    open: BasicOpenSet::atom(SubbasicAtom::V(x, y)),
                    contains: Side::First,
                },
                (None, Some(y)) => SeparationWitness::OneSided {
                    open: BasicOpenSet::atom(SubbasicAtom::V(x, y)),
                    contains: Side::Second,
                },
                (None, None) => unreachable!("the maps disagree at x"),
            })
        }
        TopologyKind::Tau1 | TopologyKind::TauPP => hausdorff_tau1(f, g),
        TopologyKind::Tau2 => Ok(hausdorff_tau1(&f.inverse(), &g.inverse())?.inverted()),
    }
}
