use std::collections::BTreeSet;

use serde::Serialize;

use super::atom::{BasicOpenSet, SubbasicAtom, TopologyKind};
use super::member::{atom_member, is_empty, witness};
use crate::error::{Error, Result};
use crate::pbij::{enumerate_all_bounded, GroundSet, PartialBijection, Point, SetDescriptor, Tail};

/// Certificate that a basic set does not stay inside the closure of `w2(y)`
/// (or, dually, `w1(x)`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NowhereDenseWitness {
    /// A nonempty basic inside the given one that misses the atom.
    pub refined: BasicOpenSet,
    /// The fresh point used for the refinement, when one was needed.
    pub fresh: Option<Point>,
    /// A member of `refined`.
    pub member: PartialBijection,
}

fn require_nonempty_positive(b: &BasicOpenSet, kind: TopologyKind, ground: GroundSet) -> Result<PartialBijection> {
    if let Some(a) = b.atoms().find(|a| !kind.admits(a)) {
        return Err(Error::Inadmissible {
            atom: a.to_string(),
            reason: format!("not a subbasic atom of {kind}"),
        });
    }
    witness(b, ground)?.ok_or(Error::EmptyBasic)
}

/// For `b` a nonempty `tau1`-basic: a nonempty sub-basic disjoint from `w2(y)`.
pub fn nowhere_dense_witness(b: &BasicOpenSet, y: Point, ground: GroundSet) -> Result<NowhereDenseWitness> {
    let member = require_nonempty_positive(b, TopologyKind::Tau1, ground)?;
    ground.check(y)?;
    let w2 = SubbasicAtom::W2(y);
    if b.atoms().any(|a| matches!(a, SubbasicAtom::V(_, t) if t == y)) {
        debug_assert!(is_empty(&b.with(w2), ground)?);
        return Ok(NowhereDenseWitness {
            refined: b.clone(),
            fresh: None,
            member,
        });
    }
    let mentioned: BTreeSet<Point> = b.points().into_iter().chain([y]).collect();
    let x = (0..)
        .find(|p| !mentioned.contains(p))
        .filter(|&p| ground.contains(p))
        .ok_or(Error::NoFreshPoint(ground))?;
    let refined = b.with(SubbasicAtom::V(x, y));
    let member = witness(&refined, ground)?.expect("x is fresh, so the refinement is consistent");
    debug_assert!(is_empty(&refined.with(w2), ground)?);
    Ok(NowhereDenseWitness {
        refined,
        fresh: Some(x),
        member,
    })
}

/// The dual statement: for `b` a nonempty `tau2`-basic, a nonempty sub-basic disjoint from `w1(x)`.
pub fn nowhere_dense_witness_w1(b: &BasicOpenSet, x: Point, ground: GroundSet) -> Result<NowhereDenseWitness> {
    require_nonempty_positive(b, TopologyKind::Tau2, ground)?;
    let w = nowhere_dense_witness(&b.inverted(), x, ground)?;
    Ok(NowhereDenseWitness {
        refined: w.refined.inverted(),
        fresh: w.fresh,
        member: w.member.inverse(),
    })
}

/// Outcome of checking `f ∘ g in w1(x)  iff  f in w1(g(x))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranslateReport {
    pub x: Point,
    pub y: Point,
    pub checked: usize,
    pub failures: Vec<PartialBijection>,
}

impl TranslateReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that right translation by a total bijection `g` carries `w1(x)` onto `w1(g(x))`.
///
/// On a finite ground set every `f` is tried. On the naturals the test family is
/// `I(m)` over the points below `g`'s support bound, each with and without an
/// identity tail.
pub fn translate_w1(x: Point, g: &PartialBijection) -> Result<TranslateReport> {
    if !g.is_total() {
        return Err(Error::NotTotal);
    }
    let ground = g.ground();
    ground.check(x)?;
    let y = g.eval(x).expect("g is total");
    let candidates: Vec<PartialBijection> = match ground {
        GroundSet::Finite(n) => enumerate_all_bounded(n, n)?,
        GroundSet::Naturals => {
            let m = g.support_bound().max(x + 1).max(y + 1).min(5);
            let mut out = Vec::new();
            for f in enumerate_all_bounded(m, m)? {
                let pairs = f.pairs().to_vec();
                out.push(PartialBijection::finite(GroundSet::Naturals, pairs.iter().copied())?);
                out.push(PartialBijection::new(
                    GroundSet::Naturals,
                    pairs,
                    Tail::identity_from(m),
                )?);
            }
            out
        }
    };
    let mut failures = Vec::new();
    for f in &candidates {
        let lhs = atom_member(&f.compose(g)?, &SubbasicAtom::W1(x))?;
        let rhs = atom_member(f, &SubbasicAtom::W1(y))?;
        if lhs != rhs {
            failures.push(f.clone());
        }
    }
    Ok(TranslateReport {
        x,
        y,
        checked: candidates.len(),
        failures,
    })
}

/// A cylinder `{A : required ⊆ A, A ∩ forbidden = ∅, |A| <= max_size}` of `2^X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cylinder {
    pub required: BTreeSet<Point>,
    pub forbidden: BTreeSet<Point>,
    /// Only present over finite ground sets, where injectivity caps the size.
    pub max_size: Option<u32>,
}

impl Cylinder {
    pub fn contains(&self, set: &SetDescriptor) -> bool {
        self.required.iter().all(|p| set.contains(*p))
            && self.forbidden.iter().all(|p| !set.contains(*p))
            && match (self.max_size, set) {
                (None, _) => true,
                (Some(cap), SetDescriptor::Finite(s)) => s.len() <= cap as usize,
                (Some(_), SetDescriptor::Cofinite(_)) => false,
            }
    }
}

/// The images `{dom f : f in b}` and `{im f : f in b}` of a nonempty basic.
pub fn dom_im_image_of_basic(b: &BasicOpenSet, ground: GroundSet) -> Result<(Cylinder, Cylinder)> {
    require_nonempty_positive(b, TopologyKind::TauPP, ground)?;
    let mut sources = BTreeSet::new();
    let mut targets = BTreeSet::new();
    let mut no_dom = BTreeSet::new();
    let mut no_im = BTreeSet::new();
    for a in b.atoms() {
        match a {
            SubbasicAtom::V(x, y) => {
                sources.insert(x);
                targets.insert(y);
            }
            SubbasicAtom::W1(x) => {
                no_dom.insert(x);
            }
            SubbasicAtom::W2(y) => {
                no_im.insert(y);
            }
            SubbasicAtom::U(..) => unreachable!("rejected as inadmissible"),
        }
    }
    let cap = |excluded: &BTreeSet<Point>| ground.size().map(|n| n - excluded.len() as u32);
    Ok((
        Cylinder {
            required: sources,
            forbidden: no_dom.clone(),
            max_size: cap(&no_im),
        },
        Cylinder {
            required: targets,
            forbidden: no_im,
            max_size: cap(&no_dom),
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbij::enumerate_all;
    use crate::topo::member::member_basic;

    fn basic(s: &str) -> BasicOpenSet {
        s.parse().unwrap()
    }

    #[test]
    fn direct_certificate_when_y_is_a_target() {
        let w = nowhere_dense_witness(&basic("v(0,1)"), 1, GroundSet::Naturals).unwrap();
        assert_eq!(w.fresh, None);
        assert!(is_empty(&w.refined.with(SubbasicAtom::W2(1)), GroundSet::Naturals).unwrap());
    }

    #[test]
    fn fresh_point_is_least_unmentioned() {
        let b = basic("v(0,1) & w1(2)");
        let w = nowhere_dense_witness(&b, 3, GroundSet::Naturals).unwrap();
        assert_eq!(w.fresh, Some(4));
        assert_eq!(w.refined, basic("v(0,1) & w1(2) & v(4,3)"));
        assert!(member_basic(&w.member, &w.refined).unwrap());
        assert!(is_empty(&w.refined.with(SubbasicAtom::W2(3)), GroundSet::Naturals).unwrap());
        assert_eq!(
            nowhere_dense_witness(&b, 3, GroundSet::Finite(4)),
            Err(Error::NoFreshPoint(GroundSet::Finite(4)))
        );
        assert_eq!(
            nowhere_dense_witness(&basic("v(0,1) & w1(0)"), 3, GroundSet::Naturals),
            Err(Error::EmptyBasic)
        );
        assert!(nowhere_dense_witness(&basic("w2(0)"), 3, GroundSet::Naturals).is_err());
    }

    #[test]
    fn dual_for_w1() {
        let b = basic("v(1,0) & w2(2)");
        let w = nowhere_dense_witness_w1(&b, 3, GroundSet::Naturals).unwrap();
        assert_eq!(w.refined, basic("v(1,0) & w2(2) & v(3,4)"));
        assert!(member_basic(&w.member, &w.refined).unwrap());
        assert!(is_empty(&w.refined.with(SubbasicAtom::W1(3)), GroundSet::Naturals).unwrap());
    }

    #[test]
    fn translation_by_permutations() {
        let id = PartialBijection::identity(GroundSet::Finite(3));
        assert_eq!(translate_w1(0, &id).unwrap().y, 0);
        let swap: crate::pbij::Permutation = "[1, 0, 2]".parse().unwrap();
        let r = translate_w1(0, &swap.to_partial()).unwrap();
        assert_eq!((r.y, r.checked), (1, 34));
        assert!(r.holds());
        for p in crate::pbij::Permutation::all(4) {
            for x in 0..4 {
                assert!(translate_w1(x, &p.to_partial()).unwrap().holds());
            }
        }
        let nat: PartialBijection = "{0->1, 1->0}; id from 2".parse().unwrap();
        assert!(translate_w1(0, &nat).unwrap().holds());
        assert_eq!(translate_w1(0, &"{0->1}".parse().unwrap()), Err(Error::NotTotal));
    }

    #[test]
    fn cylinders_match_images_on_four_points() {
        let g = GroundSet::Finite(4);
        let all = enumerate_all(4).unwrap();
        let (dom, im) = dom_im_image_of_basic(&basic("v(0,1)"), g).unwrap();
        assert_eq!(dom.required, BTreeSet::from([0]));
        assert_eq!(im.required, BTreeSet::from([1]));
        let (dom, im) = dom_im_image_of_basic(&basic("w1(0) & w2(1)"), g).unwrap();
        assert_eq!(dom.forbidden, BTreeSet::from([0]));
        assert_eq!(im.forbidden, BTreeSet::from([1]));

        let subsets: Vec<SetDescriptor> = (0u32..16)
            .map(|m| SetDescriptor::finite((0..4).filter(|i| m >> i & 1 == 1)))
            .collect();
        for s in [
            "v(0,1)",
            "w1(0) & w2(1)",
            "v(0,1) & w2(2) & w2(3)",
            "w2(0) & w2(1)",
            "v(2,2) & w1(0)",
        ] {
            let b = basic(s);
            let (dom, im) = dom_im_image_of_basic(&b, g).unwrap();
            let members: Vec<_> = all.iter().filter(|f| member_basic(f, &b).unwrap()).collect();
            for a in &subsets {
                assert_eq!(dom.contains(a), members.iter().any(|f| f.dom() == *a), "{s} dom {a}");
                assert_eq!(im.contains(a), members.iter().any(|f| f.im() == *a), "{s} im {a}");
            }
        }
    }
}
