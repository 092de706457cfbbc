//! Composition of subbasic sets, the cosets `R_f` and `L_f`, and the
//! open-map construction for right and left translations.

mod sweep;
mod universe;

use std::fmt;

use serde::Serialize;

pub use sweep::{
    inclusion_and_slack, intersection_lemma, open_map_sweep, slack_table, small_basics, ItemSlack, OpenMapReport,
    SlackRow, SlackTable, TripleReport, SLACK_SIZES,
};
pub use universe::Universe;

use crate::error::{Error, Result};
use crate::pbij::{GroundSet, PartialBijection, SetDescriptor};
use crate::topo::{is_empty, BasicOpenSet, Literal, OpenSetExpr, SubbasicAtom};

/// The eleven composition identities, numbered as listed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ComposeRule {
    VThroughV,
    VMissV,
    W1W1,
    W2W2,
    W2W1,
    W1W2,
    W1AfterVHit,
    W1AfterVMiss,
    VAfterW1,
    W2AfterV,
    VAfterW2,
}

impl ComposeRule {
    pub const ALL: [ComposeRule; 11] = [
        ComposeRule::VThroughV,
        ComposeRule::VMissV,
        ComposeRule::W1W1,
        ComposeRule::W2W2,
        ComposeRule::W2W1,
        ComposeRule::W1W2,
        ComposeRule::W1AfterVHit,
        ComposeRule::W1AfterVMiss,
        ComposeRule::VAfterW1,
        ComposeRule::W2AfterV,
        ComposeRule::VAfterW2,
    ];

    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn identity(self) -> &'static str {
        match self {
            ComposeRule::VThroughV => "v(x,y) o v(z,x) = v(z,y)",
            ComposeRule::VMissV => "v(x,y) o v(z,w) = I \\ v(z,y), w != x",
            ComposeRule::W1W1 => "w1(x) o w1(y) = w1(y)",
            ComposeRule::W2W2 => "w2(x) o w2(y) = w2(x)",
            ComposeRule::W2W1 => "w2(x) o w1(y) = w2(x) n w1(y)",
            ComposeRule::W1W2 => "w1(x) o w2(y) = I",
            ComposeRule::W1AfterVHit => "w1(y) o v(x,y) = w1(x)",
            ComposeRule::W1AfterVMiss => "w1(z) o v(x,y) = I, z != y",
            ComposeRule::VAfterW1 => "v(x,y) o w1(z) = w1(z)",
            ComposeRule::W2AfterV => "w2(z) o v(x,y) = [v(y,x) o w1(z)]^-1",
            ComposeRule::VAfterW2 => "v(x,y) o w2(z) = [w1(z) o v(y,x)]^-1",
        }
    }
}

impl fmt::Display for ComposeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.number(), self.identity())
    }
}

/// The symbolic value of `a ∘ b` for subbasic `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ComposeResult {
    Atom(SubbasicAtom),
    ComplementOfAtom(SubbasicAtom),
    Intersection(SubbasicAtom, SubbasicAtom),
    WholeSpace,
    InverseWrapped(Box<ComposeResult>),
}

impl ComposeResult {
    /// Pushes every inversion down to the atoms.
    pub fn resolve(&self) -> ComposeResult {
        match self {
            ComposeResult::InverseWrapped(inner) => inner.resolve().invert(),
            other => other.clone(),
        }
    }

    fn invert(&self) -> ComposeResult {
        match self {
            ComposeResult::Atom(a) => ComposeResult::Atom(a.inverted()),
            ComposeResult::ComplementOfAtom(a) => ComposeResult::ComplementOfAtom(a.inverted()),
            ComposeResult::Intersection(a, b) => ComposeResult::Intersection(a.inverted(), b.inverted()),
            ComposeResult::WholeSpace => ComposeResult::WholeSpace,
            ComposeResult::InverseWrapped(inner) => inner.resolve(),
        }
    }

    /// The result as an open-set expression; complements stay as negative literals.
    pub fn to_expr(&self) -> OpenSetExpr {
        match self.resolve() {
            ComposeResult::Atom(a) => OpenSetExpr::atom(a),
            ComposeResult::ComplementOfAtom(a) => OpenSetExpr::basic(BasicOpenSet::new([Literal::complement(a)])),
            ComposeResult::Intersection(a, b) => OpenSetExpr::basic(BasicOpenSet::from_atoms([a, b])),
            ComposeResult::WholeSpace => OpenSetExpr::WholeSpace,
            ComposeResult::InverseWrapped(_) => unreachable!("resolved"),
        }
    }

    /// `I \ v(x,y) = w1(x) ∪ ⋃_{z != y} v(x,z)` over a finite ground set.
    pub fn expand_positive(&self, ground: GroundSet) -> Result<OpenSetExpr> {
        match self.resolve() {
            ComposeResult::ComplementOfAtom(SubbasicAtom::V(x, y)) => {
                let Some(n) = ground.size() else {
                    return Err(Error::InfiniteUnion {
                        symbolic: format!("w1({x}) | v({x},z) for all z != {y}"),
                    });
                };
                Ok(OpenSetExpr::union_of(
                    std::iter::once(BasicOpenSet::atom(SubbasicAtom::W1(x))).chain(
                        (0..n)
                            .filter(|&z| z != y)
                            .map(|z| BasicOpenSet::atom(SubbasicAtom::V(x, z))),
                    ),
                ))
            }
            other => Ok(other.to_expr()),
        }
    }
}

impl fmt::Display for ComposeResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComposeResult::Atom(a) => write!(f, "{a}"),
            ComposeResult::ComplementOfAtom(a) => write!(f, "I \\ {a}"),
            ComposeResult::Intersection(a, b) => write!(f, "{a} & {b}"),
            ComposeResult::WholeSpace => f.write_str("I"),
            ComposeResult::InverseWrapped(inner) => write!(f, "[{inner}]^-1"),
        }
    }
}

fn no_permutation_atoms(a: &SubbasicAtom) -> Result<()> {
    if a.is_permutation_atom() {
        return Err(Error::Inadmissible {
            atom: a.to_string(),
            reason: "composition identities cover v, w1 and w2".into(),
        });
    }
    Ok(())
}

/// Which identity governs `a ∘ b`.
pub fn compose_rule(a: &SubbasicAtom, b: &SubbasicAtom) -> Result<ComposeRule> {
    use SubbasicAtom::*;
    no_permutation_atoms(a)?;
    no_permutation_atoms(b)?;
    Ok(match (*a, *b) {
        (V(x, _), V(_, w)) if w == x => ComposeRule::VThroughV,
        (V(..), V(..)) => ComposeRule::VMissV,
        (W1(_), W1(_)) => ComposeRule::W1W1,
        (W2(_), W2(_)) => ComposeRule::W2W2,
        (W2(_), W1(_)) => ComposeRule::W2W1,
        (W1(_), W2(_)) => ComposeRule::W1W2,
        (W1(z), V(_, y)) if z == y => ComposeRule::W1AfterVHit,
        (W1(_), V(..)) => ComposeRule::W1AfterVMiss,
        (V(..), W1(_)) => ComposeRule::VAfterW1,
        (W2(_), V(..)) => ComposeRule::W2AfterV,
        (V(..), W2(_)) => ComposeRule::VAfterW2,
        _ => unreachable!("u-atoms rejected"),
    })
}

/// `a ∘ b = {g ∘ h : g in a, h in b}` symbolically.
pub fn atom_compose(a: &SubbasicAtom, b: &SubbasicAtom) -> Result<ComposeResult> {
    use SubbasicAtom::*;
    let rule = compose_rule(a, b)?;
    Ok(match (rule, *a, *b) {
        (ComposeRule::VThroughV, V(_, y), V(z, _)) => ComposeResult::Atom(V(z, y)),
        (ComposeRule::VMissV, V(_, y), V(z, _)) => ComposeResult::ComplementOfAtom(V(z, y)),
        (ComposeRule::W1W1, _, W1(y)) => ComposeResult::Atom(W1(y)),
        (ComposeRule::W2W2, W2(x), _) => ComposeResult::Atom(W2(x)),
        (ComposeRule::W2W1, W2(x), W1(y)) => ComposeResult::Intersection(W2(x), W1(y)),
        (ComposeRule::W1W2, ..) | (ComposeRule::W1AfterVMiss, ..) => ComposeResult::WholeSpace,
        (ComposeRule::W1AfterVHit, _, V(x, _)) => ComposeResult::Atom(W1(x)),
        (ComposeRule::VAfterW1, _, W1(z)) => ComposeResult::Atom(W1(z)),
        (ComposeRule::W2AfterV, W2(z), V(x, y)) => {
            ComposeResult::InverseWrapped(Box::new(atom_compose(&V(y, x), &W1(z))?))
        }
        (ComposeRule::VAfterW2, V(x, y), W2(z)) => {
            ComposeResult::InverseWrapped(Box::new(atom_compose(&W1(z), &V(y, x))?))
        }
        _ => unreachable!("rule and atom kinds agree"),
    })
}

/// `{g ∘ h : g in s1, h in s2}` by enumeration over a finite ground set.
pub fn setwise_compose_oracle(s1: &OpenSetExpr, s2: &OpenSetExpr, ground: GroundSet) -> Result<Vec<PartialBijection>> {
    let Some(n) = ground.size() else {
        return Err(Error::InfiniteUnion {
            symbolic: format!("({s1}) o ({s2}) over {ground}"),
        });
    };
    let u = Universe::new(n)?;
    let set = u.compose_sets(&u.member_set(s1)?, &u.member_set(s2)?);
    Ok(u.to_elements(&set))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CosetSide {
    /// `R_f = {g ∘ f}`.
    Right,
    /// `L_f = {f ∘ g}`.
    Left,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CosetDescriptor {
    pub side: CosetSide,
    pub anchor: PartialBijection,
}

impl CosetDescriptor {
    pub fn right(anchor: PartialBijection) -> Self {
        CosetDescriptor {
            side: CosetSide::Right,
            anchor,
        }
    }

    pub fn left(anchor: PartialBijection) -> Self {
        CosetDescriptor {
            side: CosetSide::Left,
            anchor,
        }
    }
}

pub fn coset_member(h: &PartialBijection, c: &CosetDescriptor) -> Result<bool> {
    let f = &c.anchor;
    if h.ground() != f.ground() {
        return Err(Error::GroundMismatch {
            left: h.ground(),
            right: f.ground(),
        });
    }
    Ok(match c.side {
        CosetSide::Right => h.dom().is_subset(&f.dom()) && h.compose(&f.inverse())?.compose(f)? == *h,
        CosetSide::Left => h.im().is_subset(&f.im()) && f.compose(&f.inverse().compose(h)?)? == *h,
    })
}

fn require_positive(u: &BasicOpenSet) -> Result<()> {
    match u
        .literals()
        .iter()
        .find(|l| !l.positive || l.atom.is_permutation_atom())
    {
        Some(l) => Err(Error::Inadmissible {
            atom: l.to_string(),
            reason: "the translation image is built for all-positive v/w1/w2 basics".into(),
        }),
        None => Ok(()),
    }
}

/// The basic `Q` with `U ∘ f = Q ∩ R_f`.
///
/// For nonempty `U` this is the atom-wise formula. An empty `U` is returned
/// unchanged, since the formula can describe a set meeting `R_f`.
pub fn rf_image(u: &BasicOpenSet, f: &PartialBijection) -> Result<BasicOpenSet> {
    use SubbasicAtom::*;
    require_positive(u)?;
    u.check_ground(f.ground())?;
    if is_empty(u, f.ground())? {
        return Ok(u.clone());
    }
    let atoms = u.atoms().map(|a| match a {
        V(x, y) => Some(match f.preimage(x) {
            Some(p) => V(p, y),
            None => W2(y),
        }),
        W1(z) => f.preimage(z).map(W1),
        W2(w) => Some(W2(w)),
        U(..) => unreachable!("rejected above"),
    });
    Ok(BasicOpenSet::from_atoms(atoms.flatten()))
}

/// The basic `Q` with `f ∘ U = Q ∩ L_f`, by inversion.
pub fn lf_image(u: &BasicOpenSet, f: &PartialBijection) -> Result<BasicOpenSet> {
    Ok(rf_image(&u.inverted(), &f.inverse())?.inverted())
}

/// `f ∘ 1_A`.
pub fn restrict_map(f: &PartialBijection, a: &SetDescriptor) -> Result<PartialBijection> {
    f.compose(&PartialBijection::identity_on(f.ground(), a)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbij::enumerate_all;
    use crate::topo::member;
    use SubbasicAtom::*;

    fn fin(n: u32, s: &str) -> PartialBijection {
        PartialBijection::parse(s, GroundSet::Finite(n)).unwrap()
    }

    #[test]
    fn listed_identities() {
        assert_eq!(atom_compose(&V(0, 1), &V(2, 0)).unwrap(), ComposeResult::Atom(V(2, 1)));
        assert_eq!(atom_compose(&W1(0), &W2(1)).unwrap(), ComposeResult::WholeSpace);
        assert_eq!(
            atom_compose(&W2(0), &W1(1)).unwrap(),
            ComposeResult::Intersection(W2(0), W1(1))
        );
        assert_eq!(
            atom_compose(&W2(3), &V(0, 1)).unwrap().resolve(),
            ComposeResult::Atom(W2(3))
        );
        assert_eq!(
            atom_compose(&V(0, 1), &W2(0)).unwrap().resolve(),
            ComposeResult::Atom(W2(1))
        );
        assert_eq!(
            atom_compose(&V(0, 1), &W2(2)).unwrap().resolve(),
            ComposeResult::WholeSpace
        );
        assert!(atom_compose(&U(0, 1), &V(0, 1)).is_err());
    }

    #[test]
    fn only_items_ten_and_eleven_wrap() {
        let atoms: Vec<SubbasicAtom> = (0..3)
            .flat_map(|x| [W1(x), W2(x)].into_iter().chain((0..3).map(move |y| V(x, y))))
            .collect();
        for a in &atoms {
            for b in &atoms {
                let rule = compose_rule(a, b).unwrap();
                let wrapped = matches!(atom_compose(a, b).unwrap(), ComposeResult::InverseWrapped(_));
                assert_eq!(wrapped, rule.number() >= 10, "{a} o {b}");
            }
        }
    }

    #[test]
    fn complement_expansion_matches_negative_literal() {
        let r = ComposeResult::ComplementOfAtom(V(1, 2));
        let expanded = r.expand_positive(GroundSet::Finite(3)).unwrap();
        for f in enumerate_all(3).unwrap() {
            assert_eq!(member(&f, &r.to_expr()).unwrap(), member(&f, &expanded).unwrap());
        }
        assert!(r.expand_positive(GroundSet::Naturals).is_err());
    }

    #[test]
    fn oracle_examples() {
        let g = GroundSet::Finite(3);
        let e = OpenSetExpr::basic(BasicOpenSet::from_atoms((0..3).map(W1)));
        assert_eq!(
            setwise_compose_oracle(&e, &e, g).unwrap(),
            vec![PartialBijection::empty(g)]
        );
        let lhs = setwise_compose_oracle(&OpenSetExpr::atom(V(0, 1)), &OpenSetExpr::atom(V(2, 0)), g).unwrap();
        let rhs: Vec<_> = enumerate_all(3)
            .unwrap()
            .into_iter()
            .filter(|f| f.eval(2) == Some(1))
            .collect();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn coset_membership_matches_enumeration() {
        let all = enumerate_all(3).unwrap();
        for f in &all {
            let right: Vec<_> = all.iter().map(|g| g.compose(f).unwrap()).collect();
            let left: Vec<_> = all.iter().map(|g| f.compose(g).unwrap()).collect();
            for h in &all {
                assert_eq!(
                    coset_member(h, &CosetDescriptor::right(f.clone())).unwrap(),
                    right.contains(h)
                );
                assert_eq!(
                    coset_member(h, &CosetDescriptor::left(f.clone())).unwrap(),
                    left.contains(h)
                );
            }
        }
    }

    #[test]
    fn q_examples() {
        let u = BasicOpenSet::atom(V(0, 1));
        assert_eq!(rf_image(&u, &fin(3, "{2->0}")).unwrap(), BasicOpenSet::atom(V(2, 1)));
        assert_eq!(rf_image(&u, &fin(3, "{}")).unwrap(), BasicOpenSet::atom(W2(1)));
        assert_eq!(
            rf_image(&BasicOpenSet::whole(), &fin(3, "{1->2}")).unwrap(),
            BasicOpenSet::whole()
        );
        let empty = BasicOpenSet::from_atoms([V(0, 1), V(0, 2)]);
        assert_eq!(rf_image(&empty, &fin(3, "{}")).unwrap(), empty);
        assert!(rf_image(&BasicOpenSet::new([Literal::complement(V(0, 1))]), &fin(3, "{}")).is_err());
    }

    #[test]
    fn translation_images_match_the_oracle() {
        let uni = Universe::new(3).unwrap();
        let u = BasicOpenSet::atom(V(0, 1));
        let us = uni.basic_set(&u).unwrap();
        for (i, f) in uni.elements().iter().enumerate() {
            let right = uni.right_translate(&us, i);
            let mut q = uni.basic_set(&rf_image(&u, f).unwrap()).unwrap();
            q.intersect_with(&uni.right_translate(&uni.full_set(), i));
            assert_eq!(right, q, "right, f = {f}");

            let left = uni.left_translate(i, &us);
            let mut q = uni.basic_set(&lf_image(&u, f).unwrap()).unwrap();
            q.intersect_with(&uni.left_translate(i, &uni.full_set()));
            assert_eq!(left, q, "left, f = {f}");
        }
    }

    #[test]
    fn restriction() {
        let f = fin(4, "{0->1, 2->3}");
        assert_eq!(restrict_map(&f, &SetDescriptor::finite([0])).unwrap(), fin(4, "{0->1}"));
        assert_eq!(restrict_map(&f, &SetDescriptor::finite([0, 2, 3])).unwrap(), f);
        for f in enumerate_all(3).unwrap() {
            for mask in 0u32..8 {
                let a = SetDescriptor::finite((0..3).filter(|i| mask >> i & 1 == 1));
                let r = restrict_map(&f, &a).unwrap();
                let anchor = PartialBijection::identity_on(GroundSet::Finite(3), &a).unwrap();
                assert!(coset_member(&r, &CosetDescriptor::right(anchor)).unwrap());
            }
        }
    }
}
