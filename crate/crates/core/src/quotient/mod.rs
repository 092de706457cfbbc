//! The projection `π : S(Y) → I(X)` for `X = 0..x ⊆ Y = 0..y`, its lift, and
//! the image and preimage formulas for subbasic sets.

mod almost;
mod sweep;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

pub use almost::{almost_convergence, AlmostConvergence, DEFAULT_COFINITE_SETS};
pub use sweep::{
    inversion_sweep, lift_sweep, pi_image_sweep, pi_preimage_sweep, subhom_sweep, surjectivity_refutation,
    PiImageSweep, SurjectivityReport, SweepCount,
};

use crate::error::{Error, Result};
use crate::pbij::{GroundSet, PartialBijection, Permutation, Point};
use crate::topo::{BasicOpenSet, OpenSetExpr, SubbasicAtom};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Embedding {
    pub x_size: u32,
    pub y_size: u32,
}

impl Embedding {
    pub fn new(x_size: u32, y_size: u32) -> Result<Self> {
        if x_size > y_size {
            return Err(Error::InvalidEmbedding { x_size, y_size });
        }
        Ok(Embedding { x_size, y_size })
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet::Finite(self.x_size)
    }

    pub fn in_x(&self, p: Point) -> bool {
        p < self.x_size
    }

    /// `|Y \ X|`.
    pub fn outside(&self) -> u32 {
        self.y_size - self.x_size
    }

    fn check_perm(&self, f: &Permutation) -> Result<()> {
        if f.len() != self.y_size {
            return Err(Error::InvalidPermutation(format!(
                "permutation of {} points, expected {}",
                f.len(),
                self.y_size
            )));
        }
        Ok(())
    }
}

/// `f^ = {(x, f(x)) : x in X, f(x) in X}`.
pub fn project(f: &Permutation, e: &Embedding) -> Result<PartialBijection> {
    e.check_perm(f)?;
    let pairs = (0..e.x_size).map(|x| (x, f.eval(x))).filter(|&(_, y)| e.in_x(y));
    PartialBijection::finite(e.ground(), pairs)
}

/// A permutation of `Y` projecting to `g`, with every free choice made by
/// least available points in increasing order.
pub fn lift(g: &PartialBijection, e: &Embedding) -> Result<Permutation> {
    if g.ground() != e.ground() {
        return Err(Error::GroundMismatch {
            left: g.ground(),
            right: e.ground(),
        });
    }
    if e.x_size > e.outside() {
        return Err(Error::NotSurjective {
            x_size: e.x_size,
            outside: e.outside(),
        });
    }
    let mut images: Vec<Option<Point>> = vec![None; e.y_size as usize];
    for &(x, y) in g.pairs() {
        images[x as usize] = Some(y);
    }
    let outside: Vec<Point> = (e.x_size..e.y_size).collect();
    let undefined: Vec<Point> = (0..e.x_size).filter(|&x| !g.in_domain(x)).collect();
    let unhit: Vec<Point> = (0..e.x_size).filter(|&y| !g.in_image(y)).collect();
    let (c, d) = (&outside[..undefined.len()], &outside[..unhit.len()]);
    for (&x, &y) in undefined.iter().zip(c) {
        images[x as usize] = Some(y);
    }
    for (&x, &y) in d.iter().zip(&unhit) {
        images[x as usize] = Some(y);
    }
    let rest_dom = outside[unhit.len()..].iter();
    let rest_im = outside[undefined.len()..].iter();
    for (&x, &y) in rest_dom.zip(rest_im) {
        images[x as usize] = Some(y);
    }
    Permutation::new(images.into_iter().map(|y| y.expect("every point is routed")).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubhomReport {
    pub product: PartialBijection,
    pub projected: PartialBijection,
    pub inclusion: bool,
    pub equal: bool,
    /// A point of `dom π(f∘g)` outside `dom π(f)∘π(g)`.
    pub witness: Option<Point>,
}

/// Compares `π(f)∘π(g)` with `π(f∘g)`.
pub fn subhom_check(f: &Permutation, g: &Permutation, e: &Embedding) -> Result<SubhomReport> {
    let product = project(f, e)?.compose(&project(g, e)?)?;
    let projected = project(&f.compose(g)?, e)?;
    let inclusion = product.restricts(&projected)?;
    let witness = (0..e.x_size).find(|&x| product.eval(x) != projected.eval(x));
    Ok(SubhomReport {
        equal: witness.is_none(),
        product,
        projected,
        inclusion,
        witness,
    })
}

fn check_atom(atom: &SubbasicAtom, e: &Embedding) -> Result<()> {
    if atom.is_permutation_atom() {
        return Err(Error::Inadmissible {
            atom: atom.to_string(),
            reason: "preimages are taken of v, w1 and w2".into(),
        });
    }
    atom.check_ground(e.ground())
}

/// `π^-1(a)` as a union of `u`-atoms.
pub fn pi_preimage(atom: &SubbasicAtom, e: &Embedding) -> Result<OpenSetExpr> {
    check_atom(atom, e)?;
    let u = |x, y| BasicOpenSet::atom(SubbasicAtom::U(x, y));
    Ok(match *atom {
        SubbasicAtom::V(x, y) => OpenSetExpr::basic(u(x, y)),
        SubbasicAtom::W1(x) => OpenSetExpr::union_of((e.x_size..e.y_size).map(|y| u(x, y))),
        SubbasicAtom::W2(y) => OpenSetExpr::union_of((e.x_size..e.y_size).map(|x| u(x, y))),
        SubbasicAtom::U(..) => unreachable!("checked"),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PiImage {
    pub basic: BasicOpenSet,
    /// Whether `π(b)` is all of `basic`; otherwise it is a proper subset.
    pub exact: bool,
}

/// The `u`-pairs of `b` as a partial injection of `Y`.
pub fn u_pairs(b: &BasicOpenSet, e: &Embedding) -> Result<BTreeMap<Point, Point>> {
    let mut map = BTreeMap::new();
    let mut hit = BTreeSet::new();
    for l in b.literals() {
        let SubbasicAtom::U(x, y) = l.atom else {
            return Err(Error::Inadmissible {
                atom: l.atom.to_string(),
                reason: "images under the projection are taken of u-basics".into(),
            });
        };
        if !l.positive {
            return Err(Error::Inadmissible {
                atom: l.to_string(),
                reason: "complemented atoms are not open in the pointwise topology".into(),
            });
        }
        let ground = GroundSet::Finite(e.y_size);
        ground.check(x)?;
        ground.check(y)?;
        if map.insert(x, y).is_some() || !hit.insert(y) {
            return Err(Error::InconsistentPairs(b.to_string()));
        }
    }
    Ok(map)
}

/// `π(⋂ u(x_i,y_i)) = ⋂ v(x_i,y_i) ∩ ⋂ w1(x_j) ∩ ⋂ w2(y_j)`, split by which
/// coordinates lie in `X`.
///
/// Points of `X` left free by the pairs have to be routed through the free
/// points of `Y \ X`; `exact` records whether there is room for that.
pub fn pi_image_of_basic(b: &BasicOpenSet, e: &Embedding) -> Result<PiImage> {
    let pairs = u_pairs(b, e)?;
    let atoms = pairs.iter().filter_map(|(&x, &y)| match (e.in_x(x), e.in_x(y)) {
        (true, true) => Some(SubbasicAtom::V(x, y)),
        (true, false) => Some(SubbasicAtom::W1(x)),
        (false, true) => Some(SubbasicAtom::W2(y)),
        (false, false) => None,
    });
    let basic = BasicOpenSet::from_atoms(atoms);
    let in_dom = |p: &Point| pairs.contains_key(p);
    let in_im = |p: &Point| pairs.values().any(|v| v == p);
    let x_free_dom = (0..e.x_size).filter(|p| !in_dom(p)).count();
    let x_free_im = (0..e.x_size).filter(|p| !in_im(p)).count();
    let out_free_dom = (e.x_size..e.y_size).filter(|p| !in_dom(p)).count();
    let out_free_im = (e.x_size..e.y_size).filter(|p| !in_im(p)).count();
    Ok(PiImage {
        basic,
        exact: x_free_dom <= out_free_im && x_free_im <= out_free_dom,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbij::enumerate_all;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn projection_examples() {
        let e = Embedding::new(2, 4).unwrap();
        assert_eq!(
            project(&Permutation::identity(4), &e).unwrap().to_string(),
            "{0->0, 1->1}"
        );
        assert_eq!(
            project(&perm("[2, 3, 0, 1]"), &e).unwrap(),
            PartialBijection::empty(e.ground())
        );
        assert_eq!(project(&perm("[1, 0, 2, 3]"), &e).unwrap().to_string(), "{0->1, 1->0}");
        assert!(project(&Permutation::identity(3), &e).is_err());
        assert!(Embedding::new(3, 2).is_err());
    }

    #[test]
    fn lift_example() {
        let e = Embedding::new(3, 6).unwrap();
        let g = PartialBijection::parse("{0->2}", e.ground()).unwrap();
        let f = lift(&g, &e).unwrap();
        assert_eq!(f.to_string(), "[2, 3, 4, 0, 1, 5]");
        assert_eq!(project(&f, &e).unwrap(), g);
        let id = PartialBijection::identity_on(e.ground(), &crate::SetDescriptor::range(0, 3)).unwrap();
        assert_eq!(lift(&id, &e).unwrap(), Permutation::identity(6));
    }

    #[test]
    fn lift_roundtrip_and_refusal() {
        for x in 0..=3 {
            let e = Embedding::new(x, 2 * x).unwrap();
            for g in enumerate_all(x).unwrap() {
                assert_eq!(project(&lift(&g, &e).unwrap(), &e).unwrap(), g);
            }
        }
        let e = Embedding::new(2, 3).unwrap();
        let err = lift(&PartialBijection::empty(e.ground()), &e).unwrap_err();
        assert!(err.to_string().contains("projects to the empty map"));
    }

    #[test]
    fn strict_subhomomorphism() {
        let e = Embedding::new(1, 2).unwrap();
        let swap = perm("[1, 0]");
        let r = subhom_check(&swap, &swap, &e).unwrap();
        assert!(r.inclusion && !r.equal);
        assert_eq!(r.witness, Some(0));
        let id = Permutation::identity(2);
        assert!(subhom_check(&id, &id, &e).unwrap().equal);
    }

    #[test]
    fn preimage_examples() {
        let e = Embedding::new(2, 4).unwrap();
        assert_eq!(
            pi_preimage(&SubbasicAtom::W1(0), &e).unwrap().to_string(),
            "u(0,2) | u(0,3)"
        );
        assert_eq!(
            pi_preimage(&SubbasicAtom::W2(1), &e).unwrap().to_string(),
            "u(2,1) | u(3,1)"
        );
        assert_eq!(pi_preimage(&SubbasicAtom::V(0, 1), &e).unwrap().to_string(), "u(0,1)");
        assert!(pi_preimage(&SubbasicAtom::V(0, 2), &e).is_err());
    }

    #[test]
    fn image_examples() {
        let e = Embedding::new(2, 5).unwrap();
        let img = |s: &str| pi_image_of_basic(&s.parse().unwrap(), &e).unwrap();
        assert_eq!(img("u(0,1)").basic.to_string(), "v(0,1)");
        assert_eq!(img("u(0,3)").basic.to_string(), "w1(0)");
        assert!(img("u(0,3)").exact);
        let tight = img("u(2,3) & u(3,4)");
        assert!(tight.basic.is_whole() && !tight.exact);
        for bad in ["u(0,1) & u(0,2)", "u(0,1) & u(2,1)"] {
            assert!(matches!(
                pi_image_of_basic(&bad.parse().unwrap(), &e),
                Err(Error::InconsistentPairs(_))
            ));
        }
    }
}
