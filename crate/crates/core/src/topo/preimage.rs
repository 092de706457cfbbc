use std::fmt;

use super::atom::{BasicOpenSet, SubbasicAtom};
use super::member::member_basic;
use crate::error::{Error, Result};
use crate::pbij::{GroundSet, PartialBijection};

/// A finite union of products `B1 × B2` of basic sets, describing a set of pairs `(f, g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairExpr {
    pub terms: Vec<(BasicOpenSet, BasicOpenSet)>,
}

impl PairExpr {
    pub fn contains(&self, f: &PartialBijection, g: &PartialBijection) -> Result<bool> {
        for (left, right) in &self.terms {
            if member_basic(f, left)? && member_basic(g, right)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl fmt::Display for PairExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("none");
        }
        for (i, (l, r)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "({l}) x ({r})")?;
        }
        Ok(())
    }
}

fn symbolic(atom: &SubbasicAtom) -> String {
    match *atom {
        SubbasicAtom::V(x, y) => format!("union over z of v(z,{y}) x v({x},z)"),
        SubbasicAtom::W1(x) => format!("(all x w1({x})) | union over z of w1(z) x v({x},z)"),
        SubbasicAtom::W2(y) => format!("(w2({y}) x all) | union over z of v(z,{y}) x w2(z)"),
        SubbasicAtom::U(x, y) => format!("u({x},{y})"),
    }
}

/// `c^-1(atom)` for the composition map `c(f, g) = f ∘ g`, as a union of products.
pub fn preimage_compose(atom: &SubbasicAtom, ground: GroundSet) -> Result<PairExpr> {
    if atom.is_permutation_atom() {
        return Err(Error::Inadmissible {
            atom: atom.to_string(),
            reason: "composition preimages are taken in I(X)".into(),
        });
    }
    atom.check_ground(ground)?;
    let Some(n) = ground.size() else {
        return Err(Error::InfiniteUnion {
            symbolic: symbolic(atom),
        });
    };
    let one = BasicOpenSet::atom;
    let whole = BasicOpenSet::whole;
    let terms = match *atom {
        SubbasicAtom::V(x, y) => (0..n)
            .map(|z| (one(SubbasicAtom::V(z, y)), one(SubbasicAtom::V(x, z))))
            .collect(),
        SubbasicAtom::W1(x) => std::iter::once((whole(), one(SubbasicAtom::W1(x))))
            .chain((0..n).map(|z| (one(SubbasicAtom::W1(z)), one(SubbasicAtom::V(x, z)))))
            .collect(),
        SubbasicAtom::W2(y) => std::iter::once((one(SubbasicAtom::W2(y)), whole()))
            .chain((0..n).map(|z| (one(SubbasicAtom::V(z, y)), one(SubbasicAtom::W2(z)))))
            .collect(),
        SubbasicAtom::U(..) => unreachable!("rejected above"),
    };
    Ok(PairExpr { terms })
}

/// `i^-1(atom)` for inversion `i(f) = f^-1`.
pub fn preimage_inverse(atom: &SubbasicAtom) -> SubbasicAtom {
    atom.inverted()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbij::enumerate_all;
    use crate::topo::member::atom_member;

    #[test]
    fn composition_preimages_are_exact_on_three_points() {
        let g3 = GroundSet::Finite(3);
        let all = enumerate_all(3).unwrap();
        for x in 0..3 {
            let mut atoms = vec![SubbasicAtom::W1(x), SubbasicAtom::W2(x)];
            atoms.extend((0..3).map(|y| SubbasicAtom::V(x, y)));
            for atom in atoms {
                let pre = preimage_compose(&atom, g3).unwrap();
                for f in &all {
                    for g in &all {
                        let fg = f.compose(g).unwrap();
                        assert_eq!(pre.contains(f, g).unwrap(), atom_member(&fg, &atom).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn infinite_ground_reports_symbolic_form() {
        let err = preimage_compose(&SubbasicAtom::V(0, 1), GroundSet::Naturals).unwrap_err();
        assert!(matches!(err, Error::InfiniteUnion { ref symbolic } if symbolic.contains("v(z,1)")));
    }

    #[test]
    fn inversion_preimages() {
        assert_eq!(preimage_inverse(&SubbasicAtom::V(0, 1)), SubbasicAtom::V(1, 0));
        assert_eq!(preimage_inverse(&SubbasicAtom::W1(2)), SubbasicAtom::W2(2));
        assert_eq!(preimage_inverse(&SubbasicAtom::W2(2)), SubbasicAtom::W1(2));
    }
}
