use std::collections::BTreeMap;

use super::atom::{BasicOpenSet, Literal, OpenSetExpr, SubbasicAtom};
use crate::error::{Error, Result};
use crate::pbij::{GroundSet, PartialBijection, Permutation, Point};

fn inadmissible(atom: &SubbasicAtom, reason: &str) -> Error {
    Error::Inadmissible {
        atom: atom.to_string(),
        reason: reason.into(),
    }
}

pub fn atom_member(f: &PartialBijection, atom: &SubbasicAtom) -> Result<bool> {
    Ok(match *atom {
        SubbasicAtom::V(x, y) => f.eval(x) == Some(y),
        SubbasicAtom::W1(x) => !f.in_domain(x),
        SubbasicAtom::W2(y) => !f.in_image(y),
        SubbasicAtom::U(..) => {
            return Err(inadmissible(atom, "u-atoms only apply to permutations"));
        }
    })
}

fn literal_member(f: &PartialBijection, l: &Literal) -> Result<bool> {
    Ok(atom_member(f, &l.atom)? == l.positive)
}

pub fn member_basic(f: &PartialBijection, b: &BasicOpenSet) -> Result<bool> {
    for l in b.literals() {
        if !literal_member(f, l)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership of an element of `I(X)` in a symbolic open set.
pub fn member(f: &PartialBijection, expr: &OpenSetExpr) -> Result<bool> {
    for a in expr.atoms() {
        if a.is_permutation_atom() {
            return Err(inadmissible(&a, "u-atoms only apply to permutations"));
        }
    }
    for b in expr.basics() {
        if member_basic(f, &b)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Membership of a permutation of `Y` in an expression over `u`-atoms.
pub fn member_perm(p: &Permutation, expr: &OpenSetExpr) -> Result<bool> {
    let atoms = expr.atoms();
    if let Some(a) = atoms.iter().find(|a| !a.is_permutation_atom()) {
        return Err(inadmissible(a, "only u-atoms apply to permutations"));
    }
    Ok(expr.basics().iter().any(|b| {
        b.literals().iter().all(|l| match l.atom {
            SubbasicAtom::U(x, y) => (x < p.len() && p.eval(x) == y) == l.positive,
            _ => unreachable!("checked above"),
        })
    }))
}

/// The partial map assembled from the `V`-atoms of a basic, when consistent.
fn v_pairs(b: &BasicOpenSet) -> Option<BTreeMap<Point, Point>> {
    let mut forward = BTreeMap::new();
    let mut backward = BTreeMap::new();
    for a in b.atoms() {
        if let SubbasicAtom::V(x, y) = a {
            if *forward.entry(x).or_insert(y) != y || *backward.entry(y).or_insert(x) != x {
                return None;
            }
        }
    }
    Some(forward)
}

fn require_positive(b: &BasicOpenSet) -> Result<()> {
    match b
        .literals()
        .iter()
        .find(|l| !l.positive || l.atom.is_permutation_atom())
    {
        Some(l) => Err(inadmissible(
            &l.atom,
            "emptiness is decided for all-positive v/w1/w2 basics",
        )),
        None => Ok(()),
    }
}

/// A member of an all-positive basic, or `None` when the basic is empty.
///
/// The member, when it exists, is the partial map formed by the `V`-pairs.
pub fn witness(b: &BasicOpenSet, ground: GroundSet) -> Result<Option<PartialBijection>> {
    require_positive(b)?;
    b.check_ground(ground)?;
    let Some(pairs) = v_pairs(b) else {
        return Ok(None);
    };
    let f = PartialBijection::finite(ground, pairs)?;
    Ok(member_basic(&f, b)?.then_some(f))
}

pub fn is_empty(b: &BasicOpenSet, ground: GroundSet) -> Result<bool> {
    Ok(witness(b, ground)?.is_none())
}
