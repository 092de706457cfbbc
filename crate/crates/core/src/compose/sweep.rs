use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::universe::Universe;
use super::{atom_compose, compose_rule, lf_image, rf_image, ComposeResult, ComposeRule};
use crate::error::Result;
use crate::pbij::Point;
use crate::topo::{BasicOpenSet, SubbasicAtom};

fn atoms_over(n: u32) -> Vec<SubbasicAtom> {
    let mut atoms: Vec<SubbasicAtom> = (0..n)
        .flat_map(|x| (0..n).map(move |y| SubbasicAtom::V(x, y)))
        .collect();
    atoms.extend((0..n).map(SubbasicAtom::W1));
    atoms.extend((0..n).map(SubbasicAtom::W2));
    atoms
}

/// Member sets of every `v`, `w1`, `w2` atom over the universe's ground set.
struct AtomSets(HashMap<SubbasicAtom, FixedBitSet>);

impl AtomSets {
    fn new(u: &Universe) -> Result<Self> {
        atoms_over(u.n())
            .into_iter()
            .map(|a| Ok((a, u.basic_set(&BasicOpenSet::atom(a))?)))
            .collect::<Result<_>>()
            .map(AtomSets)
    }

    fn get(&self, a: &SubbasicAtom) -> &FixedBitSet {
        &self.0[a]
    }

    fn basic(&self, u: &Universe, b: &BasicOpenSet) -> FixedBitSet {
        let mut s = u.full_set();
        for l in b.literals() {
            if l.positive {
                s.intersect_with(self.get(&l.atom));
            } else {
                s.difference_with(self.get(&l.atom));
            }
        }
        s
    }

    fn result(&self, u: &Universe, r: &ComposeResult) -> FixedBitSet {
        match r.resolve() {
            ComposeResult::Atom(a) => self.get(&a).clone(),
            ComposeResult::ComplementOfAtom(a) => {
                let mut s = u.full_set();
                s.difference_with(self.get(&a));
                s
            }
            ComposeResult::Intersection(a, b) => {
                let mut s = self.get(&a).clone();
                s.intersect_with(self.get(&b));
                s
            }
            ComposeResult::WholeSpace => u.full_set(),
            ComposeResult::InverseWrapped(_) => unreachable!("resolved"),
        }
    }
}

/// Per-identity outcome of the exhaustive sweep over one ground set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ItemSlack {
    pub item: u8,
    pub n: u32,
    pub instances: usize,
    /// Atom pairs where the set-wise composite is not contained in the symbolic result.
    pub inclusion_failures: usize,
    pub first_inclusion_failure: Option<String>,
    /// Least `s` such that the two sides agree on every `f` with `|dom f| <= n - s`.
    pub slack: u32,
    pub slack_witness: Option<String>,
}

/// Checks `a ∘ b ⊆ atom_compose(a, b)` for all atom pairs over `Finite(n)` and
/// measures how far the reverse inclusion falls short.
pub fn inclusion_and_slack(n: u32) -> Result<Vec<ItemSlack>> {
    let u = Universe::new(n)?;
    let sets = AtomSets::new(&u)?;
    let atoms = atoms_over(n);
    let mut rows: BTreeMap<ComposeRule, ItemSlack> = ComposeRule::ALL
        .iter()
        .map(|&r| {
            let row = ItemSlack {
                item: r.number(),
                n,
                instances: 0,
                inclusion_failures: 0,
                first_inclusion_failure: None,
                slack: 0,
                slack_witness: None,
            };
            (r, row)
        })
        .collect();
    for (a, b) in atoms.iter().cartesian_product(&atoms) {
        let rule = compose_rule(a, b)?;
        let result = atom_compose(a, b)?;
        let lhs = u.compose_sets(sets.get(a), sets.get(b));
        let rhs = sets.result(&u, &result);
        let row = rows.get_mut(&rule).expect("every rule has a row");
        row.instances += 1;
        if !lhs.is_subset(&rhs) {
            row.inclusion_failures += 1;
            if row.first_inclusion_failure.is_none() {
                let f = lhs.difference(&rhs).next().expect("not a subset");
                row.first_inclusion_failure = Some(format!("{a} o {b} contains {} outside {result}", u.element(f)));
            }
        }
        let missing = rhs.difference(&lhs).min_by_key(|&i| (u.element(i).pairs().len(), i));
        if let Some(i) = missing {
            let s = n - u.element(i).pairs().len() as u32 + 1;
            if s > row.slack {
                row.slack = s;
                row.slack_witness = Some(format!("{} in {} but not in {a} o {b}", u.element(i), result.resolve()));
            }
        }
    }
    Ok(rows.into_values().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlackRow {
    pub item: u8,
    pub identity: String,
    /// Keyed by `|X|`.
    pub slack: BTreeMap<String, u32>,
}

/// The golden table: minimal verified slack per identity and ground size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlackTable {
    pub schema: u32,
    pub items: Vec<SlackRow>,
}

pub const SLACK_SIZES: [u32; 2] = [3, 4];

pub fn slack_table() -> Result<SlackTable> {
    let mut items: Vec<SlackRow> = ComposeRule::ALL
        .iter()
        .map(|r| SlackRow {
            item: r.number(),
            identity: r.identity().to_string(),
            slack: BTreeMap::new(),
        })
        .collect();
    for n in SLACK_SIZES {
        for row in inclusion_and_slack(n)? {
            items[row.item as usize - 1].slack.insert(n.to_string(), row.slack);
        }
    }
    Ok(SlackTable { schema: 1, items })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleReport {
    pub n: u32,
    pub triples: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

/// `A ∘ (B ∩ C) ⊆ (A ∘ B) ∩ (A ∘ C)` for all subbasic `A`, `B`, `C`.
pub fn intersection_lemma(n: u32) -> Result<TripleReport> {
    let u = Universe::new(n)?;
    let sets = AtomSets::new(&u)?;
    let atoms = atoms_over(n);
    let outcomes: Vec<Option<String>> = atoms
        .par_iter()
        .flat_map_iter(|a| {
            let (u, sets, atoms) = (&u, &sets, &atoms);
            atoms.iter().cartesian_product(atoms).map(move |(b, c)| {
                let mut bc = sets.get(b).clone();
                bc.intersect_with(sets.get(c));
                let lhs = u.compose_sets(sets.get(a), &bc);
                let mut rhs = u.compose_sets(sets.get(a), sets.get(b));
                rhs.intersect_with(&u.compose_sets(sets.get(a), sets.get(c)));
                (!lhs.is_subset(&rhs)).then(|| format!("{a} o ({b} & {c})"))
            })
        })
        .collect();
    let failures: Vec<String> = outcomes.into_iter().flatten().collect();
    Ok(TripleReport {
        n,
        triples: atoms.len().pow(3),
        failures: failures.len(),
        first_failure: failures.into_iter().next(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpenMapReport {
    pub n: u32,
    pub basics: usize,
    pub empty_basics: usize,
    pub anchors: usize,
    pub checks: usize,
    pub right_failures: usize,
    pub left_failures: usize,
    pub first_failure: Option<String>,
}

fn subsets_up_to_two(atoms: Vec<SubbasicAtom>) -> Vec<Vec<SubbasicAtom>> {
    (0..=2).flat_map(|k| atoms.iter().copied().combinations(k)).collect()
}

/// All-positive basics with at most two atoms of each kind over the given points.
pub fn small_basics(points: Point) -> Vec<BasicOpenSet> {
    let vs = subsets_up_to_two(
        (0..points)
            .flat_map(|x| (0..points).map(move |y| SubbasicAtom::V(x, y)))
            .collect(),
    );
    let w1s = subsets_up_to_two((0..points).map(SubbasicAtom::W1).collect());
    let w2s = subsets_up_to_two((0..points).map(SubbasicAtom::W2).collect());
    itertools::iproduct!(&vs, &w1s, &w2s)
        .map(|(v, a, b)| BasicOpenSet::from_atoms(v.iter().chain(a).chain(b).copied()))
        .collect()
}

/// `U ∘ f = Q ∩ R_f` and `f ∘ U = Q' ∩ L_f` for every small basic `U` and every `f`.
pub fn open_map_sweep(n: u32) -> Result<OpenMapReport> {
    let u = Universe::new(n)?;
    let sets = AtomSets::new(&u)?;
    let full = u.full_set();
    let right: Vec<FixedBitSet> = (0..u.len()).map(|f| u.right_translate(&full, f)).collect();
    let left: Vec<FixedBitSet> = (0..u.len()).map(|f| u.left_translate(f, &full)).collect();
    let basics = small_basics(n);
    let per_basic: Vec<(bool, usize, usize, Option<String>)> = basics
        .par_iter()
        .map(|b| -> Result<_> {
            let us = sets.basic(&u, b);
            let (mut rf, mut lf, mut first) = (0, 0, None);
            for (i, f) in u.elements().iter().enumerate() {
                let mut q = sets.basic(&u, &rf_image(b, f)?);
                q.intersect_with(&right[i]);
                if q != u.right_translate(&us, i) {
                    rf += 1;
                    first.get_or_insert_with(|| format!("({b}) o {f}"));
                }
                let mut q = sets.basic(&u, &lf_image(b, f)?);
                q.intersect_with(&left[i]);
                if q != u.left_translate(i, &us) {
                    lf += 1;
                    first.get_or_insert_with(|| format!("{f} o ({b})"));
                }
            }
            Ok((us.is_clear(), rf, lf, first))
        })
        .collect::<Result<_>>()?;
    Ok(OpenMapReport {
        n,
        basics: basics.len(),
        empty_basics: per_basic.iter().filter(|r| r.0).count(),
        anchors: u.len(),
        checks: 2 * basics.len() * u.len(),
        right_failures: per_basic.iter().map(|r| r.1).sum(),
        left_failures: per_basic.iter().map(|r| r.2).sum(),
        first_failure: per_basic.into_iter().find_map(|r| r.3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusions_hold_on_three_points() {
        for row in inclusion_and_slack(3).unwrap() {
            assert_eq!(row.inclusion_failures, 0, "{row:?}");
        }
    }

    #[test]
    fn basic_count() {
        assert_eq!(small_basics(4).len(), 137 * 11 * 11);
    }

    #[test]
    fn open_map_on_three_points() {
        let r = open_map_sweep(3).unwrap();
        assert_eq!((r.right_failures, r.left_failures), (0, 0), "{r:?}");
    }

    #[test]
    fn intersection_lemma_on_two_points() {
        assert_eq!(intersection_lemma(2).unwrap().failures, 0);
    }
}
