use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;

use super::{lift, pi_image_of_basic, pi_preimage, project, subhom_check, Embedding};
use crate::error::{Error, Result};
use crate::pbij::{enumerate_all, PartialBijection, Permutation, SetDescriptor};
use crate::topo::{atom_member, member_basic, member_perm, BasicOpenSet, SubbasicAtom};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepCount {
    pub checked: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl SweepCount {
    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            self.first_failure.get_or_insert_with(describe);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// `π(lift(g)) = g` for every `g` in `I(X)`.
pub fn lift_sweep(e: &Embedding) -> Result<SweepCount> {
    let mut c = SweepCount::default();
    for g in enumerate_all(e.x_size)? {
        let back = project(&lift(&g, e)?, e)?;
        c.record(back == g, || format!("lift of {g} projects to {back}"));
    }
    Ok(c)
}

/// `π(f)∘π(g) ⊆ π(f∘g)` for every pair of permutations of `Y`.
pub fn subhom_sweep(e: &Embedding) -> Result<SweepCount> {
    let perms = Permutation::all(e.y_size);
    let mut c = SweepCount::default();
    for (f, g) in perms.iter().cartesian_product(&perms) {
        let r = subhom_check(f, g, e)?;
        c.record(r.inclusion, || {
            format!("f = {f}, g = {g}: {} not below {}", r.product, r.projected)
        });
    }
    Ok(c)
}

/// `π(f^-1) = π(f)^-1`.
pub fn inversion_sweep(e: &Embedding) -> Result<SweepCount> {
    let mut c = SweepCount::default();
    for f in Permutation::all(e.y_size) {
        let (a, b) = (project(&f.inverse(), e)?, project(&f, e)?.inverse());
        c.record(a == b, || format!("f = {f}: {a} vs {b}"));
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurjectivityReport {
    pub x_size: u32,
    pub y_size: u32,
    /// Elements of `I(X)` outside the image of `π`.
    pub unreached: Vec<PartialBijection>,
    /// `1_A` for the lower half `A` of an equal split of `X`.
    pub equal_split_target: PartialBijection,
    pub equal_split_reached: bool,
    pub empty_reached: bool,
}

impl SurjectivityReport {
    pub fn onto(&self) -> bool {
        self.unreached.is_empty()
    }
}

/// The image of `π` compared with all of `I(X)`.
pub fn surjectivity_refutation(e: &Embedding) -> Result<SurjectivityReport> {
    let image: BTreeSet<PartialBijection> = Permutation::all(e.y_size)
        .iter()
        .map(|f| project(f, e))
        .collect::<Result<_>>()?;
    let half = SetDescriptor::range(0, e.x_size / 2);
    let target = PartialBijection::identity_on(e.ground(), &half)?;
    let unreached = enumerate_all(e.x_size)?
        .into_iter()
        .filter(|g| !image.contains(g))
        .collect();
    Ok(SurjectivityReport {
        x_size: e.x_size,
        y_size: e.y_size,
        unreached,
        equal_split_reached: image.contains(&target),
        empty_reached: image.contains(&PartialBijection::empty(e.ground())),
        equal_split_target: target,
    })
}

fn atoms_over(n: u32) -> Vec<SubbasicAtom> {
    let mut atoms: Vec<SubbasicAtom> = (0..n)
        .cartesian_product(0..n)
        .map(|(x, y)| SubbasicAtom::V(x, y))
        .collect();
    atoms.extend((0..n).map(SubbasicAtom::W1));
    atoms.extend((0..n).map(SubbasicAtom::W2));
    atoms
}

/// `p in π^-1(a)` iff `π(p) in a`, for every atom over `X` and every `p`.
pub fn pi_preimage_sweep(e: &Embedding) -> Result<SweepCount> {
    let perms = Permutation::all(e.y_size);
    let projected: Vec<PartialBijection> = perms.iter().map(|p| project(p, e)).collect::<Result<_>>()?;
    let mut c = SweepCount::default();
    for atom in atoms_over(e.x_size) {
        let pre = pi_preimage(&atom, e)?;
        for (p, q) in perms.iter().zip(&projected) {
            let ok = member_perm(p, &pre)? == atom_member(q, &atom)?;
            c.record(ok, || format!("{p} against {atom} with preimage {pre}"));
        }
    }
    Ok(c)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PiImageSweep {
    pub basics: usize,
    pub inconsistent: usize,
    /// Basics whose image is exactly the displayed formula.
    pub literal_equal: usize,
    pub literal_unequal: usize,
    /// Images escaping the formula; the inclusion holds when zero.
    pub inclusion_failures: usize,
    /// Basics where the `exact` flag disagrees with the computed image.
    pub exactness_mismatches: usize,
    pub first_gap: Option<String>,
    pub first_failure: Option<String>,
}

impl PiImageSweep {
    pub fn refined_passed(&self) -> bool {
        self.inclusion_failures == 0 && self.exactness_mismatches == 0
    }
}

/// Compares `π(b)` computed over all of `S(Y)` with the image formula, for
/// every basic of at most two `u`-atoms.
pub fn pi_image_sweep(e: &Embedding) -> Result<PiImageSweep> {
    let perms = Permutation::all(e.y_size);
    let projected: Vec<PartialBijection> = perms.iter().map(|p| project(p, e)).collect::<Result<_>>()?;
    let all = enumerate_all(e.x_size)?;
    let atoms: Vec<SubbasicAtom> = (0..e.y_size)
        .cartesian_product(0..e.y_size)
        .map(|(x, y)| SubbasicAtom::U(x, y))
        .collect();
    let mut r = PiImageSweep::default();
    for k in 0..=2 {
        for chosen in atoms.iter().copied().combinations(k) {
            let b = BasicOpenSet::from_atoms(chosen);
            let img = match pi_image_of_basic(&b, e) {
                Ok(img) => img,
                Err(Error::InconsistentPairs(_)) => {
                    r.inconsistent += 1;
                    continue;
                }
                Err(err) => return Err(err),
            };
            r.basics += 1;
            let b_expr = crate::topo::OpenSetExpr::basic(b.clone());
            let mut computed = BTreeSet::new();
            for (p, q) in perms.iter().zip(&projected) {
                if member_perm(p, &b_expr)? {
                    computed.insert(q.clone());
                }
            }
            let mut claimed = BTreeSet::new();
            for h in &all {
                if member_basic(h, &img.basic)? {
                    claimed.insert(h.clone());
                }
            }
            let equal = computed == claimed;
            if equal {
                r.literal_equal += 1;
            } else {
                r.literal_unequal += 1;
                r.first_gap.get_or_insert_with(|| {
                    let h = claimed
                        .difference(&computed)
                        .next()
                        .map_or("?".into(), |h| h.to_string());
                    format!("pi({b}) misses {h} from {}", img.basic)
                });
            }
            if !computed.is_subset(&claimed) {
                r.inclusion_failures += 1;
                r.first_failure
                    .get_or_insert_with(|| format!("pi({b}) escapes {}", img.basic));
            }
            if equal != img.exact {
                r.exactness_mismatches += 1;
                r.first_failure
                    .get_or_insert_with(|| format!("pi({b}): exact flag {} but equality {equal}", img.exact));
            }
        }
    }
    Ok(r)
}
