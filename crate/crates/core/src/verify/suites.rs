use std::collections::HashMap;

use itertools::Itertools;
use rayon::prelude::*;

use super::{Bounds, Check, Tally, MAX_N, MAX_TRIPLE_N};
use crate::compose::{
    coset_member, inclusion_and_slack, intersection_lemma, open_map_sweep, CosetDescriptor, SlackTable, Universe,
};
use crate::corpus::corpus;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::metric::{
    cauchy_limit, d_metric, disagreement, eta, inverse_pair_limit, rho, rho_star, CauchyOutcome, MetricKind,
};
use crate::pbij::{
    enumerate_all, symmetric_inverse_order, GroundSet, PartialBijection, Permutation, SetDescriptor, Tail,
};
use crate::quotient::{
    almost_convergence, inversion_sweep, lift_sweep, pi_image_sweep, pi_preimage_sweep, subhom_sweep,
    surjectivity_refutation, Embedding, SweepCount, DEFAULT_COFINITE_SETS,
};
use crate::sequence::{Declared, SequenceSpec};
use crate::topo::{
    atom_member, converges, converges_tau1, converges_tau2, converges_taupp, dom_im_image_of_basic, is_empty, member,
    member_basic, metric_convergence_agrees, nowhere_dense_witness, nowhere_dense_witness_w1, preimage_compose,
    preimage_inverse, separate, translate_w1, witness, BasicOpenSet, OpenSetExpr, SubbasicAtom, TopologyKind,
};

const GOLDEN_SLACK: &str = include_str!("../../golden/slack.json");
const KNOWN_ORDERS: [u64; 6] = [1, 2, 7, 34, 209, 1546];

/// `I(n)` with a composition table computed by `PartialBijection::compose`.
struct Table {
    elems: Vec<PartialBijection>,
    comp: Vec<usize>,
    inv: Vec<usize>,
}

impl Table {
    fn new(n: u32) -> Result<Self> {
        let elems = enumerate_all(n)?;
        let index: HashMap<&PartialBijection, usize> = elems.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let len = elems.len();
        let comp = (0..len * len)
            .into_par_iter()
            .map(|ij| Ok(index[&elems[ij / len].compose(&elems[ij % len])?]))
            .collect::<Result<Vec<_>>>()?;
        let inv = elems.iter().map(|f| index[&f.inverse()]).collect();
        Ok(Table { elems, comp, inv })
    }

    fn len(&self) -> usize {
        self.elems.len()
    }

    fn c(&self, i: usize, j: usize) -> usize {
        self.comp[i * self.len() + j]
    }
}

fn finite_subsets(n: u32) -> Vec<SetDescriptor> {
    (0u32..1 << n)
        .map(|m| SetDescriptor::finite((0..n).filter(|i| m >> i & 1 == 1)))
        .collect()
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

fn on(n: u32) -> String {
    format!("I({n})")
}

pub(super) fn algebra(b: &Bounds) -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let top = b.n.unwrap_or(MAX_N);
    let mut t = Tally::new(
        "enumeration order",
        "|I(n)| = sum_k C(n,k)^2 k!",
        format!("n = 0..={top}"),
    );
    for n in 0..=top {
        let count = enumerate_all(n)?.len() as u64;
        let formula = symmetric_inverse_order(n);
        t.record(count == formula && KNOWN_ORDERS[n as usize] == formula, || {
            format!("n = {n}: enumerated {count}, formula {formula}")
        });
    }
    checks.push(t.finish());

    let tn = b.triple_n();
    let tab = Table::new(tn)?;
    let mut t = Tally::new(
        "associativity",
        "(f o g) o h = f o (g o h)",
        format!("all triples of {}", on(tn)),
    );
    for (i, j, k) in itertools::iproduct!(0..tab.len(), 0..tab.len(), 0..tab.len()) {
        t.record(tab.c(tab.c(i, j), k) == tab.c(i, tab.c(j, k)), || {
            format!("{} {} {}", tab.elems[i], tab.elems[j], tab.elems[k])
        });
    }
    checks.push(t.finish());

    let mut t = Tally::new(
        "unique inverse",
        "s^-1 is the only t with s t s = s and t s t = t",
        format!("every s and candidate t in {}", on(tn)),
    );
    for s in 0..tab.len() {
        let inverses: Vec<usize> = (0..tab.len())
            .filter(|&u| tab.c(tab.c(s, u), s) == s && tab.c(tab.c(u, s), u) == u)
            .collect();
        t.record(inverses == [tab.inv[s]], || {
            format!("{}: {} inverses", tab.elems[s], inverses.len())
        });
    }
    checks.push(t.finish());

    let pn = b.pair_n();
    let elems = enumerate_all(pn)?;
    let ground = GroundSet::Finite(pn);
    let mut t = Tally::new(
        "inverse of a product",
        "(f o g)^-1 = g^-1 o f^-1",
        format!("all pairs of {}", on(pn)),
    );
    for (f, g) in elems.iter().cartesian_product(&elems) {
        let ok = f.compose(g)?.inverse() == g.inverse().compose(&f.inverse())?;
        t.record(ok, || format!("f = {f}, g = {g}"));
    }
    checks.push(t.finish());

    let mut t = Tally::new(
        "involution laws",
        "(f^-1)^-1 = f, f o f^-1 = 1_im f, f^-1 o f = 1_dom f",
        format!("every f in {}", on(pn)),
    );
    for f in &elems {
        let ok = f.inverse().inverse() == *f
            && f.compose(&f.inverse())? == PartialBijection::identity_on(ground, &f.im())?
            && f.inverse().compose(f)? == PartialBijection::identity_on(ground, &f.dom())?;
        t.record(ok, || f.to_string());
    }
    checks.push(t.finish());

    let mut t = Tally::new(
        "restriction order",
        "f restricts g iff f = f o f^-1 o g",
        format!("all pairs of {}", on(pn)),
    );
    for (f, g) in elems.iter().cartesian_product(&elems) {
        let ok = f.restricts(g)? == (*f == f.compose(&f.inverse())?.compose(g)?);
        t.record(ok, || format!("f = {f}, g = {g}"));
    }
    checks.push(t.finish());

    let mut t = Tally::new(
        "canonical form",
        "printing and re-reading is the identity; canonicalization is idempotent",
        format!("every f in {}", on(pn)),
    );
    for f in &elems {
        let reread = PartialBijection::parse(&f.to_string(), ground)?;
        let rebuilt = PartialBijection::new(ground, f.pairs().iter().copied(), f.tail().clone())?;
        t.record(reread == *f && rebuilt == *f, || f.to_string());
    }
    checks.push(t.finish());

    let idempotents: Vec<PartialBijection> = finite_subsets(pn)
        .iter()
        .map(|a| PartialBijection::identity_on(ground, a))
        .collect::<Result<_>>()?;
    let mut t = Tally::new(
        "idempotents commute",
        "1_A o 1_B = 1_B o 1_A = 1_(A n B)",
        format!("A, B subsets of {pn} points"),
    );
    for (e, f) in idempotents.iter().cartesian_product(&idempotents) {
        let ef = e.compose(f)?;
        let ok = ef == f.compose(e)? && ef.is_idempotent();
        t.record(ok, || format!("{e}, {f}"));
    }
    checks.push(t.finish());
    Ok(checks)
}

type Distance = fn(&PartialBijection, &PartialBijection) -> Result<Dyadic>;

fn distance_matrix(elems: &[PartialBijection], m: Distance) -> Result<Vec<Vec<Dyadic>>> {
    elems
        .par_iter()
        .map(|f| elems.iter().map(|g| m(f, g)).collect::<Result<Vec<_>>>())
        .collect()
}

pub(super) fn metrics(b: &Bounds) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let tn = b.triple_n();
    let elems = enumerate_all(tn)?;
    let len = elems.len();
    let metrics: [(&str, Distance, Dyadic); 3] = [
        ("rho", rho, Dyadic::one()),
        ("rho*", rho_star, Dyadic::one()),
        ("d", d_metric, Dyadic::from_integer(2)),
    ];
    for (name, m, cap) in metrics {
        let dm = distance_matrix(&elems, m)?;
        let mut t = Tally::new(
            &format!("{name} is a bounded metric"),
            &format!("symmetry, identity of indiscernibles, {name} <= {cap}"),
            format!("all pairs of {}", on(tn)),
        );
        for (i, j) in (0..len).cartesian_product(0..len) {
            let ok = dm[i][j] == dm[j][i] && dm[i][j].is_zero() == (i == j) && dm[i][j] <= cap;
            t.record(ok, || format!("{} {}: {}", elems[i], elems[j], dm[i][j]));
        }
        checks.push(t.finish());

        let failures: Vec<String> = (0..len)
            .into_par_iter()
            .flat_map_iter(|i| {
                let dm = &dm;
                let elems = &elems;
                (0..len)
                    .cartesian_product(0..len)
                    .filter(move |&(j, k)| dm[i][k] > dm[i][j].clone() + dm[j][k].clone())
                    .map(move |(j, k)| format!("{} {} {}", elems[i], elems[j], elems[k]))
            })
            .collect();
        let mut t = Tally::new(
            &format!("{name} triangle inequality"),
            &format!("{name}(f,h) <= {name}(f,g) + {name}(g,h)"),
            format!("all triples of {}", on(tn)),
        );
        t.absorb(len.pow(3) as u64, failures);
        checks.push(t.finish());
    }

    let mut t = Tally::new(
        "disagreement indicators",
        "a_n + b_n <= 1 at every point",
        format!("all pairs of {}, every point", on(tn)),
    );
    for (f, g) in elems.iter().cartesian_product(&elems) {
        for n in 0..tn {
            let (a, bb) = disagreement(f, g, n)?;
            t.record(a + bb <= 1, || format!("{f} {g} at {n}"));
        }
    }
    checks.push(t.finish());

    let mut t = Tally::new(
        "inversion is an isometry",
        "rho*(f,g) = rho(f^-1,g^-1), rho(f,g) = rho*(f^-1,g^-1), d(f^-1,g^-1) = d(f,g)",
        format!("all pairs of {}", on(tn)),
    );
    for (f, g) in elems.iter().cartesian_product(&elems) {
        let (fi, gi) = (f.inverse(), g.inverse());
        let ok = rho_star(f, g)? == rho(&fi, &gi)?
            && rho(f, g)? == rho_star(&fi, &gi)?
            && d_metric(&fi, &gi)? == d_metric(f, g)?;
        t.record(ok, || format!("{f} {g}"));
    }
    checks.push(t.finish());

    let pn = b.pair_n();
    let ground = GroundSet::Finite(pn);
    let subsets = finite_subsets(pn);
    let mut t = Tally::new(
        "idempotent distances",
        "d(1_A,1_B) = 2 eta(A,B) and eta(A,B) = rho(1_A,1_B)",
        format!("A, B subsets of {pn} points"),
    );
    for (a, bset) in subsets.iter().cartesian_product(&subsets) {
        let (ea, eb) = (
            PartialBijection::identity_on(ground, a)?,
            PartialBijection::identity_on(ground, bset)?,
        );
        let e = eta(a, bset);
        t.record(d_metric(&ea, &eb)? == e.double() && rho(&ea, &eb)? == e, || {
            format!("A = {a}, B = {bset}")
        });
    }
    let mut nat_sets: Vec<SetDescriptor> = subsets.clone();
    nat_sets.extend(subsets.iter().map(|s| s.complement()));
    for (a, bset) in nat_sets.iter().cartesian_product(&nat_sets) {
        let ea = PartialBijection::identity_on(GroundSet::Naturals, a)?;
        let eb = PartialBijection::identity_on(GroundSet::Naturals, bset)?;
        let e = eta(a, bset);
        t.record(d_metric(&ea, &eb)? == e.double() && rho(&ea, &eb)? == e, || {
            format!("A = {a}, B = {bset} in N")
        });
    }
    checks.push(t.finish());

    let mut t = Tally::new(
        "eta is a metric",
        "symmetry, identity of indiscernibles and triangle inequality for eta",
        format!("finite and cofinite sets over {pn} points of N"),
    );
    for (a, bset) in nat_sets.iter().cartesian_product(&nat_sets) {
        let e = eta(a, bset);
        t.record(e == eta(bset, a) && e.is_zero() == (a == bset), || {
            format!("A = {a}, B = {bset}")
        });
    }
    for ((a, bset), c) in nat_sets
        .iter()
        .cartesian_product(&nat_sets)
        .cartesian_product(&nat_sets)
    {
        t.record(eta(a, c) <= eta(a, bset) + eta(bset, c), || format!("{a} {bset} {c}"));
    }
    checks.push(t.finish());
    Ok(checks)
}

pub(super) fn preimages(b: &Bounds) -> Result<Vec<Check>> {
    let n = b.n.unwrap_or(3).min(MAX_TRIPLE_N);
    let ground = GroundSet::Finite(n);
    let elems = enumerate_all(n)?;
    let mut checks = Vec::new();

    let mut t = Tally::new(
        "preimage under composition",
        "(f,g) with f o g in an atom are exactly the listed pair expression",
        format!("every atom and all pairs of {}", on(n)),
    );
    for atom in atoms_over(n) {
        let pre = preimage_compose(&atom, ground)?;
        for (f, g) in elems.iter().cartesian_product(&elems) {
            let ok = atom_member(&f.compose(g)?, &atom)? == pre.contains(f, g)?;
            t.record(ok, || format!("{atom}: f = {f}, g = {g}"));
        }
    }
    checks.push(t.finish());

    let mut t = Tally::new(
        "preimage under inversion",
        "f^-1 in v(x,y), w1(x), w2(y) iff f in v(y,x), w2(x), w1(y)",
        format!("every atom and every f in {}", on(n)),
    );
    for atom in atoms_over(n) {
        let pre = preimage_inverse(&atom);
        for f in &elems {
            t.record(atom_member(&f.inverse(), &atom)? == atom_member(f, &pre)?, || {
                format!("{atom}: {f}")
            });
        }
    }
    checks.push(t.finish());

    let union = |atoms: Vec<SubbasicAtom>| OpenSetExpr::union_of(atoms.into_iter().map(BasicOpenSet::atom));
    let mut t = Tally::new(
        "clopen atoms",
        "I \\ v(x,y) = w1(x) u U_{z != y} v(x,z); I \\ w1(x) = U_z v(x,z); I \\ w2(y) = U_z v(z,y)",
        format!("every atom and every f in {}", on(n)),
    );
    for (x, y) in (0..n).cartesian_product(0..n) {
        let not_v = union(
            std::iter::once(SubbasicAtom::W1(x))
                .chain((0..n).filter(|&z| z != y).map(|z| SubbasicAtom::V(x, z)))
                .collect(),
        );
        let not_w1 = union((0..n).map(|z| SubbasicAtom::V(x, z)).collect());
        let not_w2 = union((0..n).map(|z| SubbasicAtom::V(z, y)).collect());
        for f in &elems {
            let ok = member(f, &not_v)? != atom_member(f, &SubbasicAtom::V(x, y))?
                && member(f, &not_w1)? != atom_member(f, &SubbasicAtom::W1(x))?
                && member(f, &not_w2)? != atom_member(f, &SubbasicAtom::W2(y))?;
            t.record(ok, || format!("x = {x}, y = {y}, f = {f}"));
        }
    }
    checks.push(t.finish());

    let mut t = Tally::new(
        "algebraic membership",
        "f in v(x,y) iff u o f o u = u for u = u(y,x), else u o f o u = 1_0; f not in w1(x) iff u(x,x) restricts f^-1 o f",
        format!("every atom and every f in {}", on(n)),
    );
    let empty = PartialBijection::empty(ground);
    for (x, y) in (0..n).cartesian_product(0..n) {
        let u = PartialBijection::singleton(ground, y, x)?;
        let uxx = PartialBijection::singleton(ground, x, x)?;
        for f in &elems {
            let ufu = u.compose(f)?.compose(&u)?;
            let in_v = atom_member(f, &SubbasicAtom::V(x, y))?;
            let ok = (ufu == u) == in_v
                && (ufu == empty) == !in_v
                && uxx.restricts(&f.inverse().compose(f)?)? == !atom_member(f, &SubbasicAtom::W1(x))?;
            t.record(ok, || format!("x = {x}, y = {y}, f = {f}"));
        }
    }
    checks.push(t.finish());

    let subsets = finite_subsets(n);
    let mut t = Tally::new(
        "dom and im images of basics",
        "dom[b] and im[b] are the computed cylinders",
        format!("nonempty basics with at most two atoms over {}", on(n)),
    );
    let atoms = atoms_over(n);
    for k in 0..=2 {
        for chosen in atoms.iter().copied().combinations(k) {
            let basic = BasicOpenSet::from_atoms(chosen);
            if is_empty(&basic, ground)? {
                continue;
            }
            let (dc, ic) = dom_im_image_of_basic(&basic, ground)?;
            let members: Vec<&PartialBijection> = elems
                .iter()
                .filter(|f| member_basic(f, &basic).unwrap_or(false))
                .collect();
            for s in &subsets {
                let as_dom = members.iter().any(|f| f.dom() == *s);
                let as_im = members.iter().any(|f| f.im() == *s);
                t.record(as_dom == dc.contains(s) && as_im == ic.contains(s), || {
                    format!("{basic}: {s}")
                });
            }
        }
    }
    checks.push(t.finish());
    Ok(checks)
}

pub(super) fn separation(b: &Bounds) -> Result<Vec<Check>> {
    let n = b.n.unwrap_or(3).min(MAX_TRIPLE_N);
    let ground = GroundSet::Finite(n);
    let elems = enumerate_all(n)?;
    let mut checks = Vec::new();

    for kind in TopologyKind::ALL {
        let mut t = Tally::new(
            &format!("separation in {kind}"),
            if kind == TopologyKind::Tau0 {
                "distinct elements are told apart by an open set"
            } else {
                "distinct elements have disjoint open neighbourhoods"
            },
            format!("all distinct pairs of {}", on(n)),
        );
        for (f, g) in elems.iter().cartesian_product(&elems).filter(|(f, g)| f != g) {
            let w = separate(f, g, kind)?;
            t.record(w.certify(f, g)?, || format!("{f} {g}: {w:?}"));
        }
        checks.push(t.finish());
    }

    let mut t = Tally::new(
        "not T1",
        "the empty map lies in no v(x,y)",
        format!("every v-atom over {n} points"),
    );
    let empty = PartialBijection::empty(ground);
    for (x, y) in (0..n).cartesian_product(0..n) {
        t.record(!atom_member(&empty, &SubbasicAtom::V(x, y))?, || format!("v({x},{y})"));
    }
    checks.push(t.finish());

    let mut t = Tally::new(
        "w2 is tau1-nowhere dense, w1 is tau2-nowhere dense",
        "every nonempty basic contains a nonempty basic missing the atom",
        "tau1 and tau2 basics with at most two atoms over points 0..3 of N, target points 0..4",
    );
    let nat = GroundSet::Naturals;
    let small = atoms_over(3);
    for k in 1..=2 {
        for chosen in small.iter().copied().combinations(k) {
            let basic = BasicOpenSet::from_atoms(chosen);
            for p in 0..4 {
                for (admissible, w2_side) in [
                    (basic.admissible_in(TopologyKind::Tau1), true),
                    (basic.admissible_in(TopologyKind::Tau2), false),
                ] {
                    if !admissible || witness(&basic, nat)?.is_none() {
                        continue;
                    }
                    let (w, atom) = if w2_side {
                        (nowhere_dense_witness(&basic, p, nat)?, SubbasicAtom::W2(p))
                    } else {
                        (nowhere_dense_witness_w1(&basic, p, nat)?, SubbasicAtom::W1(p))
                    };
                    let inside = basic.literals().iter().all(|l| w.refined.literals().contains(l));
                    let ok = inside && member_basic(&w.member, &w.refined)? && is_empty(&w.refined.with(atom), nat)?;
                    t.record(ok, || format!("{basic} against {atom}"));
                }
            }
        }
    }
    checks.push(t.finish());

    let tn = n.min(4);
    let mut t = Tally::new(
        "translated w1",
        "f o g in w1(x) iff f in w1(g(x)) for a bijection g",
        format!("every permutation of {tn} points and every x, plus transpositions of N"),
    );
    for p in Permutation::all(tn) {
        for x in 0..tn {
            let r = translate_w1(x, &p.to_partial())?;
            t.record(r.holds(), || format!("g = {p}, x = {x}"));
        }
    }
    for (a, c) in (0..4).tuple_combinations() {
        let swap = (0..=c).map(|p| {
            (
                p,
                if p == a {
                    c
                } else if p == c {
                    a
                } else {
                    p
                },
            )
        });
        let g = PartialBijection::new(nat, swap, Tail::identity_from(c + 1))?;
        for x in 0..5 {
            let r = translate_w1(x, &g)?;
            t.record(r.holds(), || format!("g = {g}, x = {x}"));
        }
    }
    checks.push(t.finish());
    Ok(checks)
}

pub(super) fn identities(b: &Bounds) -> Result<Vec<Check>> {
    let n = b.pair_n();
    let mut sizes = vec![3.min(n), n];
    sizes.dedup();
    let golden: SlackTable = serde_json::from_str(GOLDEN_SLACK).map_err(|e| Error::InvalidSequence(e.to_string()))?;
    let mut checks = Vec::new();
    let mut table = Vec::new();
    let mut inc = Tally::new(
        "composition inclusions",
        "a o b is contained in the symbolic composite, for all eleven identities",
        format!("all atom pairs over {}", sizes.iter().map(|&s| on(s)).join(" and ")),
    );
    let mut slack = Tally::new(
        "slack-qualified equalities",
        "each identity is an equality on targets f with |dom f| <= |X| - s, s <= 2, s as recorded",
        format!("all atom pairs over {}", sizes.iter().map(|&s| on(s)).join(" and ")),
    );
    for &size in &sizes {
        for row in inclusion_and_slack(size)? {
            let first = row.first_inclusion_failure.clone().unwrap_or_default();
            inc.absorb(row.instances as u64, std::iter::repeat_n(first, row.inclusion_failures));
            let recorded = golden.items[row.item as usize - 1]
                .slack
                .get(&size.to_string())
                .copied();
            let ok = row.slack <= 2 && recorded.is_none_or(|r| r == row.slack);
            slack.record(ok, || {
                format!(
                    "item {} on {}: slack {} (recorded {recorded:?}): {}",
                    row.item,
                    on(size),
                    row.slack,
                    row.slack_witness.clone().unwrap_or_default()
                )
            });
            table
                .push(serde_json::json!({"item": row.item, "n": size, "instances": row.instances, "slack": row.slack}));
        }
    }
    checks.push(inc.finish());
    checks.push(slack.with_table(serde_json::Value::Array(table)).finish());

    let tn = b.triple_n();
    let r = intersection_lemma(tn)?;
    let mut t = Tally::new(
        "intersection lemma",
        "A o (B n C) is contained in (A o B) n (A o C)",
        format!("all subbasic triples over {}", on(tn)),
    );
    let first = r.first_failure.clone().unwrap_or_default();
    t.absorb(r.triples as u64, std::iter::repeat_n(first, r.failures as usize));
    checks.push(t.finish());

    let u = Universe::new(tn)?;
    let full = u.full_set();
    let mut t = Tally::new(
        "coset criterion",
        "h in R_f iff dom h in dom f and h = (h o f^-1) o f; dually for L_f",
        format!("all (h, f) in {}", on(tn)),
    );
    for (i, f) in u.elements().iter().enumerate() {
        let right = u.right_translate(&full, i);
        let left = u.left_translate(i, &full);
        for (j, h) in u.elements().iter().enumerate() {
            let ok = coset_member(h, &CosetDescriptor::right(f.clone()))? == right.contains(j)
                && coset_member(h, &CosetDescriptor::left(f.clone()))? == left.contains(j);
            t.record(ok, || format!("h = {h}, f = {f}"));
        }
    }
    checks.push(t.finish());
    Ok(checks)
}

pub(super) fn openmap(b: &Bounds) -> Result<Vec<Check>> {
    let n = b.pair_n().min(4);
    let r = open_map_sweep(n)?;
    let mut t = Tally::new(
        "translations are open",
        "U o f = Q n R_f and f o U = Q' n L_f",
        format!(
            "{} basics with at most two atoms per kind over points 0..{n}, every f in {}",
            r.basics,
            on(n)
        ),
    );
    let failures = r.right_failures + r.left_failures;
    let first = r.first_failure.clone().unwrap_or_default();
    t.absorb(r.checks as u64, std::iter::repeat_n(first, failures as usize));
    let table = serde_json::json!({"basics": r.basics, "empty_basics": r.empty_basics, "anchors": r.anchors});
    Ok(vec![t.with_table(table).finish()])
}

fn from_sweep(name: &str, anchor: &str, instances: String, s: &SweepCount) -> Check {
    let mut t = Tally::new(name, anchor, instances);
    let first = s.first_failure.clone().unwrap_or_default();
    t.absorb(s.checked as u64, std::iter::repeat_n(first, s.failures));
    t.finish()
}

pub(super) fn quotient(b: &Bounds) -> Result<Vec<Check>> {
    let sized = |x: u32, y: u32| Embedding::new(b.x_size.unwrap_or(x), b.y_size.unwrap_or(y));
    let desc = |e: &Embedding| format!("|X| = {}, |Y| = {}", e.x_size, e.y_size);
    let mut checks = Vec::new();

    let e = sized(3, 6)?;
    if e.x_size <= e.outside() {
        checks.push(from_sweep(
            "lift is a section",
            "pi(lift(g)) = g",
            desc(&e),
            &lift_sweep(&e)?,
        ));
    }
    let e = sized(2, 4)?;
    checks.push(from_sweep(
        "sub-homomorphism",
        "pi(f) o pi(g) restricts pi(f o g)",
        desc(&e),
        &subhom_sweep(&e)?,
    ));
    let e = sized(2, 5)?;
    checks.push(from_sweep(
        "projection commutes with inversion",
        "pi(f^-1) = pi(f)^-1",
        desc(&e),
        &inversion_sweep(&e)?,
    ));

    let e = sized(2, 3)?;
    let r = surjectivity_refutation(&e)?;
    let mut t = Tally::new(
        "surjectivity criterion",
        "pi is onto iff |X| <= |Y \\ X|; the empty map has no preimage otherwise",
        desc(&e),
    );
    let fits = e.x_size <= e.outside();
    t.record(r.onto() == fits && r.empty_reached == fits, || {
        format!("onto = {}, unreached = {}", r.onto(), r.unreached.len())
    });
    let table = serde_json::json!({
        "unreached": r.unreached.len(),
        "equal_split_target": r.equal_split_target.to_string(),
        "equal_split_reached": r.equal_split_reached,
    });
    checks.push(t.with_table(table).finish());

    let e = sized(2, 5)?;
    checks.push(from_sweep(
        "projection preimages",
        "pi^-1(v(x,y)) = u(x,y), pi^-1(w1(x)) = U_{y outside X} u(x,y), pi^-1(w2(y)) = U_{x outside X} u(x,y)",
        desc(&e),
        &pi_preimage_sweep(&e)?,
    ));
    let r = pi_image_sweep(&e)?;
    let mut t = Tally::new(
        "projection images",
        "pi(b) is contained in the image formula, with equality exactly when the free points fit",
        format!("{}, basics of at most two u-atoms", desc(&e)),
    );
    let first = r.first_failure.clone().unwrap_or_default();
    let bad = r.inclusion_failures.max(r.exactness_mismatches);
    t.absorb(r.basics as u64, std::iter::repeat_n(first, bad));
    let table = serde_json::json!({
        "basics": r.basics,
        "inconsistent": r.inconsistent,
        "formula_equal": r.literal_equal,
        "formula_strict": r.literal_unequal,
        "first_strict": r.first_gap,
    });
    checks.push(t.with_table(table).finish());
    Ok(checks)
}

fn declared_targets(s: &SequenceSpec) -> Vec<(TopologyKind, Option<&Declared>)> {
    let e = s.expected.as_ref();
    vec![
        (TopologyKind::Tau1, e.and_then(|e| e.tau1.as_ref())),
        (TopologyKind::Tau2, e.and_then(|e| e.tau2.as_ref())),
        (TopologyKind::TauPP, e.and_then(|e| e.taupp.as_ref())),
    ]
}

fn paired_metric(kind: TopologyKind) -> MetricKind {
    match kind {
        TopologyKind::Tau1 => MetricKind::Rho,
        TopologyKind::Tau2 => MetricKind::RhoStar,
        _ => MetricKind::DMetric,
    }
}

pub(super) fn convergence(_: &Bounds) -> Result<Vec<Check>> {
    let specs = corpus()?;
    let nat = GroundSet::Naturals;
    let mut checks = Vec::new();

    let mut declared = Tally::new(
        "declared limits",
        "verdicts and Cauchy limits reproduce the declared limit or divergence",
        format!("{} corpus sequences, three topologies", specs.len()),
    );
    let mut agree = Tally::new(
        "metric and topology agree",
        "tau1/rho, tau2/rho*, tau_pp/d give the same verdict",
        "corpus sequences against declared limits, 1_0, 1_N and a late element",
    );
    let mut coherent = Tally::new(
        "verdict coherence",
        "tau_pp-convergence is tau1- and tau2-convergence",
        "corpus sequences and the same targets",
    );
    let mut horizon = Tally::new(
        "generator verdicts are horizon-qualified",
        "uncertified sequences get no definite verdict and no Cauchy limit",
        "generator-backed corpus sequences",
    );
    let mut pairs = Tally::new(
        "inverse-pair limits",
        "if s_n -> s and s_n^-1 -> t then t = s^-1",
        "corpus sequences under rho, rho* and d",
    );
    let mut almost = Tally::new(
        "almost convergence",
        "tau_pp-convergence plus d-convergence of f_k o 1_A for a cofinite A gives d-convergence",
        format!(
            "corpus sequences with a rho-limit, A = N minus {:?}",
            DEFAULT_COFINITE_SETS
        ),
    );

    for s in &specs {
        let label = s.label();
        if !s.is_certified() {
            let all = PartialBijection::identity(nat);
            for kind in [TopologyKind::Tau1, TopologyKind::Tau2, TopologyKind::TauPP] {
                let v = converges(s, &all, kind)?;
                let a = metric_convergence_agrees(s, &all, paired_metric(kind))?;
                let uncertified = matches!(cauchy_limit(s, paired_metric(kind)), Err(Error::Uncertified(_)));
                horizon.record(v.is_undetermined() && a.agrees && uncertified, || {
                    format!("{label} under {kind}")
                });
            }
            continue;
        }

        let mut targets = vec![
            PartialBijection::empty(nat),
            PartialBijection::identity(nat),
            s.element(s.generic_index() + 5)?,
        ];
        for (kind, d) in declared_targets(s) {
            let metric = paired_metric(kind);
            let limit = cauchy_limit(s, metric);
            let ok = match (d, &limit) {
                (None, _) => continue,
                (Some(Declared::Diverges), Ok(CauchyOutcome::NotCauchy(_))) => true,
                (Some(Declared::Limit(f)), Ok(CauchyOutcome::Limit(g))) => {
                    targets.push(f.clone());
                    f == g && converges(s, f, kind)?.converges()
                }
                _ => false,
            };
            declared.record(ok, || format!("{label} under {kind}: declared {d:?}, got {limit:?}"));
        }
        targets.sort();
        targets.dedup();

        for f in &targets {
            for kind in [TopologyKind::Tau1, TopologyKind::Tau2, TopologyKind::TauPP] {
                let a = metric_convergence_agrees(s, f, paired_metric(kind))?;
                agree.record(a.agrees, || {
                    format!(
                        "{label} -> {f} under {kind}: {:?} vs {:?}",
                        a.topological, a.metric_verdict
                    )
                });
            }
            let (one, two, pp) = (converges_tau1(s, f)?, converges_tau2(s, f)?, converges_taupp(s, f)?);
            coherent.record(pp.converges() == (one.converges() && two.converges()), || {
                format!("{label} -> {f}")
            });
        }

        for metric in [MetricKind::Rho, MetricKind::RhoStar, MetricKind::DMetric] {
            match inverse_pair_limit(s, metric) {
                Ok(Some(p)) => pairs.record(p.consistent, || {
                    format!("{label} under {metric}: {} and {}", p.forward, p.backward)
                }),
                Ok(None) => {}
                Err(e) => pairs.record(false, || format!("{label} under {metric}: {e}")),
            }
        }

        if let CauchyOutcome::Limit(f) = cauchy_limit(s, MetricKind::Rho)? {
            let r = almost_convergence(s, &f, &DEFAULT_COFINITE_SETS)?;
            if r.hypotheses_hold {
                almost.record(r.holds, || format!("{label} -> {f}: {:?}", r.conclusion));
            }
        }
    }
    checks.extend([declared, agree, coherent, horizon, pairs, almost].map(Tally::finish));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::distance;

    #[test]
    fn distance_helper_matches_direct_calls() {
        let elems = enumerate_all(2).unwrap();
        let dm = distance_matrix(&elems, rho).unwrap();
        for (i, f) in elems.iter().enumerate() {
            for (j, g) in elems.iter().enumerate() {
                assert_eq!(dm[i][j], distance(MetricKind::Rho, f, g).unwrap());
            }
        }
    }
}
