//! Small hand-checkable values through the public API.

use partop::compose::{atom_compose, coset_member, lf_image, restrict_map, rf_image, ComposeResult, CosetDescriptor};
use partop::metric::{cauchy_limit, d_metric, disagreement, eta, rho, rho_star, CauchyOutcome, MetricKind};
use partop::pbij::enumerate_all;
use partop::quotient::{lift, pi_image_of_basic, pi_preimage, project, subhom_check, Embedding};
use partop::sequence::SequenceSpec;
use partop::topo::{
    atom_member, converges_tau1, converges_tau2, converges_taupp, dom_im_image_of_basic, is_empty,
    metric_convergence_agrees, nowhere_dense_witness, separate, translate_w1, witness, BasicOpenSet, OpenSetExpr,
    SeparationWitness, SubbasicAtom, TopologyKind, Verdict,
};
use partop::{Dyadic, GroundSet, PartialBijection, Permutation, SetDescriptor};

const NAT: GroundSet = GroundSet::Naturals;

fn pb(s: &str) -> PartialBijection {
    PartialBijection::parse(s, NAT).unwrap()
}

fn pb_n(s: &str, n: u32) -> PartialBijection {
    PartialBijection::parse(s, GroundSet::Finite(n)).unwrap()
}

fn basic(s: &str) -> BasicOpenSet {
    BasicOpenSet::parse(s).unwrap()
}

fn dy(s: &str) -> Dyadic {
    s.parse().unwrap()
}

fn spec(json: &str) -> SequenceSpec {
    SequenceSpec::from_json(json).unwrap()
}

fn walk() -> SequenceSpec {
    spec(r#"{"tail": {"kind": "Schedule", "pairs": [{"from": "0", "to": "k"}]}}"#)
}

fn returning() -> SequenceSpec {
    spec(r#"{"tail": {"kind": "Schedule", "pairs": [{"from": "k", "to": "0"}]}}"#)
}

fn segments() -> SequenceSpec {
    spec(r#"{"tail": {"kind": "Schedule", "identity": [{"start": 0, "end": "k"}]}}"#)
}

#[test]
fn composition_and_inverse() {
    assert_eq!(pb("{1->2}").compose(&pb("{0->1}")).unwrap(), pb("{0->2}"));
    assert_eq!(pb("{0->3, 2->1}").inverse(), pb("{3->0, 1->2}"));
    let a = SetDescriptor::finite([0, 1, 2]);
    let b = SetDescriptor::cofinite([1]);
    let ea = PartialBijection::identity_on(NAT, &a).unwrap();
    let eb = PartialBijection::identity_on(NAT, &b).unwrap();
    assert_eq!(
        ea.compose(&eb).unwrap(),
        PartialBijection::identity_on(NAT, &a.intersection(&b)).unwrap()
    );
    assert_eq!(ea.inverse(), ea);
}

#[test]
fn conjugating_by_a_missing_singleton_gives_the_empty_map() {
    let u = PartialBijection::singleton(NAT, 3, 3).unwrap();
    let f = pb("{0->1, 2->3}");
    assert_eq!(
        u.compose(&f).unwrap().compose(&u).unwrap(),
        PartialBijection::empty(NAT)
    );
}

#[test]
fn idempotents_and_domains() {
    let punctured = PartialBijection::identity_on(NAT, &SetDescriptor::cofinite([5])).unwrap();
    assert_eq!(punctured, pb("{0->0, 1->1, 2->2, 3->3, 4->4}; id from 6"));
    assert_eq!(punctured.to_string(), "{}; id from 0 except {5}");
    for f in enumerate_all(3).unwrap() {
        let on_dom = PartialBijection::identity_on(f.ground(), &f.dom()).unwrap();
        assert_eq!(f.compose(&f).unwrap() == f, f == on_dom);
    }
    let u = PartialBijection::singleton(NAT, 4, 7).unwrap();
    assert_eq!(
        (u.dom(), u.im()),
        (SetDescriptor::finite([4]), SetDescriptor::finite([7]))
    );
    assert_eq!(u.inverse(), PartialBijection::singleton(NAT, 7, 4).unwrap());
    assert!(pb("{0->1}").restricts(&pb("{0->1, 2->3}")).unwrap());
    assert!(!pb("{0->1}").restricts(&pb("{0->2}")).unwrap());
}

#[test]
fn domain_of_a_composite() {
    let all = enumerate_all(3).unwrap();
    for f in &all {
        for g in &all {
            let expected: Vec<u32> = (0..3).filter(|&x| g.eval(x).is_some_and(|y| f.in_domain(y))).collect();
            assert_eq!(f.compose(g).unwrap().dom(), SetDescriptor::finite(expected));
        }
    }
}

#[test]
fn singleton_conjugation_detects_values() {
    let ground = GroundSet::Finite(4);
    for f in enumerate_all(4).unwrap() {
        for (x, y) in (0..4).flat_map(|x| (0..4).map(move |y| (x, y))) {
            let u = PartialBijection::singleton(ground, y, x).unwrap();
            assert_eq!(u.compose(&f).unwrap().compose(&u).unwrap() == u, f.eval(x) == Some(y));
        }
    }
}

#[test]
fn disagreement_and_distances() {
    assert_eq!(disagreement(&pb("{0->0}"), &pb("{}"), 0).unwrap(), (1, 0));
    assert_eq!(disagreement(&pb("{0->1}"), &pb("{0->2}"), 0).unwrap(), (0, 1));
    let all = pb("{}; id from 0");
    for k in 0..6 {
        let seg = PartialBijection::identity_on(NAT, &SetDescriptor::range(0, k)).unwrap();
        assert_eq!(rho(&seg, &all).unwrap(), Dyadic::pow2_neg(k));
    }
    for (j, k) in [(1, 2), (0, 5), (3, 4)] {
        let (uj, uk) = (
            PartialBijection::singleton(NAT, 0, j).unwrap(),
            PartialBijection::singleton(NAT, 0, k).unwrap(),
        );
        let wjk = Dyadic::weight(j) + Dyadic::weight(k);
        assert_eq!(rho(&uj, &uk).unwrap(), dy("1/2^1"));
        assert_eq!(rho_star(&uj, &uk).unwrap(), wjk.clone());
        assert_eq!(rho(&uj.inverse(), &uk.inverse()).unwrap(), wjk.clone());
        assert_eq!(d_metric(&uj, &uk).unwrap(), dy("1/2^1") + wjk);
    }
    assert_eq!(eta(&SetDescriptor::empty(), &SetDescriptor::finite([0])), dy("1/2^1"));
    let a = SetDescriptor::cofinite([2, 3]);
    let ea = PartialBijection::identity_on(NAT, &a).unwrap();
    let eb = PartialBijection::identity_on(NAT, &SetDescriptor::finite([3])).unwrap();
    assert_eq!(rho_star(&ea, &eb).unwrap(), rho(&ea, &eb).unwrap());
    assert_eq!(
        d_metric(&ea, &eb).unwrap(),
        eta(&a, &SetDescriptor::finite([3])).double()
    );
}

#[test]
fn cauchy_limits() {
    let all = pb("{}; id from 0");
    assert_eq!(
        cauchy_limit(&segments(), MetricKind::Rho).unwrap(),
        CauchyOutcome::Limit(all)
    );
    match cauchy_limit(&walk(), MetricKind::Rho).unwrap() {
        CauchyOutcome::NotCauchy(w) => assert_eq!(w.point, 0),
        other => panic!("{other:?}"),
    }
    let c = SequenceSpec::constant(pb("{0->2}; id from 3"));
    assert_eq!(
        cauchy_limit(&c, MetricKind::DMetric).unwrap(),
        CauchyOutcome::Limit(pb("{0->2}; id from 3"))
    );
}

#[test]
fn memberships_and_witnesses() {
    let empty = PartialBijection::empty(NAT);
    for (x, y) in [(0, 0), (1, 3), (4, 2)] {
        assert!(!atom_member(&empty, &SubbasicAtom::V(x, y)).unwrap());
        assert!(atom_member(&empty, &SubbasicAtom::W1(x)).unwrap());
    }
    let g = GroundSet::Finite(4);
    assert!(is_empty(&basic("v(0,1) & w1(0)"), g).unwrap());
    assert!(is_empty(&basic("v(0,1) & v(2,1)"), g).unwrap());
    let w = witness(&basic("v(0,1) & w1(2) & w2(3)"), g).unwrap().unwrap();
    assert_eq!(w, pb_n("{0->1}", 4));
    let expr: OpenSetExpr = "v(0,1) & w1(2)".parse().unwrap();
    assert!(partop::topo::member(&pb("{0->1}"), &expr).unwrap());
}

#[test]
fn separation_cases() {
    let f = pb_n("{0->1}", 3);
    match separate(&f, &pb_n("{}", 3), TopologyKind::Tau1).unwrap() {
        SeparationWitness::Disjoint { first, second } => {
            assert_eq!((first, second), (basic("v(0,1)"), basic("w1(0)")));
        }
        other => panic!("{other:?}"),
    }
    match separate(&f, &pb_n("{0->2}", 3), TopologyKind::Tau1).unwrap() {
        SeparationWitness::Disjoint { first, second } => {
            assert_eq!((first, second), (basic("v(0,1)"), basic("v(0,2)")));
        }
        other => panic!("{other:?}"),
    }
    match separate(&pb_n("{}", 3), &f, TopologyKind::Tau0).unwrap() {
        SeparationWitness::OneSided { open, .. } => {
            assert!(atom_member(&f, &open.atoms().next().unwrap()).unwrap());
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn sequence_verdicts() {
    let empty = PartialBijection::empty(NAT);
    let all = pb("{}; id from 0");
    assert!(converges_tau1(&segments(), &all).unwrap().converges());
    assert!(matches!(
        converges_tau1(&walk(), &empty).unwrap(),
        Verdict::Diverges { point: 0, .. }
    ));
    assert!(converges_tau2(&walk(), &empty).unwrap().converges());
    assert!(!converges_taupp(&walk(), &empty).unwrap().converges());
    assert!(converges_tau1(&returning(), &empty).unwrap().converges());
    assert!(!converges_tau2(&returning(), &empty).unwrap().converges());
    let c = SequenceSpec::constant(pb("{1->4}"));
    for m in [MetricKind::Rho, MetricKind::RhoStar, MetricKind::DMetric] {
        let a = metric_convergence_agrees(&c, &pb("{1->4}"), m).unwrap();
        assert!(a.agrees && a.topological.converges());
    }
    let a = metric_convergence_agrees(&walk(), &empty, MetricKind::Rho).unwrap();
    assert!(a.agrees && !a.metric_verdict.converges());
    let a = metric_convergence_agrees(&walk(), &empty, MetricKind::RhoStar).unwrap();
    assert!(a.agrees && a.metric_verdict.converges());
}

#[test]
fn nowhere_density() {
    let w = nowhere_dense_witness(&basic("v(0,1) & w1(2)"), 3, NAT).unwrap();
    assert_eq!(w.fresh, Some(4));
    assert_eq!(w.refined, basic("v(0,1) & w1(2) & v(4,3)"));
    assert!(is_empty(&w.refined.with(SubbasicAtom::W2(3)), NAT).unwrap());
    let w = nowhere_dense_witness(&basic("v(0,1)"), 1, NAT).unwrap();
    assert_eq!(w.fresh, None);
}

#[test]
fn translated_w1() {
    let swap = Permutation::transposition(3, 0, 1).unwrap().to_partial();
    let r = translate_w1(0, &swap).unwrap();
    assert_eq!(r.y, 1);
    assert!(r.holds());
    assert!(translate_w1(2, &Permutation::identity(3).to_partial()).unwrap().holds());
}

#[test]
fn cylinders() {
    let (d, i) = dom_im_image_of_basic(&basic("v(0,1)"), NAT).unwrap();
    assert!(d.required.contains(&0) && i.required.contains(&1));
    let (d, i) = dom_im_image_of_basic(&basic("w1(0) & w2(1)"), NAT).unwrap();
    assert!(d.forbidden.contains(&0) && i.forbidden.contains(&1));
}

#[test]
fn atom_composition() {
    use SubbasicAtom::*;
    assert_eq!(
        atom_compose(&V(1, 2), &V(0, 1)).unwrap().resolve(),
        ComposeResult::Atom(V(0, 2))
    );
    assert_eq!(
        atom_compose(&W1(0), &W2(1)).unwrap().resolve(),
        ComposeResult::WholeSpace
    );
    assert_eq!(
        atom_compose(&W2(0), &W1(1)).unwrap().resolve(),
        ComposeResult::Intersection(W2(0), W1(1))
    );
}

#[test]
fn cosets_and_translates() {
    let f = pb_n("{2->0}", 3);
    assert!(coset_member(&PartialBijection::empty(f.ground()), &CosetDescriptor::right(f.clone())).unwrap());
    assert!(coset_member(&f, &CosetDescriptor::right(f.clone())).unwrap());
    assert_eq!(rf_image(&basic("v(0,1)"), &f).unwrap(), basic("v(2,1)"));
    assert_eq!(rf_image(&basic("v(0,1)"), &pb_n("{}", 3)).unwrap(), basic("w2(1)"));
    assert_eq!(rf_image(&BasicOpenSet::whole(), &f).unwrap(), BasicOpenSet::whole());
    let g = pb_n("{1->2}", 3);
    assert_eq!(
        lf_image(&basic("v(0,1)"), &g).unwrap(),
        rf_image(&basic("v(0,1)").inverted(), &g.inverse()).unwrap().inverted()
    );
    assert_eq!(
        restrict_map(&pb("{0->1, 2->3}"), &SetDescriptor::finite([0])).unwrap(),
        pb("{0->1}")
    );
}

#[test]
fn quotient_examples() {
    let e = Embedding::new(2, 4).unwrap();
    assert_eq!(project(&Permutation::identity(4), &e).unwrap(), pb_n("{0->0, 1->1}", 2));
    assert_eq!(
        project(&Permutation::new(vec![2, 3, 0, 1]).unwrap(), &e).unwrap(),
        pb_n("{}", 2)
    );
    assert_eq!(
        project(&Permutation::new(vec![1, 0, 2, 3]).unwrap(), &e).unwrap(),
        pb_n("{0->1, 1->0}", 2)
    );

    let e = Embedding::new(3, 6).unwrap();
    let p = lift(&pb_n("{0->2}", 3), &e).unwrap();
    assert_eq!(p.images(), [2, 3, 4, 0, 1, 5]);
    assert_eq!(project(&p, &e).unwrap(), pb_n("{0->2}", 3));

    let e = Embedding::new(1, 2).unwrap();
    let swap = Permutation::transposition(2, 0, 1).unwrap();
    let r = subhom_check(&swap, &swap, &e).unwrap();
    assert!(r.inclusion && !r.equal);
    assert_eq!(r.projected, pb_n("{0->0}", 1));

    let e = Embedding::new(2, 4).unwrap();
    assert_eq!(pi_preimage(&SubbasicAtom::V(0, 1), &e).unwrap().to_string(), "u(0,1)");
    assert_eq!(
        pi_preimage(&SubbasicAtom::W1(0), &e).unwrap().to_string(),
        "u(0,2) | u(0,3)"
    );
    assert_eq!(
        pi_preimage(&SubbasicAtom::W2(1), &e).unwrap().to_string(),
        "u(2,1) | u(3,1)"
    );
    assert_eq!(pi_image_of_basic(&basic("u(0,1)"), &e).unwrap().basic, basic("v(0,1)"));
    assert_eq!(pi_image_of_basic(&basic("u(0,3)"), &e).unwrap().basic, basic("w1(0)"));
}
