//! Concrete recognising algebras against counting oracles, the homomorphism
//! and Eilenberg-Moore laws, closure combinators, syntactic quotients and
//! aperiodicity.

mod common;

use common::{count, shares};
use graphalg::algebra::{
    complement, decide_star_free_profile, divisibility_algebra, divisibility_language, intersection, is_aperiodic,
    padded_divisibility_language, shared_vertex_algebra, syntactic_quotient, threshold_algebra, threshold_language,
    trivial_language, union, verify_aperiodic_report, Elem, FiniteAlgebra, Language, PowersetAlgebra, Recogniser,
};
use graphalg::enumerate::enumerate_hypergraphs;
use graphalg::hypergraph::Hypergraph;
use graphalg::laws::{check_em_laws, check_powerset_laws};
use graphalg::ranked::{RankedAlphabet, Symbol};
use graphalg::sample::{random_nested, Shape};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn alphabet() -> RankedAlphabet {
    RankedAlphabet::new([("a", 2), ("b", 2), ("c", 1)]).unwrap()
}

fn sym(alph: &RankedAlphabet, name: &str) -> Symbol {
    alph.lookup(name).unwrap().clone()
}

/// Rank-0 graphs with at most three vertices and three edges.
fn small_graphs(alph: &RankedAlphabet) -> Vec<Hypergraph<Symbol>> {
    enumerate_hypergraphs(alph, 0, 3, 3)
}

#[test]
fn divisibility_agrees_with_counting() {
    let alph = alphabet();
    let graphs = small_graphs(&alph);
    assert!(graphs.len() > 150);
    for m in 1..=3 {
        let r = divisibility_algebra(&sym(&alph, "a"), m, &alph, 2).unwrap();
        for g in &graphs {
            assert_eq!(r.accepts(g).unwrap(), count(g, "a") % m == 0, "m={m} {g:?}");
        }
    }
}

#[test]
fn shared_vertex_agrees_with_search() {
    let alph = alphabet();
    let graphs = small_graphs(&alph);
    let cases = [
        (("a", 0), ("b", 1), false),
        (("a", 1), ("c", 0), false),
        (("a", 0), ("a", 1), false),
        (("a", 1), ("a", 1), false),
        (("a", 1), ("a", 1), true),
        (("c", 0), ("c", 0), true),
    ];
    for ((a, i), (b, j), strict) in cases {
        let r = shared_vertex_algebra((&sym(&alph, a), i), (&sym(&alph, b), j), strict, &alph, 2).unwrap();
        for g in &graphs {
            assert_eq!(
                r.accepts(g).unwrap(),
                shares(g, (a, i), (b, j), strict),
                "{a}[{i}] = {b}[{j}] strict={strict} {g:?}"
            );
        }
    }
}

fn recognisers(alph: &RankedAlphabet) -> Vec<Recogniser> {
    vec![
        divisibility_algebra(&sym(alph, "a"), 3, alph, 3).unwrap(),
        threshold_algebra(&sym(alph, "b"), 2, alph, 3).unwrap(),
        shared_vertex_algebra((&sym(alph, "a"), 0), (&sym(alph, "b"), 1), false, alph, 3).unwrap(),
    ]
}

#[test]
fn homomorphisms_commute_with_flattening() {
    let alph = alphabet();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for r in recognisers(&alph) {
        let alg = r.algebra();
        for _ in 0..200 {
            let arity = rand::Rng::gen_range(&mut rng, 0..=2);
            let shape = Shape { arity, max_extra_vertices: 2, max_edges: 3, max_label_arity: 2 };
            let g = random_nested(&mut rng, &alph, shape);
            let direct = r.hom.apply(&g.flatten()).unwrap();
            let inner: Hypergraph<Elem> = g.try_map_labels(|h| r.hom.apply(h)).unwrap();
            assert_eq!(direct, alg.product(&inner).unwrap(), "{}: {g:?}", alg.name());
        }
    }
}

#[test]
fn eilenberg_moore_laws() {
    let alph = alphabet();
    for r in recognisers(&alph) {
        let report = check_em_laws(&**r.algebra(), 21, 200).unwrap();
        assert!(report.holds(), "{report}");
    }
    let div = divisibility_algebra(&sym(&alph, "a"), 2, &alph, 2).unwrap();
    let p = PowersetAlgebra::new(div.algebra().clone()).unwrap();
    let report = check_powerset_laws(&p, 22, 200).unwrap();
    assert!(report.holds(), "{report}");
}

fn agrees(lang: &Language, graphs: &[Hypergraph<Symbol>]) {
    assert!(lang.find_disagreement(graphs).unwrap().is_none(), "{}", lang.name);
}

#[test]
fn closure_under_boolean_operations() {
    let alph = alphabet();
    let graphs = small_graphs(&alph);
    let even = divisibility_language(&sym(&alph, "a"), 2, &alph, 2).unwrap();
    let two_b = threshold_language(&sym(&alph, "b"), 2, &alph, 2).unwrap();
    let odd = complement(&even).unwrap();
    let both = intersection(&even, &two_b).unwrap();
    let either = union(&odd, &two_b).unwrap();
    for l in [&even, &two_b, &odd, &both, &either] {
        agrees(l, &graphs);
    }
    for g in &graphs {
        let (e, t) = (count(g, "a") % 2 == 0, count(g, "b") >= 2);
        assert_eq!(odd.contains(g), !e);
        assert_eq!(both.contains(g), e && t);
        assert_eq!(either.contains(g), !e || t);
    }
}

#[test]
fn syntactic_quotients() {
    let alph = alphabet();
    let graphs = small_graphs(&alph);
    let a = sym(&alph, "a");
    for m in 2..=4 {
        let q = syntactic_quotient(&divisibility_language(&a, m, &alph, 2).unwrap(), 2).unwrap();
        assert_eq!(q.sizes[0], m);
        agrees(&q.language, &graphs);
    }
    let padded = padded_divisibility_language(&a, 2, &alph, 2).unwrap();
    let q = syntactic_quotient(&padded, 2).unwrap();
    for n in 0..=2 {
        assert!(q.sizes[n] < q.base_sizes[n]);
        assert_eq!(2 * q.sizes[n], q.base_sizes[n]);
    }
    agrees(&q.language, &graphs);
    let t = syntactic_quotient(&trivial_language(&alph, 2).unwrap(), 2).unwrap();
    assert_eq!(t.sizes, [1, 1, 1]);
}

#[test]
fn aperiodicity() {
    let alph = alphabet();
    let a = sym(&alph, "a");
    let even = divisibility_algebra(&a, 2, &alph, 2).unwrap();
    let r = is_aperiodic(&**even.algebra(), 0).unwrap();
    assert!(!r.aperiodic);
    assert_eq!(r.witness.as_ref().unwrap().element, Elem::new(0, 1));
    assert!(verify_aperiodic_report(&**even.algebra(), &r).unwrap());
    let sat = threshold_algebra(&a, 3, &alph, 2).unwrap();
    let r = is_aperiodic(&**sat.algebra(), 2).unwrap();
    assert!(r.aperiodic);
    assert!(verify_aperiodic_report(&**sat.algebra(), &r).unwrap());

    let profile = decide_star_free_profile(&divisibility_language(&a, 2, &alph, 2).unwrap(), 2).unwrap();
    assert!(!profile.star_free);
    let profile = decide_star_free_profile(&threshold_language(&a, 2, &alph, 2).unwrap(), 2).unwrap();
    assert!(profile.star_free);
}
