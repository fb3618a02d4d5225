//! Treewidth against a brute-force elimination oracle, the binarisation
//! bound, and the width bound for polynomial operations.

mod common;

use common::{brute_force_treewidth, primal, random_instance, simple_graphs, width_bound_holds};
use graphalg::decomposition::{binarise, eval_algebraic_decomposition, exact_treewidth, AlgebraicDecomposition};
use graphalg::enumerate::enumerate_hypergraphs;
use graphalg::hypergraph::Hypergraph;
use graphalg::ranked::{Ranked, RankedAlphabet, Symbol};
use graphalg::sample::{random_graph, Shape};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn simple_graph_counts() {
    let counts: Vec<usize> = (0..=6).map(|n| simple_graphs(n).len()).collect();
    assert_eq!(counts, [1, 1, 2, 4, 11, 34, 156]);
}

#[test]
fn treewidth_matches_elimination_orders() {
    // Seven vertices are covered by the acceptance run.
    for n in 0..=6 {
        for g in simple_graphs(n) {
            let tw = exact_treewidth(&g, false).unwrap();
            assert_eq!(tw.width, brute_force_treewidth(&primal(&g)), "{g:?}");
            assert!(tw.decomposition.check(&g, false).is_ok());
            assert_eq!(tw.decomposition.width(), tw.width);
        }
    }
}

#[test]
fn sourced_decompositions_hold_the_sources() {
    let alph = RankedAlphabet::new([("e", 2), ("t", 3)]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let arity = rng.gen_range(0..=3);
        let g = random_graph(&mut rng, &alph, Shape { arity, max_extra_vertices: 4, max_edges: 4, max_label_arity: 3 });
        let plain = exact_treewidth(&g, false).unwrap();
        let sourced = exact_treewidth(&g, true).unwrap();
        assert!(sourced.decomposition.check(&g, true).is_ok(), "{g:?}");
        assert!(sourced.width >= plain.width);
        assert!(sourced.width >= arity as isize - 1);
    }
}

#[test]
fn binarisation_bound() {
    let alph = RankedAlphabet::new([("a", 1), ("e", 2), ("t", 3)]).unwrap();
    let mut checked = 0;
    for n in 0..=5 {
        for g in enumerate_hypergraphs(&alph, 0, n, 2) {
            let b = binarise(&g);
            assert_eq!(b.vertex_count(), g.vertex_count() + g.edges().len());
            let k = exact_treewidth(&g, false).unwrap().width;
            let rank = g.edges().iter().map(|e| e.label.arity() as isize).max().unwrap_or(0);
            assert!(exact_treewidth(&b, false).unwrap().width <= k.max(rank), "{g:?}");
            checked += 1;
        }
    }
    assert!(checked > 100);
}

#[test]
fn polynomial_width_bound() {
    let alph = RankedAlphabet::new([("a", 1), ("e", 2)]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 100 {
        let (t, v) = random_instance(&mut rng, &alph);
        if let Some(ok) = width_bound_holds(&t, &v) {
            assert!(ok, "{:?} with {v:?}", t.body());
            checked += 1;
        }
    }
}

#[test]
fn algebraic_decompositions_ignore_sibling_order() {
    let alph = RankedAlphabet::new([("a", 1), ("e", 2)]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let n = rng.gen_range(0..=2);
        let mut leaves: Vec<Hypergraph<Symbol>> = (0..rng.gen_range(2..=4))
            .map(|_| random_graph(&mut rng, &alph, Shape { arity: n, max_extra_vertices: 2, max_edges: 2, max_label_arity: 2 }))
            .collect();
        let value = |ls: &[Hypergraph<Symbol>]| {
            let t = AlgebraicDecomposition::oplus(ls.iter().cloned().map(AlgebraicDecomposition::leaf).collect());
            eval_algebraic_decomposition(&t).unwrap()
        };
        let before = value(&leaves);
        leaves.shuffle(&mut rng);
        assert!(before.is_isomorphic(&value(&leaves)));
    }
}
