//! Seeded random generators for graphs and nested graphs.

use crate::hypergraph::{Hyperedge, Hypergraph, Label};
use crate::ranked::{Ranked, RankedAlphabet, Symbol};
use crate::vr::VHypergraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default seed used by the command line and the test suites.
pub const DEFAULT_SEED: u64 = 0x5eed;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub arity: usize,
    pub max_extra_vertices: usize,
    pub max_edges: usize,
    pub max_label_arity: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            arity: 2,
            max_extra_vertices: 2,
            max_edges: 3,
            max_label_arity: 3,
        }
    }
}

/// Random graph with `shape.arity` sources. `label` is asked for a label of
/// a given arity and may decline, in which case another arity is tried.
pub fn random_hypergraph<L: Label, R: Rng>(
    rng: &mut R,
    shape: Shape,
    label: &mut dyn FnMut(&mut R, usize) -> Option<L>,
) -> Hypergraph<L> {
    let n = shape.arity + rng.gen_range(0..=shape.max_extra_vertices);
    let mut vertices: Vec<usize> = (0..n).collect();
    vertices.shuffle(rng);
    let sources = vertices[..shape.arity].to_vec();
    let mut edges = Vec::new();
    let count = rng.gen_range(0..=shape.max_edges);
    let mut attempts = 0;
    while edges.len() < count && attempts < 8 * (count + 1) {
        attempts += 1;
        let k = rng.gen_range(0..=shape.max_label_arity.min(n));
        let Some(l) = label(rng, k) else { continue };
        vertices.shuffle(rng);
        edges.push(Hyperedge {
            label: l,
            incidence: vertices[..k].to_vec(),
        });
    }
    Hypergraph::new(n, edges, sources).expect("generated graph is valid")
}

/// Random vertex-replacement graph of the given arity with
/// `1..=max_hypervertices` hypervertices. `label` is asked for a label of a
/// positive arity up to `max_label_arity` and may decline. Each ordered
/// corner pair becomes an edge with probability `density`.
pub fn random_vgraph<L: Label, R: Rng>(
    rng: &mut R,
    arity: usize,
    max_hypervertices: usize,
    max_label_arity: usize,
    density: f64,
    label: &mut dyn FnMut(&mut R, usize) -> Option<L>,
) -> VHypergraph<L> {
    let count = rng.gen_range(1..=max_hypervertices.max(1));
    let mut labels = Vec::new();
    let mut attempts = 0;
    while labels.len() < count {
        attempts += 1;
        assert!(attempts <= 64 * count, "no labels of arity 1..={max_label_arity}");
        let k = rng.gen_range(1..=max_label_arity.max(1));
        if let Some(l) = label(rng, k) {
            labels.push(l);
        }
    }
    let ports: Vec<Vec<usize>> = labels
        .iter()
        .map(|l| (0..l.arity()).map(|_| rng.gen_range(0..arity)).collect())
        .collect();
    let corners: Vec<(usize, usize)> = labels
        .iter()
        .enumerate()
        .flat_map(|(v, l)| (0..l.arity()).map(move |i| (v, i)))
        .collect();
    let mut edges = Vec::new();
    for &c in &corners {
        for &d in &corners {
            if rng.gen_bool(density) {
                edges.push((c, d));
            }
        }
    }
    VHypergraph::new(arity, labels, ports, edges).expect("generated graph is valid")
}

/// Picks a symbol of the requested arity, if the alphabet has one.
pub fn symbol_of_arity<R: Rng>(alphabet: &RankedAlphabet, rng: &mut R, arity: usize) -> Option<Symbol> {
    let options: Vec<&Symbol> = alphabet.symbols().iter().filter(|s| s.arity() == arity).collect();
    options.choose(rng).map(|s| (*s).clone())
}

pub fn random_graph<R: Rng>(rng: &mut R, alphabet: &RankedAlphabet, shape: Shape) -> Hypergraph<Symbol> {
    random_hypergraph(rng, shape, &mut |r, k| symbol_of_arity(alphabet, r, k))
}

/// A graph whose labels are graphs over `alphabet`.
pub fn random_nested<R: Rng>(rng: &mut R, alphabet: &RankedAlphabet, shape: Shape) -> Hypergraph<Hypergraph<Symbol>> {
    random_hypergraph(rng, shape, &mut |r, k| {
        Some(random_graph(r, alphabet, Shape { arity: k, ..shape }))
    })
}

/// Three levels of nesting.
pub fn random_nested2<R: Rng>(
    rng: &mut R,
    alphabet: &RankedAlphabet,
    shape: Shape,
) -> Hypergraph<Hypergraph<Hypergraph<Symbol>>> {
    random_hypergraph(rng, shape, &mut |r, k| {
        Some(random_nested(r, alphabet, Shape { arity: k, ..shape }))
    })
}

/// An alphabet with one symbol of every arity up to three, plus a second
/// binary symbol.
pub fn test_alphabet() -> RankedAlphabet {
    RankedAlphabet::new([("c", 0), ("a", 1), ("e", 2), ("f", 2), ("t", 3)]).unwrap()
}
