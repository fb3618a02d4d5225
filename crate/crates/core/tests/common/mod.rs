//! Helpers shared by the integration tests and the acceptance run:
//! exhaustive model families, random model operations, and independent
//! oracles for treewidth and for the grammar examples.
#![allow(dead_code)]

use graphalg::mso::ops::{model_disjoint_union, model_product, qf_interpret, qf_restrict};
use graphalg::mso::powerset::{cmso_equiv, complete_generators, powerset_with, CmsoSignature, Generators};
use graphalg::mso::random::{random_model, FormulaSampler};
use graphalg::mso::types::TypeContext;
use graphalg::mso::{Formula, Interpretation, Model, Vocabulary};
use graphalg::Error;
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeMap;

// ---------------------------------------------------------------------------
// Models

pub fn permuted<R: Rng>(rng: &mut R, m: &Model) -> Model {
    let mut perm: Vec<usize> = (0..m.size()).collect();
    perm.shuffle(rng);
    let mut out = Model::new(m.size());
    for (name, r) in m.relations() {
        out.declare(name, r.arity).unwrap();
        for t in &r.tuples {
            out.insert(name, t.iter().map(|&v| perm[v]).collect()).unwrap();
        }
    }
    for (c, &v) in m.constants() {
        out.set_constant(c, perm[v]).unwrap();
    }
    out
}


pub fn random_interpretation<R: Rng>(rng: &mut R, vocab: &Vocabulary) -> Interpretation {
    let sampler = FormulaSampler {
        vocab,
        moduli: Vec::new(),
        monadic: false,
        depth: 3,
    };
    let mut f = Interpretation::default()
        .relation("F", &["x", "y"], sampler.quantifier_free(rng, &["x", "y"]))
        .relation("G", &["x"], sampler.quantifier_free(rng, &["x"]));
    for c in &vocab.constants {
        f = f.constant(&format!("{c}'"), c);
    }
    f
}

pub enum Op {
    Union(Model),
    Product(Model),
    Restrict(Formula),
    Interpret(Interpretation),
}

impl Op {
    pub fn apply(&self, m: &Model) -> Option<Model> {
        match self {
            Op::Union(c) => Some(model_disjoint_union(&[m.clone(), c.clone()]).unwrap()),
            Op::Product(c) => Some(model_product(&[m.clone(), c.clone()]).unwrap()),
            Op::Restrict(phi) => match qf_restrict(m, "x", phi) {
                Ok((r, _)) => Some(r),
                Err(Error::ConstantViolatesRestriction(_)) => None,
                Err(e) => panic!("{e}"),
            },
            Op::Interpret(f) => Some(qf_interpret(m, f).unwrap()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Op::Union(_) => "union",
            Op::Product(_) => "product",
            Op::Restrict(_) => "restriction",
            Op::Interpret(_) => "interpretation",
        }
    }
}

pub fn random_op<R: Rng>(rng: &mut R, vocab: &Vocabulary, kinds: &[usize], other_size: usize) -> Op {
    let sampler = FormulaSampler {
        vocab,
        moduli: Vec::new(),
        monadic: false,
        depth: 3,
    };
    match *kinds.choose(rng).unwrap() {
        0 => Op::Union(random_model(rng, vocab, other_size, 0.4)),
        1 => Op::Product(random_model(rng, vocab, other_size, 0.4)),
        2 => Op::Restrict(sampler.quantifier_free(rng, &["x"])),
        _ => Op::Interpret(random_interpretation(rng, vocab)),
    }
}


pub fn complete(r: usize) -> CmsoSignature {
    CmsoSignature::new(r, [2], Generators::Complete).unwrap()
}

/// Pairs of non-isomorphic models with `1..=max` elements that are
/// CMSO-equivalent at rank `r`, plus permuted copies of a few candidates.
///
/// Candidates are bucketed by the type of their powerset model under one
/// generator list complete for the whole family; every pair is then
/// rechecked with generators complete for just that pair.
pub fn cmso_pairs<R: Rng>(rng: &mut R, vocab: &Vocabulary, r: usize, want: usize, max: usize) -> Vec<(Model, Model)> {
    let sig = complete(r);
    let candidates: Vec<Model> = (1..=max).flat_map(|n| all_models(vocab, n)).collect();
    let refs: Vec<&Model> = candidates.iter().collect();
    let gens = complete_generators(&refs).unwrap();
    let mut ctx = TypeContext::new();
    let mut groups: BTreeMap<u32, Vec<&Model>> = BTreeMap::new();
    for m in &candidates {
        let p = powerset_with(m, &gens, &sig.moduli).unwrap();
        groups.entry(ctx.type_id(&p, r).unwrap()).or_default().push(m);
    }
    let mut pairs: Vec<(Model, Model)> = Vec::new();
    for g in groups.values().filter(|g| g.len() >= 2) {
        for w in g.windows(2) {
            pairs.push((w[0].clone(), w[1].clone()));
        }
    }
    pairs.shuffle(rng);
    pairs.truncate(want);
    for (a, b) in &pairs {
        assert!(cmso_equiv(a, b, &sig).unwrap(), "family and pair generators disagree\n{a:?}\n{b:?}");
    }
    let copies: Vec<(Model, Model)> = candidates
        .choose_multiple(rng, want / 4 + 1)
        .map(|a| (a.clone(), permuted(rng, a)))
        .collect();
    pairs.extend(copies);
    pairs
}


/// Every model over `vocab` with `n` elements, one per isomorphism class.
/// Only unary and binary relations and at most one constant are supported.
pub fn all_models(vocab: &Vocabulary, n: usize) -> Vec<Model> {
    let slots: Vec<(String, Vec<usize>)> = vocab
        .relations
        .iter()
        .flat_map(|(name, &k)| {
            let tuples: Vec<Vec<usize>> = match k {
                1 => (0..n).map(|i| vec![i]).collect(),
                2 => (0..n).flat_map(|i| (0..n).map(move |j| vec![i, j])).collect(),
                _ => unimplemented!(),
            };
            tuples.into_iter().map(move |t| (name.clone(), t))
        })
        .collect();
    let constant_choices: Vec<Option<usize>> = if vocab.constants.is_empty() {
        vec![None]
    } else if n == 0 {
        vec![]
    } else {
        (0..n).map(Some).collect()
    };
    let mut seen = BTreeMap::new();
    for mask in 0u64..1 << slots.len() {
        for &c in &constant_choices {
            let mut m = Model::new(n);
            for (name, &k) in &vocab.relations {
                m.declare(name, k).unwrap();
            }
            for (i, (name, t)) in slots.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    m.insert(name, t.clone()).unwrap();
                }
            }
            if let Some(v) = c {
                m.set_constant(vocab.constants.iter().next().unwrap(), v).unwrap();
            }
            seen.entry(m.canonical_code()).or_insert(m);
        }
    }
    seen.into_values().collect()
}


// ---------------------------------------------------------------------------
// Graphs

use graphalg::hypergraph::Hypergraph;
use graphalg::ranked::Symbol;
use std::collections::BTreeSet;

/// Undirected simple graphs on `n` vertices, one per isomorphism class. An
/// undirected edge is a pair of opposite binary `e` edges, so graph
/// isomorphism is hypergraph isomorphism.
pub fn simple_graphs(n: usize) -> Vec<Hypergraph<Symbol>> {
    if n == 0 {
        return vec![Hypergraph::sources_only(0)];
    }
    let mut seen = BTreeMap::new();
    for g in simple_graphs(n - 1) {
        for mask in 0u32..1 << (n - 1) {
            let mut h = g.clone();
            let v = h.add_vertex();
            for w in (0..n - 1).filter(|w| mask >> w & 1 == 1) {
                h.add_edge(Symbol::new("e", 2), vec![v, w]).unwrap();
                h.add_edge(Symbol::new("e", 2), vec![w, v]).unwrap();
            }
            seen.entry(h.canonical_code()).or_insert(h);
        }
    }
    seen.into_values().collect()
}

/// Adjacency of the primal graph: vertices are adjacent when some hyperedge
/// touches both.
pub fn primal(g: &Hypergraph<Symbol>) -> Vec<Vec<bool>> {
    let n = g.vertex_count();
    let mut adj = vec![vec![false; n]; n];
    for e in g.edges() {
        for &a in &e.incidence {
            for &b in &e.incidence {
                if a != b {
                    adj[a][b] = true;
                }
            }
        }
    }
    adj
}

/// Treewidth as the least, over all elimination orders, of the largest
/// neighbourhood met when eliminating. Tries every permutation.
pub fn brute_force_treewidth(adj: &[Vec<bool>]) -> isize {
    let n = adj.len();
    if n == 0 {
        return -1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = n as isize - 1;
    loop {
        let mut a = adj.to_vec();
        let mut gone = vec![false; n];
        let mut width = 0isize;
        for &v in &order {
            let nb: Vec<usize> = (0..n).filter(|&w| !gone[w] && w != v && a[v][w]).collect();
            width = width.max(nb.len() as isize);
            for &x in &nb {
                for &y in &nb {
                    if x != y {
                        a[x][y] = true;
                    }
                }
            }
            gone[v] = true;
        }
        best = best.min(width);
        if !next_permutation(&mut order) {
            return best;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Length of the word encoded as a directed path from source 1 to source 2,
/// or `None` if the graph is not such a path.
pub fn word_length(g: &Hypergraph<Symbol>) -> Option<usize> {
    let [start, end] = g.sources() else { return None };
    let mut next = vec![None; g.vertex_count()];
    for e in g.edges() {
        if next[e.incidence[0]].replace(e.incidence[1]).is_some() {
            return None;
        }
    }
    let mut v = *start;
    let mut len = 0;
    while let Some(w) = next[v] {
        v = w;
        len += 1;
        if len > g.edges().len() {
            return None;
        }
    }
    (v == *end && len == g.edges().len() && len + 1 == g.vertex_count()).then_some(len)
}

/// A single directed cycle through every vertex, without sources.
pub fn is_directed_cycle(g: &Hypergraph<Symbol>) -> bool {
    let n = g.vertex_count();
    if !g.sources().is_empty() || n < 2 || g.edges().len() != n {
        return false;
    }
    let mut next = vec![None; n];
    for e in g.edges() {
        if next[e.incidence[0]].replace(e.incidence[1]).is_some() {
            return false;
        }
    }
    let mut v = 0;
    for step in 1..=n {
        let Some(w) = next[v] else { return false };
        v = w;
        if v == 0 {
            return step == n;
        }
    }
    false
}

/// Children of each vertex in a graph whose edges point from child to
/// parent, provided every vertex but the root has exactly one parent and
/// all vertices reach the root (the only source).
fn tree_children(g: &Hypergraph<Symbol>) -> Option<Vec<Vec<usize>>> {
    let [root] = g.sources() else { return None };
    let n = g.vertex_count();
    let mut parent = vec![None; n];
    let mut children = vec![Vec::new(); n];
    for e in g.edges() {
        let (c, p) = (e.incidence[0], e.incidence[1]);
        if c == *root || parent[c].replace(p).is_some() {
            return None;
        }
        children[p].push(c);
    }
    for v in 0..n {
        let mut x = v;
        for _ in 0..=n {
            if x == *root {
                break;
            }
            x = parent[x]?;
        }
        if x != *root {
            return None;
        }
    }
    Some(children)
}

pub fn is_rooted_tree(g: &Hypergraph<Symbol>) -> bool {
    tree_children(g).is_some()
}

/// A rooted tree in which every inner vertex has two children and all
/// leaves have the same depth.
pub fn is_balanced_binary_tree(g: &Hypergraph<Symbol>) -> bool {
    let Some(children) = tree_children(g) else { return false };
    let root = g.sources()[0];
    let mut depths = BTreeSet::new();
    let mut stack = vec![(root, 0)];
    while let Some((v, d)) = stack.pop() {
        match children[v].len() {
            0 => {
                depths.insert(d);
            }
            2 => stack.extend(children[v].iter().map(|&c| (c, d + 1))),
            _ => return false,
        }
    }
    depths.len() == 1
}

/// Isomorphism by trying every vertex bijection: sources must map in order
/// and the multisets of (label, incidence) must coincide.
pub fn brute_force_isomorphic(g: &Hypergraph<Symbol>, h: &Hypergraph<Symbol>) -> bool {
    let n = g.vertex_count();
    if n != h.vertex_count() || g.edges().len() != h.edges().len() || g.sources().len() != h.sources().len() {
        return false;
    }
    let edge_list = |x: &Hypergraph<Symbol>, p: &[usize]| {
        let mut v: Vec<(String, Vec<usize>)> = x
            .edges()
            .iter()
            .map(|e| (e.label.to_string(), e.incidence.iter().map(|&u| p[u]).collect()))
            .collect();
        v.sort();
        v
    };
    let identity: Vec<usize> = (0..n).collect();
    let target = edge_list(h, &identity);
    let mut p = identity;
    loop {
        if g.sources().iter().zip(h.sources()).all(|(&s, &t)| p[s] == t) && edge_list(g, &p) == target {
            return true;
        }
        if !next_permutation(&mut p) {
            return false;
        }
    }
}

// ---------------------------------------------------------------------------
// Polynomial width bound

use graphalg::decomposition::exact_treewidth;
use graphalg::hypergraph::Hyperedge;
use graphalg::polynomial::{FreeAlgebra, PolynomialTerm, TermLabel, Valuation};
use graphalg::ranked::{Ranked, RankedAlphabet};
use graphalg::sample::{random_graph, Shape};

/// A term with up to two variables `x`, `y` and constant graphs on at most
/// four vertices, and a valuation for it.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    alph: &RankedAlphabet,
) -> (PolynomialTerm<Hypergraph<Symbol>>, Valuation<Hypergraph<Symbol>>) {
    let arities = [rng.gen_range(0..=2), rng.gen_range(0..=2)];
    let vertices = rng.gen_range(2..=4);
    let mut edges = Vec::new();
    let mut order: Vec<usize> = (0..vertices).collect();
    for _ in 0..rng.gen_range(1..=3) {
        order.shuffle(rng);
        let label = if rng.gen_bool(0.6) {
            let v = rng.gen_range(0..2);
            TermLabel::Var(Symbol::new(["x", "y"][v], arities[v]))
        } else {
            let k = rng.gen_range(0..=2);
            TermLabel::Const(random_graph(rng, alph, Shape { arity: k, max_extra_vertices: 2, max_edges: 3, max_label_arity: 2 }))
        };
        let k = label.arity();
        edges.push(Hyperedge { label, incidence: order[..k].to_vec() });
    }
    order.shuffle(rng);
    let sources = order[..rng.gen_range(0..=2)].to_vec();
    let term = PolynomialTerm::from_body(Hypergraph::new(vertices, edges, sources).unwrap()).unwrap();
    let mut valuation = Valuation::new();
    for v in term.variables().symbols() {
        let g = random_graph(rng, alph, Shape { arity: v.arity(), max_extra_vertices: 3, max_edges: 4, max_label_arity: 2 });
        valuation.insert(v.name().to_string(), g);
    }
    (term, valuation)
}

/// The width bound for polynomial operations with `k` the sourced treewidth
/// of the term body (labels as opaque hyperedges) and of its constants.
pub fn width_bound_holds(term: &PolynomialTerm<Hypergraph<Symbol>>, valuation: &Valuation<Hypergraph<Symbol>>) -> Option<bool> {
    let value = term.eval(valuation, &FreeAlgebra).unwrap();
    if value.vertex_count() > 10 {
        return None;
    }
    let opaque = term.body().map_labels(|l| Symbol::new("_", l.arity())).unwrap();
    let mut k = exact_treewidth(&opaque, true).unwrap().width;
    for e in term.body().edges() {
        if let TermLabel::Const(c) = &e.label {
            k = k.max(exact_treewidth(c, true).unwrap().width);
        }
    }
    let inputs = valuation.values().map(|g| exact_treewidth(g, true).unwrap().width).max().unwrap_or(0);
    let out = exact_treewidth(&value, true).unwrap().width;
    assert!(out <= k.max(inputs), "the tighter gluing bound fails");
    Some(out <= k + inputs.max(0))
}

// ---------------------------------------------------------------------------
// Algebra predicates

/// Number of edges labelled `name`.
pub fn count(g: &Hypergraph<Symbol>, name: &str) -> usize {
    g.edges().iter().filter(|e| e.label.name() == name).count()
}

/// Some `a`-edge and `b`-edge (distinct when `strict`) share the vertex at
/// their positions `i` and `j`.
pub fn shares(g: &Hypergraph<Symbol>, (a, i): (&str, usize), (b, j): (&str, usize), strict: bool) -> bool {
    let edges = g.edges();
    (0..edges.len()).any(|x| {
        (0..edges.len()).any(|y| {
            (!strict || x != y)
                && edges[x].label.name() == a
                && edges[y].label.name() == b
                && edges[x].incidence[i] == edges[y].incidence[j]
        })
    })
}
