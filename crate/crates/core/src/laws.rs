//! Randomised checks of the monad axioms for the hypergraph monad H and the
//! vertex-replacement monad V, of the Eilenberg-Moore axioms for finite
//! algebras, and of the distributive law of H over the powerset functor.
//!
//! Every check compares two graphs up to isomorphism (or two sets of
//! graphs by canonical form). Results are tallied per law; the first
//! failing input of each law is kept as a counterexample.

use crate::algebra::{check_associativity, check_unit_law, delta, FiniteAlgebra, LabelSet, PowersetAlgebra};
use crate::algebra::{elements, Elem};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Label};
use crate::ranked::{Ranked, RankedAlphabet, RankedMap, Symbol};
use crate::sample::{random_hypergraph, random_vgraph, symbol_of_arity, Shape};
use crate::vr::VHypergraph;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// Most vertices (H) or hypervertices (V) per nesting level.
pub const LEVEL_SIZE: usize = 5;

/// The six monad diagrams, in the order they are reported.
pub const MONAD_LAWS: [&str; 6] = [
    "functor-composition",
    "functor-identity",
    "unit-naturality",
    "flatten-naturality",
    "associativity",
    "unit",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monad {
    H,
    V,
}

impl fmt::Display for Monad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Monad::H => "H",
            Monad::V => "V",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LawResult {
    pub law: String,
    pub checked: usize,
    pub failures: usize,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub subject: String,
    pub seed: u64,
    pub cases: usize,
    pub laws: Vec<LawResult>,
}

impl LawReport {
    fn new(subject: &str, seed: u64, cases: usize, names: &[&str]) -> Self {
        LawReport {
            subject: subject.to_string(),
            seed,
            cases,
            laws: names
                .iter()
                .map(|n| LawResult {
                    law: n.to_string(),
                    checked: 0,
                    failures: 0,
                    counterexample: None,
                })
                .collect(),
        }
    }

    fn record(&mut self, law: &str, ok: bool, input: impl FnOnce() -> String) {
        let r = self
            .laws
            .iter_mut()
            .find(|r| r.law == law)
            .expect("law is registered");
        r.checked += 1;
        if !ok {
            r.failures += 1;
            if r.counterexample.is_none() {
                r.counterexample = Some(input());
            }
        }
    }

    pub fn holds(&self) -> bool {
        self.laws.iter().all(|r| r.failures == 0)
    }

    pub fn law(&self, name: &str) -> Option<&LawResult> {
        self.laws.iter().find(|r| r.law == name)
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (seed {}, {} cases)", self.subject, self.seed, self.cases)?;
        for r in &self.laws {
            let status = if r.failures == 0 { "ok" } else { "FAILED" };
            writeln!(f, "  {:<22} {:>5} checked  {status}", r.law, r.checked)?;
            if let Some(c) = &r.counterexample {
                writeln!(f, "    counterexample: {c}")?;
            }
        }
        Ok(())
    }
}

pub fn check_monad_laws(monad: Monad, seed: u64, cases: usize) -> Result<LawReport> {
    match monad {
        Monad::H => check_h_laws(seed, cases),
        Monad::V => check_v_laws(seed, cases),
    }
}

/// A random rank-preserving map from `domain` into `codomain`, which must
/// have a symbol of every arity used by `domain`.
pub fn random_map<R: Rng>(rng: &mut R, domain: &RankedAlphabet, codomain: &RankedAlphabet) -> Result<RankedMap> {
    let mut pairs = Vec::new();
    for s in domain.symbols() {
        let t = symbol_of_arity(codomain, rng, s.arity())
            .ok_or_else(|| Error::UnknownSymbol(format!("no symbol of arity {} to map {s} to", s.arity())))?;
        pairs.push((s.name().to_string(), t.name().to_string()));
    }
    RankedMap::new(
        domain.clone(),
        codomain.clone(),
        pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())),
    )
}

fn alphabets(with_nullary: bool) -> [RankedAlphabet; 3] {
    let pick = |entries: &[(&'static str, usize)]| {
        RankedAlphabet::new(entries.iter().copied().filter(|&(_, n)| with_nullary || n > 0)).expect("distinct names")
    };
    [
        pick(&[("c", 0), ("a", 1), ("b", 1), ("e", 2), ("f", 2), ("t", 3)]),
        pick(&[("k", 0), ("p", 1), ("g", 2), ("h", 2), ("u", 3)]),
        pick(&[("z", 0), ("y", 1), ("x", 2), ("w", 3)]),
    ]
}

fn shape(arity: usize) -> Shape {
    Shape {
        arity,
        max_extra_vertices: LEVEL_SIZE - arity,
        max_edges: 3,
        max_label_arity: 3,
    }
}

fn h_graph<R: Rng>(rng: &mut R, alphabet: &RankedAlphabet, arity: usize) -> Hypergraph<Symbol> {
    random_hypergraph(rng, shape(arity), &mut |r, k| symbol_of_arity(alphabet, r, k))
}

fn h_nested<R: Rng>(rng: &mut R, alphabet: &RankedAlphabet, arity: usize) -> Hypergraph<Hypergraph<Symbol>> {
    random_hypergraph(rng, shape(arity), &mut |r, k| Some(h_graph(r, alphabet, k)))
}

fn h_nested2<R: Rng>(
    rng: &mut R,
    alphabet: &RankedAlphabet,
    arity: usize,
) -> Hypergraph<Hypergraph<Hypergraph<Symbol>>> {
    random_hypergraph(rng, shape(arity), &mut |r, k| Some(h_nested(r, alphabet, k)))
}

fn brief(x: &impl fmt::Debug) -> String {
    let s = format!("{x:?}");
    match s.char_indices().nth(400) {
        Some((i, _)) => format!("{}...", &s[..i]),
        None => s,
    }
}

/// The six diagrams for H on `cases` random inputs with at most
/// [`LEVEL_SIZE`] vertices per level.
pub fn check_h_laws(seed: u64, cases: usize) -> Result<LawReport> {
    let mut rng = crate::sample::rng(seed);
    let [sigma, gamma, delta_] = alphabets(true);
    let mut report = LawReport::new("H monad", seed, cases, &MONAD_LAWS);
    for _ in 0..cases {
        let f = random_map(&mut rng, &sigma, &gamma)?;
        let g = random_map(&mut rng, &gamma, &delta_)?;
        let arity = rng.gen_range(0..=2);
        let x = h_graph(&mut rng, &sigma, arity);

        let lhs = x.relabel(&f)?.relabel(&g)?;
        let rhs = x.relabel(&f.then(&g)?)?;
        report.record("functor-composition", lhs.is_isomorphic(&rhs), || brief(&x));

        let same = x.relabel(&RankedMap::identity(&sigma))?;
        report.record("functor-identity", same.is_isomorphic(&x), || brief(&x));

        let a = sigma.symbols().choose(&mut rng).expect("nonempty alphabet").clone();
        let lhs = Hypergraph::unit(a.clone()).relabel(&f)?;
        let rhs = Hypergraph::unit(f.apply(&a)?);
        report.record("unit-naturality", lhs.is_isomorphic(&rhs), || format!("{a}"));

        let nested = h_nested(&mut rng, &sigma, arity);
        let lhs = nested.try_map_labels(|inner| inner.relabel(&f))?.flatten();
        let rhs = nested.flatten().relabel(&f)?;
        report.record("flatten-naturality", lhs.is_isomorphic(&rhs), || brief(&nested));

        let triple = h_nested2(&mut rng, &sigma, arity);
        let lhs = triple.flatten().flatten();
        let rhs = triple.map_labels(|inner| inner.flatten())?.flatten();
        report.record("associativity", lhs.is_isomorphic(&rhs), || brief(&triple));

        let outer = Hypergraph::unit(x.clone()).flatten();
        let inner = x.units().flatten();
        report.record("unit", outer.is_isomorphic(&x) && inner.is_isomorphic(&x), || brief(&x));
    }
    Ok(report)
}

/// Edge probability per ordered corner pair in random V inputs.
const V_DENSITY: f64 = 0.12;

fn v_graph<R: Rng>(rng: &mut R, alphabet: &RankedAlphabet, arity: usize) -> VHypergraph<Symbol> {
    random_vgraph(rng, arity, LEVEL_SIZE, 3, V_DENSITY, &mut |r, k| symbol_of_arity(alphabet, r, k))
}

fn v_nested<R: Rng>(rng: &mut R, alphabet: &RankedAlphabet, arity: usize) -> VHypergraph<VHypergraph<Symbol>> {
    random_vgraph(rng, arity, LEVEL_SIZE, 3, V_DENSITY, &mut |r, k| Some(v_graph(r, alphabet, k)))
}

fn v_nested2<R: Rng>(
    rng: &mut R,
    alphabet: &RankedAlphabet,
    arity: usize,
) -> VHypergraph<VHypergraph<VHypergraph<Symbol>>> {
    random_vgraph(rng, arity, LEVEL_SIZE, 3, V_DENSITY, &mut |r, k| Some(v_nested(r, alphabet, k)))
}

fn v_relabel(x: &VHypergraph<Symbol>, f: &RankedMap) -> Result<VHypergraph<Symbol>> {
    x.try_map_labels(|s| f.apply(s))
}

/// The six diagrams for V on `cases` random inputs with at most
/// [`LEVEL_SIZE`] hypervertices per level.
pub fn check_v_laws(seed: u64, cases: usize) -> Result<LawReport> {
    let mut rng = crate::sample::rng(seed);
    let [sigma, gamma, delta_] = alphabets(false);
    let mut report = LawReport::new("V monad", seed, cases, &MONAD_LAWS);
    for _ in 0..cases {
        let f = random_map(&mut rng, &sigma, &gamma)?;
        let g = random_map(&mut rng, &gamma, &delta_)?;
        let arity = rng.gen_range(1..=3);
        let x = v_graph(&mut rng, &sigma, arity);

        let lhs = v_relabel(&v_relabel(&x, &f)?, &g)?;
        let rhs = v_relabel(&x, &f.then(&g)?)?;
        report.record("functor-composition", lhs.is_isomorphic(&rhs), || brief(&x));

        let same = v_relabel(&x, &RankedMap::identity(&sigma))?;
        report.record("functor-identity", same.is_isomorphic(&x), || brief(&x));

        let a = sigma.symbols().choose(&mut rng).expect("nonempty alphabet").clone();
        let lhs = v_relabel(&VHypergraph::unit(a.clone())?, &f)?;
        let rhs = VHypergraph::unit(f.apply(&a)?)?;
        report.record("unit-naturality", lhs.is_isomorphic(&rhs), || format!("{a}"));

        let nested = v_nested(&mut rng, &sigma, arity);
        let lhs = nested.try_map_labels(|inner| v_relabel(inner, &f))?.flatten();
        let rhs = v_relabel(&nested.flatten(), &f)?;
        report.record("flatten-naturality", lhs.is_isomorphic(&rhs), || brief(&nested));

        let triple = v_nested2(&mut rng, &sigma, arity);
        let lhs = triple.flatten().flatten();
        let rhs = triple.map_labels(|inner| inner.flatten())?.flatten();
        report.record("associativity", lhs.is_isomorphic(&rhs), || brief(&triple));

        let outer = VHypergraph::unit(x.clone())?.flatten();
        let inner = x.try_map_labels(|s| VHypergraph::unit(s.clone()))?.flatten();
        report.record("unit", outer.is_isomorphic(&x) && inner.is_isomorphic(&x), || brief(&x));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Algebras

/// A random graph of arity `arity` labelled by elements of `alg`, with at
/// most `max_vertices` vertices and `max_edges` edges. Labels are drawn by
/// `pick`, which may decline an arity.
fn elem_graph<R: Rng>(
    rng: &mut R,
    arity: usize,
    max_vertices: usize,
    max_edges: usize,
    cap: usize,
    pick: &mut dyn FnMut(&mut R, usize) -> Option<Elem>,
) -> Hypergraph<Elem> {
    let shape = Shape {
        arity,
        max_extra_vertices: max_vertices.saturating_sub(arity),
        max_edges,
        max_label_arity: cap.min(3),
    };
    random_hypergraph(rng, shape, pick)
}

fn any_element<R: Rng>(alg: &dyn FiniteAlgebra, rng: &mut R, k: usize) -> Option<Elem> {
    (k <= alg.arity_cap() && alg.size(k) > 0).then(|| Elem::new(k, rng.gen_range(0..alg.size(k))))
}

/// Nested input for the associativity square: outer and inner graphs with at
/// most `max_vertices` vertices, arities within the cap.
fn nested_elem_graph<R: Rng>(
    alg: &dyn FiniteAlgebra,
    rng: &mut R,
    max_vertices: usize,
    max_edges: usize,
    pick: &mut dyn FnMut(&mut R, usize) -> Option<Elem>,
) -> Hypergraph<Hypergraph<Elem>> {
    let cap = alg.arity_cap();
    let arity = rng.gen_range(0..=cap.min(2));
    let shape = Shape {
        arity,
        max_extra_vertices: max_vertices.saturating_sub(arity),
        max_edges,
        max_label_arity: cap.min(3),
    };
    random_hypergraph(rng, shape, &mut |r: &mut R, k| {
        (k <= cap).then(|| elem_graph(r, k, max_vertices, max_edges, cap, pick))
    })
}

/// The Eilenberg-Moore axioms: the unit law on every element up to the cap
/// and the associativity square on `cases` random nested inputs with at
/// most four vertices per level.
pub fn check_em_laws(alg: &dyn FiniteAlgebra, seed: u64, cases: usize) -> Result<LawReport> {
    let mut rng = crate::sample::rng(seed);
    let mut report = LawReport::new(&format!("algebra {}", alg.name()), seed, cases, &["em-unit", "em-associativity"]);
    let failing = check_unit_law(alg)?;
    report.record("em-unit", failing.is_none(), || format!("{failing:?}"));
    for _ in 0..cases {
        let g = nested_elem_graph(alg, &mut rng, 4, 3, &mut |r, k| any_element(alg, r, k));
        let ok = check_associativity(alg, &g)?;
        report.record("em-associativity", ok, || brief(&g));
    }
    Ok(report)
}

fn codes<L: Label>(graphs: impl IntoIterator<Item = Hypergraph<L>>) -> BTreeSet<String> {
    graphs.into_iter().map(|g| g.canonical_code()).collect()
}

/// Naturality of δ for the map `f`: relabelling the sets and then choosing
/// gives the same graphs as choosing and then relabelling.
pub fn check_delta_naturality<A: Label, B: Label>(g: &Hypergraph<LabelSet<A>>, f: impl Fn(&A) -> B) -> Result<bool> {
    let mapped = g.try_map_labels(|s| LabelSet::new(s.arity(), s.items().iter().map(&f)))?;
    let lhs = codes(delta(&mapped));
    let rhs = codes(
        delta(g)
            .iter()
            .map(|h| h.map_labels(&f))
            .collect::<Result<Vec<_>>>()?,
    );
    Ok(lhs == rhs)
}

/// The distributive-law square: choosing after flattening gives the same
/// graphs as choosing inside every label, choosing among those choices, and
/// flattening.
pub fn check_distributive_square<A: Label>(g: &Hypergraph<Hypergraph<LabelSet<A>>>) -> Result<bool> {
    let lhs = codes(delta(&g.flatten()));
    let choices = g.try_map_labels(|inner| LabelSet::new(inner.arity(), delta(inner)))?;
    let rhs = codes(delta(&choices).iter().map(|h| h.flatten()));
    Ok(lhs == rhs)
}

/// The associativity square of the powerset algebra, evaluated along both
/// paths of the extended diagram: choose after flattening, or choose inside
/// every label, multiply the choices into sets, and choose again.
pub fn check_em_powerset(alg: &PowersetAlgebra, g: &Hypergraph<Hypergraph<Elem>>) -> Result<bool> {
    let base = alg.base();
    let sets = g.try_map_labels(|inner| inner.try_map_labels(|&e| Ok(alg.to_set(e))))?;
    let mut top = BTreeSet::new();
    for h in delta(&sets.flatten()) {
        top.insert(base.product(&h)?);
    }
    let inner_sets = sets.try_map_labels(|inner| {
        let products = delta(inner)
            .iter()
            .map(|h| base.product(h))
            .collect::<Result<Vec<_>>>()?;
        LabelSet::new(inner.arity(), products)
    })?;
    let mut bottom = BTreeSet::new();
    for h in delta(&inner_sets) {
        bottom.insert(base.product(&h)?);
    }
    let direct: BTreeSet<Elem> = alg.to_set(alg.product(&g.flatten())?).items().iter().copied().collect();
    Ok(top == bottom && top == direct)
}

pub const POWERSET_LAWS: [&str; 5] =
    ["delta-naturality", "distributive-law", "em-powerset", "em-unit", "em-associativity"];

/// The distributive-law and Eilenberg-Moore checks for the powerset of
/// `alg`, on inputs with at most three edges per level whose label sets have
/// at most two elements.
pub fn check_powerset_laws(alg: &PowersetAlgebra, seed: u64, cases: usize) -> Result<LawReport> {
    let base = alg.base().clone();
    let mut rng: ChaCha8Rng = crate::sample::rng(seed);
    let mut report = LawReport::new(&format!("algebra {}", alg.name()), seed, cases, &POWERSET_LAWS);
    let small_set = |r: &mut ChaCha8Rng, k: usize| -> Option<Elem> {
        if k > base.arity_cap() {
            return None;
        }
        let items = elements(&*base, k);
        let count = r.gen_range(0..=2.min(items.len()));
        let chosen = items.choose_multiple(r, count).fold(0, |m, e| m | 1 << e.index);
        Some(Elem::new(k, chosen))
    };
    let mut pick = small_set;
    let failing = check_unit_law(alg)?;
    report.record("em-unit", failing.is_none(), || format!("{failing:?}"));
    for _ in 0..cases {
        let g = nested_elem_graph(alg, &mut rng, 4, 3, &mut pick);
        let f_table: Vec<Vec<usize>> = (0..=base.arity_cap())
            .map(|k| (0..base.size(k)).map(|_| rng.gen_range(0..base.size(k))).collect())
            .collect();
        let f = |e: &Elem| Elem::new(e.arity, f_table[e.arity][e.index]);
        let sets = g.try_map_labels(|inner| inner.try_map_labels(|&e| Ok(alg.to_set(e))))?;
        let flat = sets.flatten();
        report.record("delta-naturality", check_delta_naturality(&flat, f)?, || brief(&g));
        report.record("distributive-law", check_distributive_square(&sets)?, || brief(&g));
        report.record("em-powerset", check_em_powerset(alg, &g)?, || brief(&g));
        report.record("em-associativity", check_associativity(alg, &g)?, || brief(&g));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{divisibility_algebra, threshold_algebra};

    #[test]
    fn h_laws_hold() {
        let r = check_h_laws(1, 40).unwrap();
        assert!(r.holds(), "{r}");
        assert!(r.laws.iter().all(|l| l.checked == 40));
    }

    #[test]
    fn v_laws_hold() {
        let r = check_v_laws(1, 25).unwrap();
        assert!(r.holds(), "{r}");
    }

    #[test]
    fn isomorphism_check_is_not_vacuous() {
        // Relabelling into a coarser alphabet and back is not the identity.
        let [sigma, gamma, _] = alphabets(true);
        let mut rng = crate::sample::rng(3);
        let f = random_map(&mut rng, &sigma, &gamma).unwrap();
        let back = RankedMap::new(
            gamma.clone(),
            sigma.clone(),
            [("k", "c"), ("p", "a"), ("g", "e"), ("h", "e"), ("u", "t")],
        )
        .unwrap();
        let mut differs = false;
        for _ in 0..50 {
            let x = h_graph(&mut rng, &sigma, 1);
            differs |= !x.relabel(&f).unwrap().relabel(&back).unwrap().is_isomorphic(&x);
        }
        assert!(differs);
    }

    #[test]
    fn em_laws_for_concrete_algebras() {
        let alph = crate::sample::test_alphabet();
        let a = alph.lookup("a").unwrap().clone();
        for rec in [
            divisibility_algebra(&a, 3, &alph, 3).unwrap(),
            threshold_algebra(&a, 2, &alph, 3).unwrap(),
        ] {
            let r = check_em_laws(&**rec.algebra(), 5, 60).unwrap();
            assert!(r.holds(), "{r}");
        }
    }

    #[test]
    fn powerset_laws() {
        let alph = crate::sample::test_alphabet();
        let a = alph.lookup("a").unwrap().clone();
        let rec = divisibility_algebra(&a, 2, &alph, 3).unwrap();
        let p = PowersetAlgebra::new(rec.algebra().clone()).unwrap();
        let r = check_powerset_laws(&p, 9, 60).unwrap();
        assert!(r.holds(), "{r}");
        assert!(r.law("distributive-law").unwrap().checked == 60);
    }
}
