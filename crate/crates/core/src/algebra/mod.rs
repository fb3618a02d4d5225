//! Algebras that are finite on every arity, homomorphisms from graphs into
//! them, and the languages they recognise.
//!
//! Elements are [`Elem`] values: an arity and an index into that arity's
//! universe `0..size(arity)`. Every algebra has an arity cap; asking for
//! anything above it is an [`Error::ArityCap`].

mod combinators;
mod concrete;
mod syntactic;
mod table;

pub use combinators::{
    complement, delta, intersection, union, LabelSet, PowersetAlgebra, ProductAlgebra, QuotientAlgebra,
};
pub use concrete::{
    divisibility_algebra, divisibility_language, flag_algebra, padded_divisibility_language, shared_vertex_algebra,
    shared_vertex_language, threshold_algebra, threshold_language, trivial_language, DivisibilityAlgebra,
    OrAlgebra, SharedVertexAlgebra, ThresholdAlgebra, TrivialAlgebra,
};
pub use syntactic::{
    decide_star_free_profile, is_aperiodic, syntactic_quotient, verify_aperiodic_report, AperiodicReport,
    PeriodWitness, PowerCertificate, StarFreeReport, SyntacticQuotient,
};
pub use table::{tabulate, TableAlgebra, TableFile};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Label};
use crate::polynomial::Algebra;
use crate::ranked::{Ranked, RankedAlphabet, Symbol};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Elem {
    pub arity: usize,
    pub index: usize,
}

impl Elem {
    pub fn new(arity: usize, index: usize) -> Elem {
        Elem { arity, index }
    }
}

impl Ranked for Elem {
    fn arity(&self) -> usize {
        self.arity
    }
}

impl Label for Elem {
    fn key(&self) -> String {
        format!("{}#{}", self.arity, self.index)
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.arity, self.index)
    }
}

pub trait FiniteAlgebra: Send + Sync {
    fn name(&self) -> String;
    fn arity_cap(&self) -> usize;
    /// Universe size at `arity`, which must be at most the cap.
    fn size(&self, arity: usize) -> usize;
    fn product(&self, g: &Hypergraph<Elem>) -> Result<Elem>;
    fn describe(&self, e: Elem) -> String {
        e.index.to_string()
    }
}

pub type SharedAlgebra = Arc<dyn FiniteAlgebra>;

impl<T: FiniteAlgebra + ?Sized> FiniteAlgebra for Arc<T> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn arity_cap(&self) -> usize {
        (**self).arity_cap()
    }
    fn size(&self, arity: usize) -> usize {
        (**self).size(arity)
    }
    fn product(&self, g: &Hypergraph<Elem>) -> Result<Elem> {
        (**self).product(g)
    }
    fn describe(&self, e: Elem) -> String {
        (**self).describe(e)
    }
}

/// Views a finite algebra as an algebra for polynomial evaluation.
#[derive(Clone)]
pub struct AsAlgebra<A>(pub A);

impl<A: FiniteAlgebra> Algebra for AsAlgebra<A> {
    type Element = Elem;

    fn product(&self, g: &Hypergraph<Elem>) -> Result<Elem> {
        self.0.product(g)
    }
}

pub fn check_arity(alg: &(impl FiniteAlgebra + ?Sized), arity: usize) -> Result<()> {
    let cap = alg.arity_cap();
    if arity > cap {
        return Err(Error::ArityCap { arity, cap });
    }
    Ok(())
}

pub fn check_elem(alg: &(impl FiniteAlgebra + ?Sized), e: Elem) -> Result<()> {
    check_arity(alg, e.arity)?;
    if e.index >= alg.size(e.arity) {
        return Err(Error::RangeError(format!(
            "{} has {} elements of arity {}, got index {}",
            alg.name(),
            alg.size(e.arity),
            e.arity,
            e.index
        )));
    }
    Ok(())
}

/// Checks the output arity and every label of a product input.
pub fn check_input(alg: &(impl FiniteAlgebra + ?Sized), g: &Hypergraph<Elem>) -> Result<()> {
    check_arity(alg, g.arity())?;
    g.edges().iter().try_for_each(|e| check_elem(alg, e.label))
}

pub fn elements(alg: &(impl FiniteAlgebra + ?Sized), arity: usize) -> Vec<Elem> {
    (0..alg.size(arity)).map(|i| Elem::new(arity, i)).collect()
}

/// `a ⊕ b`: the product of the graph with `n` sources and two edges over
/// them labelled `a` and `b`.
pub fn oplus(alg: &(impl FiniteAlgebra + ?Sized), a: Elem, b: Elem) -> Result<Elem> {
    if a.arity != b.arity {
        return Err(Error::ArityMismatch(format!("{a:?} ⊕ {b:?}")));
    }
    let n = a.arity;
    let mut g = Hypergraph::sources_only(n);
    g.add_edge(a, (0..n).collect())?;
    g.add_edge(b, (0..n).collect())?;
    alg.product(&g)
}

/// The value of the edgeless graph with `n` sources.
pub fn empty_element(alg: &(impl FiniteAlgebra + ?Sized), n: usize) -> Result<Elem> {
    alg.product(&Hypergraph::sources_only(n))
}

/// `x` with an isolated source appended.
pub fn add_source(alg: &(impl FiniteAlgebra + ?Sized), x: Elem) -> Result<Elem> {
    let mut g = Hypergraph::sources_only(x.arity + 1);
    g.add_edge(x, (0..x.arity).collect())?;
    alg.product(&g)
}

/// `x` with its last source turned into an ordinary vertex.
pub fn drop_last(alg: &(impl FiniteAlgebra + ?Sized), x: Elem) -> Result<Elem> {
    if x.arity == 0 {
        return Err(Error::RangeError("no source to drop".into()));
    }
    let mut g = Hypergraph::sources_only(x.arity);
    g.add_edge(x, (0..x.arity).collect())?;
    alg.product(&g.forget_sources(&(0..x.arity - 1).collect::<Vec<_>>())?)
}

/// `x` with sources `i` and `i + 1` exchanged.
pub fn swap(alg: &(impl FiniteAlgebra + ?Sized), x: Elem, i: usize) -> Result<Elem> {
    if i + 1 >= x.arity {
        return Err(Error::RangeError(format!("cannot swap source {i} of an arity-{} element", x.arity)));
    }
    let mut f: Vec<usize> = (0..x.arity).collect();
    f.swap(i, i + 1);
    let mut g = Hypergraph::sources_only(x.arity);
    g.add_edge(x, (0..x.arity).collect())?;
    alg.product(&g.forget_sources(&f)?)
}

/// `x` with every source forgotten.
pub fn forget_all(alg: &(impl FiniteAlgebra + ?Sized), x: Elem) -> Result<Elem> {
    let mut g = Hypergraph::sources_only(x.arity);
    g.add_edge(x, (0..x.arity).collect())?;
    alg.product(&g.forget_sources(&[])?)
}

/// `h : HΣ → A`, fixed by the images of the units of `Σ`.
#[derive(Clone)]
pub struct Homomorphism {
    alphabet: RankedAlphabet,
    algebra: SharedAlgebra,
    images: BTreeMap<String, Elem>,
}

impl Homomorphism {
    pub fn new(alphabet: RankedAlphabet, algebra: SharedAlgebra, images: BTreeMap<String, Elem>) -> Result<Self> {
        for s in alphabet.symbols() {
            let img = images
                .get(s.name())
                .ok_or_else(|| Error::UnknownSymbol(format!("no image for `{}`", s.name())))?;
            if img.arity != s.arity() {
                return Err(Error::ArityMismatch(format!("`{}` mapped to {img:?}", s.name())));
            }
            check_elem(&*algebra, *img)?;
        }
        if let Some(extra) = images.keys().find(|k| alphabet.get(k).is_none()) {
            return Err(Error::UnknownSymbol(extra.clone()));
        }
        Ok(Homomorphism {
            alphabet,
            algebra,
            images,
        })
    }

    /// Images given by a function on symbols.
    pub fn from_fn(alphabet: RankedAlphabet, algebra: SharedAlgebra, mut f: impl FnMut(&Symbol) -> Elem) -> Result<Self> {
        let images = alphabet.symbols().iter().map(|s| (s.name().to_string(), f(s))).collect();
        Self::new(alphabet, algebra, images)
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn algebra(&self) -> &SharedAlgebra {
        &self.algebra
    }

    pub fn images(&self) -> &BTreeMap<String, Elem> {
        &self.images
    }

    pub fn image(&self, s: &Symbol) -> Result<Elem> {
        let img = self
            .images
            .get(s.name())
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(s.name().to_string()))?;
        if img.arity != s.arity() {
            return Err(Error::ArityMismatch(format!("`{}` used with arity {}", s.name(), s.arity())));
        }
        Ok(img)
    }

    pub fn apply(&self, g: &Hypergraph<Symbol>) -> Result<Elem> {
        let relabelled = g.try_map_labels(|s| self.image(s))?;
        self.algebra.product(&relabelled)
    }
}

/// A homomorphism together with the accepted arity-zero elements.
#[derive(Clone)]
pub struct Recogniser {
    pub hom: Homomorphism,
    pub accepting: BTreeSet<usize>,
}

impl Recogniser {
    pub fn new(hom: Homomorphism, accepting: impl IntoIterator<Item = usize>) -> Result<Self> {
        let accepting: BTreeSet<usize> = accepting.into_iter().collect();
        if let Some(&i) = accepting.iter().find(|&&i| i >= hom.algebra().size(0)) {
            return Err(Error::RangeError(format!("accepting index {i} outside the arity-0 universe")));
        }
        Ok(Recogniser { hom, accepting })
    }

    pub fn algebra(&self) -> &SharedAlgebra {
        self.hom.algebra()
    }

    pub fn accepts_element(&self, e: Elem) -> bool {
        e.arity == 0 && self.accepting.contains(&e.index)
    }

    pub fn accepts(&self, g: &Hypergraph<Symbol>) -> Result<bool> {
        if g.arity() != 0 {
            return Err(Error::ArityMismatch(format!("languages contain rank-0 graphs, got arity {}", g.arity())));
        }
        Ok(self.accepts_element(self.hom.apply(g)?))
    }
}

pub type Predicate = Arc<dyn Fn(&Hypergraph<Symbol>) -> bool + Send + Sync>;

/// A set of rank-0 graphs, given by a membership predicate and optionally a
/// recognising algebra.
#[derive(Clone)]
pub struct Language {
    pub name: String,
    pub alphabet: RankedAlphabet,
    pub predicate: Predicate,
    pub recogniser: Option<Recogniser>,
}

impl Language {
    pub fn contains(&self, g: &Hypergraph<Symbol>) -> bool {
        (self.predicate)(g)
    }

    pub fn recogniser(&self) -> Result<&Recogniser> {
        self.recogniser
            .as_ref()
            .ok_or_else(|| Error::InvalidGraph(format!("language `{}` has no recogniser", self.name)))
    }

    /// A language defined by its recogniser alone.
    pub fn recognised_by(name: &str, recogniser: Recogniser) -> Language {
        let r = recogniser.clone();
        Language {
            name: name.to_string(),
            alphabet: recogniser.hom.alphabet().clone(),
            predicate: Arc::new(move |g| r.accepts(g).unwrap_or(false)),
            recogniser: Some(recogniser),
        }
    }

    /// The first graph on which predicate and recogniser disagree.
    pub fn find_disagreement<'a>(
        &self,
        graphs: impl IntoIterator<Item = &'a Hypergraph<Symbol>>,
    ) -> Result<Option<Hypergraph<Symbol>>> {
        let r = self.recogniser()?;
        for g in graphs {
            if r.accepts(g)? != self.contains(g) {
                return Ok(Some(g.clone()));
            }
        }
        Ok(None)
    }
}

/// The unit law: `product(unit(x)) = x` for every element up to the cap.
/// Returns the first element that fails.
pub fn check_unit_law(alg: &(impl FiniteAlgebra + ?Sized)) -> Result<Option<Elem>> {
    for n in 0..=alg.arity_cap() {
        for x in elements(alg, n) {
            if alg.product(&Hypergraph::unit(x))? != x {
                return Ok(Some(x));
            }
        }
    }
    Ok(None)
}

/// The associativity square on one nested input: flattening first and
/// multiplying inside first give the same element.
pub fn check_associativity(alg: &(impl FiniteAlgebra + ?Sized), g: &Hypergraph<Hypergraph<Elem>>) -> Result<bool> {
    let outer = g.try_map_labels(|inner| alg.product(inner))?;
    Ok(alg.product(&g.flatten())? == alg.product(&outer)?)
}
