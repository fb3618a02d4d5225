//! Building algebras from algebras: products, the powerset algebra and
//! quotients; and the matching language operations.

use super::{check_input, Elem, FiniteAlgebra, Homomorphism, Language, Recogniser, SharedAlgebra};
use crate::error::{Error, Result};
use crate::hypergraph::{Hyperedge, Hypergraph, Label};
use crate::ranked::Ranked;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Pairs of elements, encoded as `index = ia * |B_n| + ib`.
#[derive(Clone)]
pub struct ProductAlgebra {
    pub left: SharedAlgebra,
    pub right: SharedAlgebra,
}

impl ProductAlgebra {
    pub fn pair(&self, a: Elem, b: Elem) -> Elem {
        Elem::new(a.arity, a.index * self.right.size(a.arity) + b.index)
    }

    pub fn split(&self, e: Elem) -> (Elem, Elem) {
        let nb = self.right.size(e.arity);
        (Elem::new(e.arity, e.index / nb), Elem::new(e.arity, e.index % nb))
    }
}

impl FiniteAlgebra for ProductAlgebra {
    fn name(&self) -> String {
        format!("({} x {})", self.left.name(), self.right.name())
    }
    fn arity_cap(&self) -> usize {
        self.left.arity_cap().min(self.right.arity_cap())
    }
    fn size(&self, arity: usize) -> usize {
        self.left.size(arity) * self.right.size(arity)
    }
    fn product(&self, g: &Hypergraph<Elem>) -> Result<Elem> {
        check_input(self, g)?;
        let a = self.left.product(&g.try_map_labels(|&e| Ok(self.split(e).0))?)?;
        let b = self.right.product(&g.try_map_labels(|&e| Ok(self.split(e).1))?)?;
        Ok(self.pair(a, b))
    }
    fn describe(&self, e: Elem) -> String {
        let (a, b) = self.split(e);
        format!("({}, {})", self.left.describe(a), self.right.describe(b))
    }
}

/// Runs two recognisers side by side; `accept` combines their verdicts.
pub fn product_recogniser(r1: &Recogniser, r2: &Recogniser, accept: impl Fn(bool, bool) -> bool) -> Result<Recogniser> {
    if r1.hom.alphabet() != r2.hom.alphabet() {
        return Err(Error::VocabularyMismatch("recognisers over different alphabets".into()));
    }
    let alg = ProductAlgebra {
        left: r1.algebra().clone(),
        right: r2.algebra().clone(),
    };
    let images: BTreeMap<String, Elem> = r1
        .hom
        .images()
        .iter()
        .map(|(name, &a)| (name.clone(), alg.pair(a, r2.hom.images()[name])))
        .collect();
    let mut accepting = Vec::new();
    for x in 0..alg.left.size(0) {
        for y in 0..alg.right.size(0) {
            if accept(r1.accepting.contains(&x), r2.accepting.contains(&y)) {
                accepting.push(alg.pair(Elem::new(0, x), Elem::new(0, y)).index);
            }
        }
    }
    let hom = Homomorphism::new(r1.hom.alphabet().clone(), Arc::new(alg), images)?;
    Recogniser::new(hom, accepting)
}

pub fn complement(lang: &Language) -> Result<Language> {
    let r = lang.recogniser()?;
    let flipped = (0..r.algebra().size(0)).filter(|i| !r.accepting.contains(i));
    let p = lang.predicate.clone();
    Ok(Language {
        name: format!("not ({})", lang.name),
        alphabet: lang.alphabet.clone(),
        predicate: Arc::new(move |g| !p(g)),
        recogniser: Some(Recogniser::new(r.hom.clone(), flipped)?),
    })
}

fn combine(l1: &Language, l2: &Language, op: &str, f: fn(bool, bool) -> bool) -> Result<Language> {
    let r = product_recogniser(l1.recogniser()?, l2.recogniser()?, f)?;
    let (p, q) = (l1.predicate.clone(), l2.predicate.clone());
    Ok(Language {
        name: format!("({}) {op} ({})", l1.name, l2.name),
        alphabet: l1.alphabet.clone(),
        predicate: Arc::new(move |g| f(p(g), q(g))),
        recogniser: Some(r),
    })
}

pub fn intersection(l1: &Language, l2: &Language) -> Result<Language> {
    combine(l1, l2, "and", |a, b| a && b)
}

pub fn union(l1: &Language, l2: &Language) -> Result<Language> {
    combine(l1, l2, "or", |a, b| a || b)
}

/// A finite set of same-arity labels, used as a single label.
#[derive(Clone, Debug)]
pub struct LabelSet<L> {
    arity: usize,
    items: Vec<L>,
}

impl<L: Label> LabelSet<L> {
    /// Duplicates (by key) are removed; every item must have `arity`.
    pub fn new(arity: usize, items: impl IntoIterator<Item = L>) -> Result<Self> {
        let mut by_key: BTreeMap<String, L> = BTreeMap::new();
        for l in items {
            if l.arity() != arity {
                return Err(Error::ArityMismatch(format!("{l:?} in a set of arity {arity}")));
            }
            by_key.entry(l.key()).or_insert(l);
        }
        Ok(LabelSet {
            arity,
            items: by_key.into_values().collect(),
        })
    }

    pub fn singleton(l: L) -> Self {
        LabelSet {
            arity: l.arity(),
            items: vec![l],
        }
    }

    pub fn items(&self) -> &[L] {
        &self.items
    }
}

impl<L> Ranked for LabelSet<L> {
    fn arity(&self) -> usize {
        self.arity
    }
}

impl<L: Label> Label for LabelSet<L> {
    fn key(&self) -> String {
        let keys: Vec<String> = self.items.iter().map(|l| l.key()).collect();
        format!("{{{}}}/{}", keys.join(","), self.arity)
    }
}

/// Every way of choosing one label from each edge's set. The result has
/// `∏ |label set|` graphs, all with the shape of `g`.
pub fn delta<L: Label>(g: &Hypergraph<LabelSet<L>>) -> Vec<Hypergraph<L>> {
    let mut out = Vec::new();
    if g.edges().iter().any(|e| e.label.items.is_empty()) {
        return out;
    }
    let mut pick = vec![0usize; g.edges().len()];
    loop {
        let edges = g
            .edges()
            .iter()
            .zip(&pick)
            .map(|(e, &k)| Hyperedge {
                label: e.label.items[k].clone(),
                incidence: e.incidence.clone(),
            })
            .collect();
        out.push(Hypergraph::new(g.vertex_count(), edges, g.sources().to_vec()).expect("same shape as input"));
        let mut i = 0;
        loop {
            if i == pick.len() {
                return out;
            }
            pick[i] += 1;
            if pick[i] < g.edges()[i].label.items.len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

/// Largest per-arity universe accepted by [`PowersetAlgebra`].
pub const POWERSET_LIMIT: usize = 16;

/// Elements of arity `n` are subsets of the base universe, as bit masks.
/// The product of a graph is the set of base products of all its label
/// choices.
#[derive(Clone)]
pub struct PowersetAlgebra {
    base: SharedAlgebra,
}

impl PowersetAlgebra {
    pub fn new(base: SharedAlgebra) -> Result<Self> {
        for n in 0..=base.arity_cap() {
            if base.size(n) > POWERSET_LIMIT {
                return Err(Error::TooLarge(format!(
                    "powerset of a {}-element universe at arity {n}",
                    base.size(n)
                )));
            }
        }
        Ok(PowersetAlgebra { base })
    }

    pub fn base(&self) -> &SharedAlgebra {
        &self.base
    }

    pub fn to_set(&self, e: Elem) -> LabelSet<Elem> {
        let items = (0..self.base.size(e.arity))
            .filter(|i| e.index >> i & 1 == 1)
            .map(|i| Elem::new(e.arity, i));
        LabelSet::new(e.arity, items).expect("items share the arity")
    }

    pub fn from_set(&self, s: &LabelSet<Elem>) -> Elem {
        Elem::new(s.arity(), s.items().iter().fold(0, |m, e| m | 1 << e.index))
    }

    pub fn singleton(&self, e: Elem) -> Elem {
        Elem::new(e.arity, 1 << e.index)
    }
}

impl FiniteAlgebra for PowersetAlgebra {
    fn name(&self) -> String {
        format!("P({})", self.base.name())
    }
    fn arity_cap(&self) -> usize {
        self.base.arity_cap()
    }
    fn size(&self, arity: usize) -> usize {
        1 << self.base.size(arity)
    }
    fn product(&self, g: &Hypergraph<Elem>) -> Result<Elem> {
        check_input(self, g)?;
        let sets = g.try_map_labels(|&e| Ok(self.to_set(e)))?;
        let mut mask = 0usize;
        for choice in delta(&sets) {
            mask |= 1 << self.base.product(&choice)?.index;
        }
        Ok(Elem::new(g.arity(), mask))
    }
    fn describe(&self, e: Elem) -> String {
        let s = self.to_set(e);
        let items: Vec<String> = s.items().iter().map(|&x| self.base.describe(x)).collect();
        format!("{{{}}}", items.join(", "))
    }
}

/// The base algebra with elements of each arity up to `cap` merged into
/// classes. The product multiplies class representatives.
#[derive(Clone)]
pub struct QuotientAlgebra {
    base: SharedAlgebra,
    cap: usize,
    class_of: Vec<Vec<usize>>,
    members: Vec<Vec<Vec<usize>>>,
}

impl QuotientAlgebra {
    /// `class_of[n][i]` is the class of base element `i` of arity `n`;
    /// classes of each arity must be numbered `0..k` without gaps.
    pub fn new(base: SharedAlgebra, class_of: Vec<Vec<usize>>) -> Result<Self> {
        let cap = class_of
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::RangeError("quotient needs at least arity 0".into()))?;
        super::check_arity(&*base, cap)?;
        let mut members = Vec::new();
        for (n, classes) in class_of.iter().enumerate() {
            if classes.len() != base.size(n) {
                return Err(Error::RangeError(format!("arity {n}: {} classes for {} elements", classes.len(), base.size(n))));
            }
            let k = classes.iter().max().map_or(0, |m| m + 1);
            let mut m = vec![Vec::new(); k];
            for (i, &c) in classes.iter().enumerate() {
                m[c].push(i);
            }
            if m.iter().any(|b| b.is_empty()) {
                return Err(Error::RangeError(format!("arity {n}: class numbers have gaps")));
            }
            members.push(m);
        }
        Ok(QuotientAlgebra {
            base,
            cap,
            class_of,
            members,
        })
    }

    pub fn base(&self) -> &SharedAlgebra {
        &self.base
    }

    pub fn class_of(&self, e: Elem) -> Elem {
        Elem::new(e.arity, self.class_of[e.arity][e.index])
    }

    pub fn members(&self, e: Elem) -> Vec<Elem> {
        self.members[e.arity][e.index].iter().map(|&i| Elem::new(e.arity, i)).collect()
    }

    pub fn representative(&self, e: Elem) -> Elem {
        Elem::new(e.arity, self.members[e.arity][e.index][0])
    }
}

impl FiniteAlgebra for QuotientAlgebra {
    fn name(&self) -> String {
        format!("{}/~", self.base.name())
    }
    fn arity_cap(&self) -> usize {
        self.cap
    }
    fn size(&self, arity: usize) -> usize {
        self.members[arity].len()
    }
    fn product(&self, g: &Hypergraph<Elem>) -> Result<Elem> {
        check_input(self, g)?;
        let reps = g.try_map_labels(|&e| Ok(self.representative(e)))?;
        Ok(self.class_of(self.base.product(&reps)?))
    }
    fn describe(&self, e: Elem) -> String {
        let items: Vec<String> = self.members(e).into_iter().map(|x| self.base.describe(x)).collect();
        format!("[{}]", items.join(" "))
    }
}
