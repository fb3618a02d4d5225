//! Concrete algebras recognising the base languages, plus the small helper
//! algebras used to build others.

use super::{check_input, Elem, FiniteAlgebra, Homomorphism, Language, Recogniser, SharedAlgebra};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::mso::base::{base_count_divisible, base_shared_vertex, count_label};
use crate::ranked::{Ranked, RankedAlphabet, Symbol};
use std::sync::Arc;

fn check_symbol(alphabet: &RankedAlphabet, s: &Symbol) -> Result<()> {
    let found = alphabet.lookup(s.name())?;
    if found.arity() != s.arity() {
        return Err(Error::ArityMismatch(format!("{s:?} is declared as {found:?}")));
    }
    Ok(())
}

/// One element per arity.
#[derive(Clone, Debug)]
pub struct TrivialAlgebra {
    pub cap: usize,
}

impl FiniteAlgebra for TrivialAlgebra {
    fn name(&self) -> String {
        "trivial".into()
    }
    fn arity_cap(&self) -> usize {
        self.cap
    }
    fn size(&self, _: usize) -> usize {
        1
    }
    fn product(&self, g: &Hypergraph<Elem>) -> Result<Elem> {
        check_input(self, g)?;
        Ok(Elem::new(g.arity(), 0))
    }
}

/// The language of all rank-0 graphs.
pub fn trivial_language(alphabet: &RankedAlphabet, cap: usize) -> Result<Language> {
    let alg: SharedAlgebra = Arc::new(TrivialAlgebra { cap });
    let hom = Homomorphism::from_fn(alphabet.clone(), alg, |s| Elem::new(s.arity(), 0))?;
    let mut lang = Language::recognised_by("all", Recogniser::new(hom, [0])?);
    lang.predicate = Arc::new(|_| true);
    Ok(lang)
}

/// Residues modulo `m` on every arity; the product adds.
#[derive(Clone, Debug)]
pub struct DivisibilityAlgebra {
    pub modulus: usize,
    pub cap: usize,
}

impl FiniteAlgebra for DivisibilityAlgebra {
    fn name(&self) -> String {
        format!("mod{}", self.modulus)
    }
    fn arity_cap(&self) -> usize {
        self.cap
    }
    fn size(&self, _: usize) -> usize {
        self.modulus
    }
    fn product(&self, g: &Hypergraph<Elem>) -> Result<Elem> {
        check_input(self, g)?;
        let sum: usize = g.edges().iter().map(|e| e.label.index).sum();
        Ok(Elem::new(g.arity(), sum % self.modulus))
    }
    fn describe(&self, e: Elem) -> String {
        format!("r{}", e.index)
    }
}

/// Counts `a`-edges modulo `m`; accepts residue 0.
pub fn divisibility_algebra(a: &Symbol, m: usize, alphabet: &RankedAlphabet, cap: usize) -> Result<Recogniser> {
    if m == 0 {
        return Err(Error::RangeError("modulus must be at least 1".into()));
    }
    check_symbol(alphabet, a)?;
    let alg: SharedAlgebra = Arc::new(DivisibilityAlgebra { modulus: m, cap });
    let hom = Homomorphism::from_fn(alphabet.clone(), alg, |s| Elem::new(s.arity(), usize::from(s == a) % m))?;
    Recogniser::new(hom, [0])
}

pub fn divisibility_language(a: &Symbol, m: usize, alphabet: &RankedAlphabet, cap: usize) -> Result<Language> {
    let r = divisibility_algebra(a, m, alphabet, cap)?;
    let a = a.clone();
    Ok(Language {
        name: format!("count({}) = 0 mod {m}", a.name()),
        alphabet: alphabet.clone(),
        predicate: Arc::new(move |g| base_count_divisible(g, &a, m).unwrap_or(false)),
        recogniser: Some(r),
    })
}

/// A counter saturating at `limit`.
#[derive(Clone, Debug)]
pub struct ThresholdAlgebra {
    pub limit: usize,
    pub cap: usize,
}

impl FiniteAlgebra for ThresholdAlgebra {
    fn name(&self) -> String {
        format!("count<={}", self.limit)
    }
    fn arity_cap(&self) -> usize {
        self.cap
    }
    fn size(&self, _: usize) -> usize {
        self.limit + 1
    }
    fn product(&self, g: &Hypergraph<Elem>) -> Result<Elem> {
        check_input(self, g)?;
        let sum: usize = g.edges().iter().map(|e| e.label.index).sum();
        Ok(Elem::new(g.arity(), sum.min(self.limit)))
    }
    fn describe(&self, e: Elem) -> String {
        if e.index == self.limit {
            format!("{}+", e.index)
        } else {
            e.index.to_string()
        }
    }
}

/// Counts `a`-edges up to `limit`; accepts at least `limit` of them.
pub fn threshold_algebra(a: &Symbol, limit: usize, alphabet: &RankedAlphabet, cap: usize) -> Result<Recogniser> {
    check_symbol(alphabet, a)?;
    let alg: SharedAlgebra = Arc::new(ThresholdAlgebra { limit, cap });
    let hom = Homomorphism::from_fn(alphabet.clone(), alg, |s| Elem::new(s.arity(), usize::from(s == a).min(limit)))?;
    Recogniser::new(hom, [limit])
}

pub fn threshold_language(a: &Symbol, limit: usize, alphabet: &RankedAlphabet, cap: usize) -> Result<Language> {
    let r = threshold_algebra(a, limit, alphabet, cap)?;
    let a = a.clone();
    Ok(Language {
        name: format!("count({}) >= {limit}", a.name()),
        alphabet: alphabet.clone(),
        predicate: Arc::new(move |g| count_label(g, &a) >= limit),
        recogniser: Some(r),
    })
}

/// Two elements per arity; the product is "some label is 1".
#[derive(Clone, Debug)]
pub struct OrAlgebra {
    pub cap: usize,
}

impl FiniteAlgebra for OrAlgebra {
    fn name(&self) -> String {
        "or".into()
    }
    fn arity_cap(&self) -> usize {
        self.cap
    }
    fn size(&self, _: usize) -> usize {
        2
    }
    fn product(&self, g: &Hypergraph<Elem>) -> Result<Elem> {
        check_input(self, g)?;
        Ok(Elem::new(g.arity(), usize::from(g.edges().iter().any(|e| e.label.index == 1))))
    }
}

/// "Has an `a`-edge", accepting either way: an algebra factor that carries
/// information no language here depends on.
pub fn flag_algebra(a: &Symbol, alphabet: &RankedAlphabet, cap: usize) -> Result<Recogniser> {
    check_symbol(alphabet, a)?;
    let alg: SharedAlgebra = Arc::new(OrAlgebra { cap });
    let hom = Homomorphism::from_fn(alphabet.clone(), alg, |s| Elem::new(s.arity(), usize::from(s == a)))?;
    Recogniser::new(hom, [0, 1])
}

/// The divisibility language recognised by the product of the divisibility
/// algebra with [`flag_algebra`].
pub fn padded_divisibility_language(a: &Symbol, m: usize, alphabet: &RankedAlphabet, cap: usize) -> Result<Language> {
    let base = divisibility_language(a, m, alphabet, cap)?;
    let flag = flag_algebra(a, alphabet, cap)?;
    let r = super::combinators::product_recogniser(base.recogniser()?, &flag, |x, _| x)?;
    Ok(Language {
        name: format!("{} (padded)", base.name),
        recogniser: Some(r),
        ..base
    })
}

const NONE: u8 = 0;
const PIN_A: u8 = 1;
const PIN_B: u8 = 2;

/// Elements of arity `n` are `⊤` (index 0) or an assignment of a pin kind
/// in `{none, a, b}` to every source (index `1 + Σ p_k 3^k`). A source
/// carries pin `a` when some `a`-edge has its `i`-th attachment there, and
/// pin `b` likewise for `(b, j)`. Two pins that witness the property meeting
/// on one vertex give `⊤`.
#[derive(Clone, Debug)]
pub struct SharedVertexAlgebra {
    pub cap: usize,
    /// `(a, i) = (b, j)` and distinct edges are required: a single pin kind
    /// is used and two pins on one vertex give `⊤`.
    pub single_kind: bool,
}

impl SharedVertexAlgebra {
    pub fn top(arity: usize) -> Elem {
        Elem::new(arity, 0)
    }

    pub fn encode(pins: &[u8]) -> Elem {
        let mut idx = 0usize;
        for &p in pins.iter().rev() {
            idx = idx * 3 + p as usize;
        }
        Elem::new(pins.len(), idx + 1)
    }

    /// `None` for `⊤`.
    pub fn decode(e: Elem) -> Option<Vec<u8>> {
        if e.index == 0 {
            return None;
        }
        let mut idx = e.index - 1;
        let mut pins = Vec::with_capacity(e.arity);
        for _ in 0..e.arity {
            pins.push((idx % 3) as u8);
            idx /= 3;
        }
        Some(pins)
    }

    fn merge(&self, p: u8, q: u8) -> Option<u8> {
        match (p, q) {
            (NONE, x) | (x, NONE) => Some(x),
            (x, y) if x == y && !self.single_kind => Some(x),
            _ => None,
        }
    }
}

impl FiniteAlgebra for SharedVertexAlgebra {
    fn name(&self) -> String {
        "shared-vertex".into()
    }
    fn arity_cap(&self) -> usize {
        self.cap
    }
    fn size(&self, arity: usize) -> usize {
        1 + 3usize.pow(arity as u32)
    }
    fn product(&self, g: &Hypergraph<Elem>) -> Result<Elem> {
        check_input(self, g)?;
        let top = Self::top(g.arity());
        let mut state = vec![NONE; g.vertex_count()];
        for e in g.edges() {
            let Some(pins) = Self::decode(e.label) else { return Ok(top) };
            for (&v, &p) in e.incidence.iter().zip(&pins) {
                match self.merge(state[v], p) {
                    Some(s) => state[v] = s,
                    None => return Ok(top),
                }
            }
        }
        let pins: Vec<u8> = g.sources().iter().map(|&v| state[v]).collect();
        Ok(Self::encode(&pins))
    }
    fn describe(&self, e: Elem) -> String {
        match Self::decode(e) {
            None => "top".into(),
            Some(pins) => {
                let s: Vec<&str> = pins.iter().map(|p| ["-", "a", "b"][*p as usize]).collect();
                format!("[{}]", s.join(","))
            }
        }
    }
}

/// Recognises "some `a`-edge and `b`-edge satisfy `e[i] = f[j]`", positions
/// zero-based. `strict` requires `e ≠ f`.
pub fn shared_vertex_algebra(
    (a, i): (&Symbol, usize),
    (b, j): (&Symbol, usize),
    strict: bool,
    alphabet: &RankedAlphabet,
    cap: usize,
) -> Result<Recogniser> {
    check_symbol(alphabet, a)?;
    check_symbol(alphabet, b)?;
    if i >= a.arity() || j >= b.arity() {
        return Err(Error::RangeError(format!("positions ({i}, {j}) for {a:?} and {b:?}")));
    }
    let identical = a == b && i == j;
    let alg = SharedVertexAlgebra {
        cap,
        single_kind: identical && strict,
    };
    let image = |s: &Symbol| -> Elem {
        let mut pins = vec![NONE; s.arity()];
        if identical {
            if s == a {
                if strict {
                    pins[i] = PIN_A;
                } else {
                    return SharedVertexAlgebra::top(s.arity());
                }
            }
        } else {
            if s == a {
                pins[i] = PIN_A;
            }
            if s == b {
                pins[j] = PIN_B;
            }
        }
        SharedVertexAlgebra::encode(&pins)
    };
    let hom = Homomorphism::from_fn(alphabet.clone(), Arc::new(alg), image)?;
    Recogniser::new(hom, [0])
}

pub fn shared_vertex_language(
    (a, i): (&Symbol, usize),
    (b, j): (&Symbol, usize),
    strict: bool,
    alphabet: &RankedAlphabet,
    cap: usize,
) -> Result<Language> {
    let r = shared_vertex_algebra((a, i), (b, j), strict, alphabet, cap)?;
    let (a, b) = (a.clone(), b.clone());
    Ok(Language {
        name: format!("{}[{}] = {}[{}]", a.name(), i + 1, b.name(), j + 1),
        alphabet: alphabet.clone(),
        predicate: Arc::new(move |g| base_shared_vertex(g, (&a, i), (&b, j), strict).unwrap_or(false)),
        recogniser: Some(r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::oplus;

    #[test]
    fn residues_add() {
        let alg = DivisibilityAlgebra { modulus: 3, cap: 2 };
        assert_eq!(oplus(&alg, Elem::new(0, 1), Elem::new(0, 2)).unwrap(), Elem::new(0, 0));
    }

    #[test]
    fn cap_is_enforced() {
        let alg = DivisibilityAlgebra { modulus: 3, cap: 1 };
        let g = Hypergraph::unit(Elem::new(2, 0));
        assert_eq!(alg.product(&g).unwrap_err(), Error::ArityCap { arity: 2, cap: 1 });
    }

    #[test]
    fn shared_vertex_encoding() {
        for pins in [vec![], vec![0, 1, 2], vec![2, 2]] {
            assert_eq!(SharedVertexAlgebra::decode(SharedVertexAlgebra::encode(&pins)), Some(pins));
        }
        let alg = SharedVertexAlgebra { cap: 2, single_kind: false };
        assert_eq!(alg.describe(SharedVertexAlgebra::encode(&[1, 0])), "[a,-]");
    }

    #[test]
    fn two_pins_fused_give_top() {
        let alphabet = RankedAlphabet::new([("edge", 2)]).unwrap();
        let e = alphabet.get("edge").unwrap().clone();
        let r = shared_vertex_algebra((&e, 0), (&e, 1), false, &alphabet, 2).unwrap();
        let mut g = Hypergraph::sources_only(0);
        for _ in 0..3 {
            g.add_vertex();
        }
        g.add_edge(e.clone(), vec![0, 1]).unwrap();
        assert!(!r.accepts(&g).unwrap());
        g.add_edge(e.clone(), vec![2, 0]).unwrap();
        assert!(r.accepts(&g).unwrap());
        assert!(!r.accepts(&Hypergraph::empty()).unwrap());
    }
}
