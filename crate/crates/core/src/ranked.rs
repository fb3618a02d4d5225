//! Ranked alphabets and rank-preserving maps between them.

use crate::error::{Error, Result};
use crate::sexp::{self, Sexp};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Anything with a fixed number of attachment points.
pub trait Ranked {
    fn arity(&self) -> usize;
}

/// A named symbol together with its arity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Symbol {
    name: Arc<str>,
    arity: usize,
}

impl Symbol {
    pub fn new(name: &str, arity: usize) -> Symbol {
        Symbol {
            name: Arc::from(name),
            arity,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl Ranked for Symbol {
    fn arity(&self) -> usize {
        self.arity
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A finite set of symbols with unique names, kept in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RankedAlphabet {
    symbols: Vec<Symbol>,
    #[serde(skip)]
    index: BTreeMap<String, usize>,
}

impl RankedAlphabet {
    pub fn new<'a>(entries: impl IntoIterator<Item = (&'a str, usize)>) -> Result<RankedAlphabet> {
        let mut alphabet = RankedAlphabet::default();
        for (name, arity) in entries {
            alphabet.insert(Symbol::new(name, arity))?;
        }
        Ok(alphabet)
    }

    pub fn from_symbols(symbols: impl IntoIterator<Item = Symbol>) -> Result<RankedAlphabet> {
        let mut alphabet = RankedAlphabet::default();
        for s in symbols {
            alphabet.insert(s)?;
        }
        Ok(alphabet)
    }

    /// Like [`from_symbols`](Self::from_symbols), but repeated symbols are
    /// allowed; the same name at two arities is still an error.
    pub fn from_used(symbols: impl IntoIterator<Item = Symbol>) -> Result<RankedAlphabet> {
        let mut alphabet = RankedAlphabet::default();
        for s in symbols {
            match alphabet.get(s.name()) {
                Some(t) if *t == s => {}
                Some(t) => {
                    return Err(Error::ArityMismatch(format!(
                        "`{}` used with arities {} and {}",
                        s.name(),
                        t.arity(),
                        s.arity()
                    )))
                }
                None => alphabet.insert(s)?,
            }
        }
        Ok(alphabet)
    }

    pub fn insert(&mut self, symbol: Symbol) -> Result<()> {
        sexp::check_atom(symbol.name())?;
        if self.index.contains_key(symbol.name()) {
            return Err(Error::DuplicateName(symbol.name().to_string()));
        }
        self.index.insert(symbol.name().to_string(), self.symbols.len());
        self.symbols.push(symbol);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Symbol> {
        self.index.get(name).map(|&i| &self.symbols[i])
    }

    pub fn lookup(&self, name: &str) -> Result<&Symbol> {
        self.get(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn contains(&self, symbol: &Symbol) -> bool {
        self.get(symbol.name()) == Some(symbol)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.arity()).max().unwrap_or(0)
    }

    /// Union of two alphabets; a shared name must have the same arity.
    pub fn union(&self, other: &RankedAlphabet) -> Result<RankedAlphabet> {
        let mut out = self.clone();
        for s in &other.symbols {
            match out.get(s.name()) {
                Some(t) if t.arity() == s.arity() => {}
                Some(t) => {
                    return Err(Error::ArityMismatch(format!(
                        "`{}` has arity {} and {}",
                        s.name(),
                        t.arity(),
                        s.arity()
                    )))
                }
                None => out.insert(s.clone())?,
            }
        }
        Ok(out)
    }

    pub fn to_sexp(&self) -> Sexp {
        Sexp::tagged(
            "alphabet",
            self.symbols
                .iter()
                .map(|s| Sexp::list(vec![Sexp::atom(s.name()), Sexp::atom(s.arity().to_string())]))
                .collect(),
        )
    }

    pub fn from_sexp(s: &Sexp) -> Result<RankedAlphabet> {
        let mut alphabet = RankedAlphabet::default();
        for entry in s.expect_tagged("alphabet")? {
            alphabet.insert_entry(entry)?;
        }
        Ok(alphabet)
    }

    /// Reads one `(NAME ARITY)` entry, reporting duplicates at its position.
    pub(crate) fn insert_entry(&mut self, entry: &Sexp) -> Result<()> {
        let items = entry.as_list()?;
        if items.len() != 2 {
            return Err(entry.pos().error("expected `(NAME ARITY)`"));
        }
        let name = items[0].as_atom()?;
        let arity = items[1].as_usize()?;
        if self.index.contains_key(name) {
            return Err(entry.pos().error(format!("duplicate name `{name}`")));
        }
        self.insert(Symbol::new(name, arity))
    }

    pub fn parse(text: &str) -> Result<RankedAlphabet> {
        RankedAlphabet::from_sexp(&sexp::parse_one(text)?)
    }

    pub fn to_text(&self) -> String {
        self.to_sexp().to_pretty()
    }
}

/// A name-level map from one alphabet into another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedMap {
    pub domain: RankedAlphabet,
    pub codomain: RankedAlphabet,
    mapping: BTreeMap<String, String>,
}

impl RankedMap {
    pub fn new<'a>(
        domain: RankedAlphabet,
        codomain: RankedAlphabet,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<RankedMap> {
        let mut mapping = BTreeMap::new();
        for (from, to) in pairs {
            domain.lookup(from)?;
            codomain.lookup(to)?;
            if mapping.insert(from.to_string(), to.to_string()).is_some() {
                return Err(Error::DuplicateName(from.to_string()));
            }
        }
        Ok(RankedMap {
            domain,
            codomain,
            mapping,
        })
    }

    pub fn identity(alphabet: &RankedAlphabet) -> RankedMap {
        RankedMap {
            domain: alphabet.clone(),
            codomain: alphabet.clone(),
            mapping: alphabet
                .symbols()
                .iter()
                .map(|s| (s.name().to_string(), s.name().to_string()))
                .collect(),
        }
    }

    /// Image of a symbol, which must belong to the domain.
    pub fn apply(&self, symbol: &Symbol) -> Result<Symbol> {
        if !self.domain.contains(symbol) {
            return Err(Error::UnknownSymbol(symbol.name().to_string()));
        }
        let target = self
            .mapping
            .get(symbol.name())
            .ok_or_else(|| Error::UnknownSymbol(symbol.name().to_string()))?;
        Ok(self.codomain.lookup(target)?.clone())
    }

    /// Checks the map is total on the domain and preserves every arity.
    pub fn check_rank_preserving(&self) -> Result<()> {
        for s in self.domain.symbols() {
            let t = self.apply(s)?;
            if t.arity() != s.arity() {
                return Err(Error::ArityMismatch(format!(
                    "`{}`/{} mapped to `{}`/{}",
                    s.name(),
                    s.arity(),
                    t.name(),
                    t.arity()
                )));
            }
        }
        Ok(())
    }

    /// `other ∘ self`
    pub fn then(&self, other: &RankedMap) -> Result<RankedMap> {
        let mut mapping = BTreeMap::new();
        for s in self.domain.symbols() {
            let mid = self.apply(s)?;
            let out = other.apply(&mid)?;
            mapping.insert(s.name().to_string(), out.name().to_string());
        }
        Ok(RankedMap {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            mapping,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected() {
        assert_eq!(
            RankedAlphabet::new([("a", 1), ("a", 2)]).unwrap_err(),
            Error::DuplicateName("a".into())
        );
        let err = RankedAlphabet::parse("(alphabet (a 1)\n (a 2))").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 2, .. }));
    }

    #[test]
    fn alphabet_roundtrip() {
        let text = "(alphabet\n  (edge 2)\n  (a 1)\n  (c 0))\n";
        let a = RankedAlphabet::parse(text).unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(a.to_text(), text);
    }

    #[test]
    fn rank_preservation() {
        let dom = RankedAlphabet::new([("a", 1), ("b", 2)]).unwrap();
        let cod = RankedAlphabet::new([("x", 1), ("y", 2)]).unwrap();
        let good = RankedMap::new(dom.clone(), cod.clone(), [("a", "x"), ("b", "y")]).unwrap();
        good.check_rank_preserving().unwrap();
        let bad = RankedMap::new(dom.clone(), cod.clone(), [("a", "y"), ("b", "y")]).unwrap();
        assert!(matches!(bad.check_rank_preserving(), Err(Error::ArityMismatch(_))));
        let partial = RankedMap::new(dom, cod, [("a", "x")]).unwrap();
        assert!(matches!(partial.check_rank_preserving(), Err(Error::UnknownSymbol(_))));
    }
}
