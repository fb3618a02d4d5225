//! Finite relational models.

use crate::canon::{self, Structure};
use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Relation {
    pub arity: usize,
    pub tuples: HashSet<Vec<usize>>,
}

impl Relation {
    pub fn new(arity: usize) -> Relation {
        Relation {
            arity,
            tuples: HashSet::new(),
        }
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        self.tuples.contains(t)
    }

    pub fn sorted(&self) -> Vec<&Vec<usize>> {
        let mut v: Vec<&Vec<usize>> = self.tuples.iter().collect();
        v.sort();
        v
    }
}

/// Relation names with arities, and constant names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub relations: BTreeMap<String, usize>,
    pub constants: BTreeSet<String>,
}

impl Vocabulary {
    pub fn relation(mut self, name: &str, arity: usize) -> Self {
        self.relations.insert(name.to_string(), arity);
        self
    }

    pub fn constant(mut self, name: &str) -> Self {
        self.constants.insert(name.to_string());
        self
    }

    /// Describes the first difference, if any.
    pub fn difference(&self, other: &Vocabulary) -> Option<String> {
        for (r, k) in &self.relations {
            match other.relations.get(r) {
                None => return Some(format!("relation `{r}` missing on one side")),
                Some(j) if j != k => return Some(format!("relation `{r}` has arities {k} and {j}")),
                _ => {}
            }
        }
        if let Some(r) = other.relations.keys().find(|r| !self.relations.contains_key(*r)) {
            return Some(format!("relation `{r}` missing on one side"));
        }
        if let Some(c) = self.constants.symmetric_difference(&other.constants).next() {
            return Some(format!("constant `{c}` missing on one side"));
        }
        None
    }

    pub fn check_same(&self, other: &Vocabulary) -> Result<()> {
        match self.difference(other) {
            Some(d) => Err(Error::VocabularyMismatch(d)),
            None => Ok(()),
        }
    }
}

/// A universe `0..size`, named relations and named constants.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Model {
    size: usize,
    relations: BTreeMap<String, Relation>,
    constants: BTreeMap<String, usize>,
}

impl Model {
    pub fn new(size: usize) -> Model {
        Model {
            size,
            ..Model::default()
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn relations(&self) -> &BTreeMap<String, Relation> {
        &self.relations
    }

    pub fn constants(&self) -> &BTreeMap<String, usize> {
        &self.constants
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.constants.get(name).copied()
    }

    /// Declares an empty relation. Declaring it again with the same arity is
    /// a no-op.
    pub fn declare(&mut self, name: &str, arity: usize) -> Result<()> {
        match self.relations.get(name) {
            Some(r) if r.arity != arity => Err(Error::ArityMismatch(format!(
                "relation `{name}` declared with arities {} and {arity}",
                r.arity
            ))),
            Some(_) => Ok(()),
            None => {
                self.relations.insert(name.to_string(), Relation::new(arity));
                Ok(())
            }
        }
    }

    pub fn insert(&mut self, name: &str, tuple: Vec<usize>) -> Result<()> {
        self.declare(name, tuple.len())?;
        if let Some(&x) = tuple.iter().find(|&&x| x >= self.size) {
            return Err(Error::RangeError(format!("element {x} outside a universe of size {}", self.size)));
        }
        self.relations.get_mut(name).expect("declared").tuples.insert(tuple);
        Ok(())
    }

    pub fn set_constant(&mut self, name: &str, value: usize) -> Result<()> {
        if value >= self.size {
            return Err(Error::RangeError(format!(
                "constant `{name}` = {value} outside a universe of size {}",
                self.size
            )));
        }
        self.constants.insert(name.to_string(), value);
        Ok(())
    }

    pub fn holds(&self, name: &str, tuple: &[usize]) -> bool {
        self.relations.get(name).is_some_and(|r| r.contains(tuple))
    }

    pub fn vocabulary(&self) -> Vocabulary {
        Vocabulary {
            relations: self.relations.iter().map(|(n, r)| (n.clone(), r.arity)).collect(),
            constants: self.constants.keys().cloned().collect(),
        }
    }

    pub fn to_structure(&self) -> Structure {
        let mut st = Structure::new(vec![String::new(); self.size]);
        for (name, r) in &self.relations {
            // Declared relations must show up even when empty.
            st.push(format!("decl:{name}/{}", r.arity), Vec::new());
            for t in r.sorted() {
                st.push(format!("r:{name}"), t.clone());
            }
        }
        for (name, &v) in &self.constants {
            st.push(format!("c:{name}"), vec![v]);
        }
        st
    }

    pub fn is_isomorphic(&self, other: &Model) -> bool {
        self.size == other.size
            && self.vocabulary() == other.vocabulary()
            && canon::isomorphism(&self.to_structure(), &other.to_structure()).is_some()
    }

    pub fn canonical_code(&self) -> String {
        format!("{}|{}", self.size, canon::canonicalize(&self.to_structure()).code)
    }

    /// Whether `map` (a bijection from this universe to `other`'s) carries
    /// every relation and constant exactly onto `other`'s.
    pub fn is_isomorphism(&self, other: &Model, map: &[usize]) -> bool {
        if self.size != other.size || map.len() != self.size || self.vocabulary() != other.vocabulary() {
            return false;
        }
        let mut seen = vec![false; other.size];
        for &y in map {
            if y >= other.size || std::mem::replace(&mut seen[y], true) {
                return false;
            }
        }
        for (name, r) in &self.relations {
            let o = &other.relations[name];
            if r.tuples.len() != o.tuples.len() {
                return false;
            }
            if !r.tuples.iter().all(|t| o.contains(&t.iter().map(|&x| map[x]).collect::<Vec<_>>())) {
                return false;
            }
        }
        self.constants.iter().all(|(c, &v)| other.constants[c] == map[v])
    }
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Model(size={}", self.size)?;
        for (name, r) in &self.relations {
            write!(f, ", {name}={:?}", r.sorted())?;
        }
        for (name, v) in &self.constants {
            write!(f, ", {name}:={v}")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isomorphism_respects_constants() {
        let mut a = Model::new(2);
        a.insert("E", vec![0, 1]).unwrap();
        a.set_constant("c", 0).unwrap();
        let mut b = Model::new(2);
        b.insert("E", vec![1, 0]).unwrap();
        b.set_constant("c", 1).unwrap();
        assert!(a.is_isomorphic(&b));
        assert!(a.is_isomorphism(&b, &[1, 0]));
        b.set_constant("c", 0).unwrap();
        assert!(!a.is_isomorphic(&b));
    }

    #[test]
    fn empty_relations_count() {
        let mut a = Model::new(1);
        a.declare("P", 1).unwrap();
        let b = Model::new(1);
        assert!(!a.is_isomorphic(&b));
        assert!(a.insert("P", vec![3]).is_err());
    }
}
