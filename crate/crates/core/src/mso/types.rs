//! Rank-`r` types: two models satisfy the same first-order sentences of
//! quantifier rank at most `r` iff their rank-`r` types coincide.
//!
//! The rank-0 type of a tuple is its atomic diagram over the tuple and the
//! constants. The rank-`r` type adds the set of rank-`(r - 1)` types of all
//! one-element extensions.

use super::model::{Model, Relation, Vocabulary};
use crate::error::Result;
use std::collections::{BTreeSet, HashMap};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RankType {
    /// Truth values of every atom over the constants and the tuple, in a
    /// fixed order determined by the vocabulary.
    Atomic(Vec<bool>),
    Node {
        atomic: Vec<bool>,
        extensions: BTreeSet<RankType>,
    },
}

impl RankType {
    pub fn rank(&self) -> usize {
        match self {
            RankType::Atomic(_) => 0,
            RankType::Node { extensions, .. } => 1 + extensions.iter().map(RankType::rank).max().unwrap_or(0),
        }
    }
}

/// The model with its constants and relations in vocabulary order.
struct Prepared<'a> {
    size: usize,
    consts: Vec<usize>,
    rels: Vec<&'a Relation>,
}

impl<'a> Prepared<'a> {
    fn new(m: &'a Model) -> Prepared<'a> {
        Prepared {
            size: m.size(),
            consts: m.constants().values().copied().collect(),
            rels: m.relations().values().collect(),
        }
    }

    /// Atoms over the constants alone.
    fn base_bits(&self) -> Vec<bool> {
        let mut out = Vec::new();
        self.atoms(&[], &mut out);
        out
    }

    /// Atoms over constants and `tuple` that mention the last tuple element.
    /// Atoms mentioning only earlier elements are already recorded in the
    /// types of the prefixes.
    fn extension_bits(&self, tuple: &[usize]) -> Vec<bool> {
        let mut out = Vec::new();
        self.atoms(tuple, &mut out);
        out
    }

    fn atoms(&self, tuple: &[usize], out: &mut Vec<bool>) {
        let vals: Vec<usize> = self.consts.iter().chain(tuple).copied().collect();
        // Index of the term every recorded atom must mention, if any.
        let last = if tuple.is_empty() { None } else { Some(vals.len() - 1) };
        let mut buf = Vec::new();
        for r in &self.rels {
            let n = r.arity;
            if n == 0 {
                if last.is_none() {
                    out.push(r.contains(&[]));
                }
                continue;
            }
            if vals.is_empty() {
                continue;
            }
            let mut idx = vec![0usize; n];
            loop {
                if last.map_or(true, |l| idx.contains(&l)) {
                    buf.clear();
                    buf.extend(idx.iter().map(|&i| vals[i]));
                    out.push(r.contains(&buf));
                }
                let mut k = 0;
                while k < n {
                    idx[k] += 1;
                    if idx[k] < vals.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
        }
        match last {
            None => {
                for j in 0..vals.len() {
                    for i in 0..j {
                        out.push(vals[i] == vals[j]);
                    }
                }
            }
            Some(l) => {
                for i in 0..l {
                    out.push(vals[i] == vals[l]);
                }
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Key {
    Base(Vec<bool>),
    Extension(u32, Vec<bool>),
    Node(u32, Vec<u32>),
}

/// Interns rank types so that equal types get equal ids. Ids from one
/// context are comparable across every model it has seen, which must all
/// share one vocabulary.
#[derive(Default)]
pub struct TypeContext {
    vocabulary: Option<Vocabulary>,
    ids: HashMap<Key, u32>,
}

impl TypeContext {
    pub fn new() -> TypeContext {
        TypeContext::default()
    }

    fn intern(&mut self, k: Key) -> u32 {
        let next = self.ids.len() as u32;
        *self.ids.entry(k).or_insert(next)
    }

    /// Id of the rank-`r` type of `m` (with the empty tuple).
    pub fn type_id(&mut self, m: &Model, r: usize) -> Result<u32> {
        let v = m.vocabulary();
        match &self.vocabulary {
            Some(w) => w.check_same(&v)?,
            None => self.vocabulary = Some(v),
        }
        let p = Prepared::new(m);
        let base = self.intern(Key::Base(p.base_bits()));
        let mut tuple = Vec::with_capacity(r);
        Ok(self.node(&p, base, &mut tuple, r))
    }

    /// `atomic` identifies the atomic type of `tuple`, built incrementally.
    fn node(&mut self, p: &Prepared, atomic: u32, tuple: &mut Vec<usize>, r: usize) -> u32 {
        if r == 0 {
            return atomic;
        }
        let mut children = Vec::with_capacity(p.size);
        for b in 0..p.size {
            tuple.push(b);
            let ext = self.intern(Key::Extension(atomic, p.extension_bits(tuple)));
            children.push(self.node(p, ext, tuple, r - 1));
            tuple.pop();
        }
        children.sort_unstable();
        children.dedup();
        self.intern(Key::Node(atomic, children))
    }

    pub fn distinct_types(&self) -> usize {
        self.ids.len()
    }
}

/// Whether `m1` and `m2` satisfy the same first-order sentences of
/// quantifier rank at most `r`.
pub fn equiv_r(m1: &Model, m2: &Model, r: usize) -> Result<bool> {
    m1.vocabulary().check_same(&m2.vocabulary())?;
    let mut ctx = TypeContext::new();
    Ok(ctx.type_id(m1, r)? == ctx.type_id(m2, r)?)
}

/// The rank-`r` type as an explicit tree. Comparable between models of the
/// same vocabulary only.
pub fn rank_type(m: &Model, r: usize) -> RankType {
    let p = Prepared::new(m);
    let mut tuple = Vec::new();
    explicit(&p, p.base_bits(), &mut tuple, r)
}

fn explicit(p: &Prepared, atomic: Vec<bool>, tuple: &mut Vec<usize>, r: usize) -> RankType {
    if r == 0 {
        return RankType::Atomic(atomic);
    }
    let mut extensions = BTreeSet::new();
    for b in 0..p.size {
        tuple.push(b);
        let mut bits = atomic.clone();
        bits.extend(p.extension_bits(tuple));
        extensions.insert(explicit(p, bits, tuple, r - 1));
        tuple.pop();
    }
    RankType::Node { atomic, extensions }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn order(n: usize) -> Model {
        let mut m = Model::new(n);
        m.declare("<", 2).unwrap();
        for i in 0..n {
            for j in i + 1..n {
                m.insert("<", vec![i, j]).unwrap();
            }
        }
        m
    }

    #[test]
    fn linear_orders() {
        assert!(equiv_r(&order(2), &order(3), 1).unwrap());
        assert!(!equiv_r(&order(2), &order(3), 2).unwrap());
        assert!(equiv_r(&order(3), &order(4), 2).unwrap());
        assert!(!equiv_r(&order(3), &order(4), 3).unwrap());
        assert!(equiv_r(&order(7), &order(9), 3).unwrap());
        assert_eq!(rank_type(&order(2), 1), rank_type(&order(3), 1));
        assert_ne!(rank_type(&order(2), 2), rank_type(&order(3), 2));
    }

    #[test]
    fn constants_matter_at_rank_zero() {
        let mut a = Model::new(2);
        a.set_constant("c", 0).unwrap();
        a.set_constant("d", 1).unwrap();
        let mut b = Model::new(2);
        b.set_constant("c", 1).unwrap();
        b.set_constant("d", 1).unwrap();
        assert!(!equiv_r(&a, &b, 0).unwrap());
        let mut c = Model::new(1);
        c.set_constant("c", 0).unwrap();
        assert!(matches!(equiv_r(&a, &c, 0), Err(Error::VocabularyMismatch(_))));
    }

    #[test]
    fn empty_model() {
        assert!(equiv_r(&Model::new(0), &Model::new(0), 3).unwrap());
        assert!(!equiv_r(&Model::new(0), &Model::new(1), 1).unwrap());
        assert!(equiv_r(&Model::new(0), &Model::new(1), 0).unwrap());
    }
}
