//! Powerset models: counting MSO over a model as first-order logic over
//! its subsets.
//!
//! The powerset model of `A` has the subsets of `A` as universe (subset `X`
//! is the element whose bit mask is `X`) and carries
//!
//! * `subset` (binary) and `singleton` (unary);
//! * each relation `R` of `A`, lifted to singletons under the same name;
//! * a constant `[φ]` per generator formula `φ(x)`, the set it defines;
//! * `mod{m}_{k}` for `m` in the moduli and `k < m`, the sets of size `k`
//!   modulo `m`.
//!
//! Generators are quantifier-free formulas in the free variable `x`.

use super::eval::{check_vocabulary, eval_unchecked};
use super::formula::{Formula, Term};
use super::model::{Model, Vocabulary};
use super::types::equiv_r;
use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};

/// Largest base universe accepted; the powerset has `2^12` elements.
pub const POWERSET_LIMIT: usize = 12;

/// Most complete atomic one-types [`Generators::Complete`] will combine.
pub const COMPLETE_TYPE_LIMIT: usize = 10;

/// The variable generator formulas are written in.
pub const GENERATOR_VAR: &str = "x";

#[derive(Clone, Debug, PartialEq)]
pub enum Generators {
    /// `true`, `false`, every atom mentioning `x` and its negation.
    Default,
    Explicit(Vec<Formula>),
    /// Every union of complete atomic one-types realised in the models being
    /// compared. Up to equivalence on those models, this is every
    /// quantifier-free formula.
    Complete,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CmsoSignature {
    pub rank: usize,
    pub moduli: BTreeSet<usize>,
    pub generators: Generators,
}

impl CmsoSignature {
    pub fn new(rank: usize, moduli: impl IntoIterator<Item = usize>, generators: Generators) -> Result<CmsoSignature> {
        let moduli: BTreeSet<usize> = moduli.into_iter().collect();
        if let Some(m) = moduli.iter().find(|&&m| m < 2) {
            return Err(Error::RangeError(format!("moduli must be at least 2, got {m}")));
        }
        if let Generators::Explicit(gs) = &generators {
            for g in gs {
                check_generator(g)?;
            }
        }
        Ok(CmsoSignature {
            rank,
            moduli,
            generators,
        })
    }
}

fn check_generator(g: &Formula) -> Result<()> {
    if !g.is_quantifier_free() {
        return Err(Error::RangeError(format!("generator {g} is not quantifier-free")));
    }
    Ok(())
}

pub fn constant_name(f: &Formula) -> String {
    format!("[{f}]")
}

pub fn mod_relation(m: usize, k: usize) -> String {
    format!("mod{m}_{k}")
}

/// Atoms over `x` and the constants. With `mention_x`, only those that
/// mention `x`; otherwise also the atoms over constants alone.
fn atoms(vocab: &Vocabulary, mention_x: bool) -> Vec<Formula> {
    let x = Term::var(GENERATOR_VAR);
    let mut terms = vec![x.clone()];
    terms.extend(vocab.constants.iter().map(|c| Term::constant(c)));
    let mut out = Vec::new();
    for (r, &n) in &vocab.relations {
        let mut idx = vec![0usize; n];
        loop {
            if !mention_x || idx.contains(&0) {
                out.push(Formula::rel(r, idx.iter().map(|&i| terms[i].clone()).collect()));
            }
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] < terms.len() {
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
    for j in 1..terms.len() {
        for i in 0..j {
            if i == 0 || !mention_x {
                out.push(Formula::Eq(terms[i].clone(), terms[j].clone()));
            }
        }
    }
    out
}

pub fn default_generators(vocab: &Vocabulary) -> Vec<Formula> {
    let mut out = vec![Formula::True, Formula::False];
    for a in atoms(vocab, true) {
        out.push(Formula::not(a.clone()));
        out.push(a);
    }
    out
}

/// Unions of the complete atomic one-types realised in `models`, which must
/// share a vocabulary.
pub fn complete_generators(models: &[&Model]) -> Result<Vec<Formula>> {
    let Some(first) = models.first() else {
        return Ok(vec![Formula::False]);
    };
    let vocab = first.vocabulary();
    for m in &models[1..] {
        vocab.check_same(&m.vocabulary())?;
    }
    let atoms = atoms(&vocab, false);
    let mut types: BTreeSet<Vec<bool>> = BTreeSet::new();
    for m in models {
        for v in 0..m.size() {
            let bits = atoms
                .iter()
                .map(|a| eval_unchecked(a, m, &[(GENERATOR_VAR, v)]))
                .collect::<Result<Vec<_>>>()?;
            types.insert(bits);
        }
    }
    if types.len() > COMPLETE_TYPE_LIMIT {
        return Err(Error::TooLarge(format!(
            "{} atomic one-types realised (limit {COMPLETE_TYPE_LIMIT})",
            types.len()
        )));
    }
    let formulas: Vec<Formula> = types
        .iter()
        .map(|bits| {
            Formula::And(
                atoms
                    .iter()
                    .zip(bits)
                    .map(|(a, &b)| if b { a.clone() } else { Formula::not(a.clone()) })
                    .collect(),
            )
        })
        .collect();
    let mut out = Vec::with_capacity(1 << formulas.len());
    for mask in 0u32..1 << formulas.len() {
        let chosen: Vec<Formula> = (0..formulas.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| formulas[i].clone())
            .collect();
        out.push(match chosen.len() {
            0 => Formula::False,
            _ => Formula::Or(chosen),
        });
    }
    Ok(out)
}

fn generators_for(sig: &CmsoSignature, models: &[&Model]) -> Result<Vec<Formula>> {
    match &sig.generators {
        Generators::Default => Ok(default_generators(&models[0].vocabulary())),
        Generators::Explicit(gs) => Ok(gs.clone()),
        Generators::Complete => complete_generators(models),
    }
}

pub fn powerset_model(m: &Model, sig: &CmsoSignature) -> Result<Model> {
    let gens = generators_for(sig, &[m])?;
    powerset_with(m, &gens, &sig.moduli)
}

/// The powerset model with an explicit generator list.
pub fn powerset_with(m: &Model, generators: &[Formula], moduli: &BTreeSet<usize>) -> Result<Model> {
    let n = m.size();
    if n > POWERSET_LIMIT {
        return Err(Error::TooLarge(format!("powerset of {n} elements (limit {POWERSET_LIMIT})")));
    }
    let full = (1usize << n) - 1;
    let mut reserved: BTreeSet<String> = ["subset".to_string(), "singleton".to_string()].into();
    for &k in moduli {
        reserved.extend((0..k).map(|r| mod_relation(k, r)));
    }
    if let Some(r) = m.relations().keys().find(|r| reserved.contains(*r)) {
        return Err(Error::DuplicateName(format!("relation `{r}` clashes with a powerset relation")));
    }
    let mut p = Model::new(1 << n);
    p.declare("subset", 2)?;
    p.declare("singleton", 1)?;
    for x in 0..=full {
        // Enumerate the supersets of x.
        let rest = full & !x;
        let mut y = rest;
        loop {
            p.insert("subset", vec![x, x | y])?;
            if y == 0 {
                break;
            }
            y = (y - 1) & rest;
        }
    }
    for v in 0..n {
        p.insert("singleton", vec![1 << v])?;
    }
    for (name, r) in m.relations() {
        p.declare(name, r.arity)?;
        for t in &r.tuples {
            p.insert(name, t.iter().map(|&v| 1 << v).collect())?;
        }
    }
    for &k in moduli {
        for r in 0..k {
            p.declare(&mod_relation(k, r), 1)?;
        }
        for x in 0..=full {
            p.insert(&mod_relation(k, (x.count_ones() as usize) % k), vec![x])?;
        }
    }
    let mut seen = BTreeMap::new();
    let vocab = m.vocabulary();
    for g in generators {
        check_generator(g)?;
        check_vocabulary(g, &vocab)?;
        let name = constant_name(g);
        if seen.contains_key(&name) {
            continue;
        }
        let mut set = 0;
        for v in 0..n {
            if eval_unchecked(g, m, &[(GENERATOR_VAR, v)])? {
                set |= 1 << v;
            }
        }
        seen.insert(name.clone(), set);
        p.set_constant(&name, set)?;
    }
    Ok(p)
}

/// The powerset models of `m1` and `m2` are `≡_r` for the signature's rank.
pub fn cmso_equiv(m1: &Model, m2: &Model, sig: &CmsoSignature) -> Result<bool> {
    m1.vocabulary().check_same(&m2.vocabulary())?;
    let gens = generators_for(sig, &[m1, m2])?;
    let p1 = powerset_with(m1, &gens, &sig.moduli)?;
    let p2 = powerset_with(m2, &gens, &sig.moduli)?;
    equiv_r(&p1, &p2, sig.rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mso::eval::eval_cmso;

    fn sig(r: usize, gens: Generators) -> CmsoSignature {
        CmsoSignature::new(r, [2], gens).unwrap()
    }

    #[test]
    fn small_powersets() {
        let p = powerset_model(&Model::new(0), &sig(0, Generators::Default)).unwrap();
        assert_eq!(p.size(), 1);
        let p = powerset_model(&Model::new(2), &sig(0, Generators::Default)).unwrap();
        assert_eq!(p.size(), 4);
        assert_eq!(p.relation("singleton").unwrap().tuples.len(), 2);
        assert_eq!(p.relation("subset").unwrap().tuples.len(), 9);
        assert_eq!(p.constant("[true]"), Some(3));
        assert_eq!(p.constant("[false]"), Some(0));
    }

    #[test]
    fn lifted_relations() {
        let mut m = Model::new(3);
        m.insert("E", vec![0, 2]).unwrap();
        m.insert("E", vec![1, 1]).unwrap();
        m.set_constant("c", 2).unwrap();
        let p = powerset_model(&m, &sig(0, Generators::Default)).unwrap();
        let lifted: BTreeSet<Vec<usize>> = p.relation("E").unwrap().tuples.iter().cloned().collect();
        assert_eq!(lifted, [vec![1, 4], vec![2, 2]].into());
        assert_eq!(p.constant("[(E x c)]"), Some(1));
        assert_eq!(p.constant("[(= x c)]"), Some(4));
    }

    #[test]
    fn pure_sets_differ_mod_two() {
        let s = sig(1, Generators::Default);
        assert!(!cmso_equiv(&Model::new(2), &Model::new(3), &s).unwrap());
        // Rank 1 sees an even set that is neither empty nor everything.
        assert!(!cmso_equiv(&Model::new(2), &Model::new(4), &s).unwrap());
        assert!(cmso_equiv(&Model::new(2), &Model::new(4), &sig(0, Generators::Default)).unwrap());
        assert!(cmso_equiv(&Model::new(4), &Model::new(6), &s).unwrap());
        let f = Formula::parse("(mod (set x true) 0 2)").unwrap();
        assert_ne!(eval_cmso(&f, &Model::new(2)).unwrap(), eval_cmso(&f, &Model::new(3)).unwrap());
    }

    #[test]
    fn complete_generators_cover_types() {
        let mut m = Model::new(3);
        m.insert("P", vec![0]).unwrap();
        let gens = complete_generators(&[&m]).unwrap();
        assert_eq!(gens.len(), 4);
        let p = powerset_with(&m, &gens, &BTreeSet::new()).unwrap();
        let values: BTreeSet<usize> = p.constants().values().copied().collect();
        assert_eq!(values, [0, 1, 6, 7].into());
    }

    #[test]
    fn limits() {
        assert!(matches!(
            powerset_model(&Model::new(13), &sig(0, Generators::Default)),
            Err(Error::TooLarge(_))
        ));
        assert!(CmsoSignature::new(1, [1], Generators::Default).is_err());
    }
}
