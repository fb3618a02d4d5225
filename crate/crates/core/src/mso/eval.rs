//! Direct evaluation of CMSO formulas on finite models.

use super::formula::{Formula, SetTerm, Term};
use super::model::{Model, Vocabulary};
use crate::error::{Error, Result};

/// Set quantifiers enumerate all subsets, so they are refused above this size.
pub const SET_QUANTIFIER_LIMIT: usize = 20;

/// Checks that every relation and constant the formula mentions exists in
/// `vocab` with the arity it is used at.
pub fn check_vocabulary(f: &Formula, vocab: &Vocabulary) -> Result<()> {
    for (r, arities) in f.relations() {
        match vocab.relations.get(&r) {
            None => return Err(Error::VocabularyMismatch(format!("unknown relation `{r}`"))),
            Some(k) => {
                if let Some(j) = arities.iter().find(|&j| j != k) {
                    return Err(Error::VocabularyMismatch(format!(
                        "relation `{r}` has arity {k} but is used with {j} arguments"
                    )));
                }
            }
        }
    }
    if let Some(c) = f.constants().into_iter().find(|c| !vocab.constants.contains(c)) {
        return Err(Error::VocabularyMismatch(format!("unknown constant `{c}`")));
    }
    Ok(())
}

/// Evaluates a sentence.
pub fn eval_cmso(f: &Formula, m: &Model) -> Result<bool> {
    eval_formula(f, m, &[], &[])
}

/// Evaluates a formula without set variables under an assignment of its
/// free variables, skipping the vocabulary and size checks of
/// [`eval_formula`]. Meant for quantifier-free formulas evaluated many times
/// on one model after a single [`check_vocabulary`].
pub fn eval_unchecked(f: &Formula, m: &Model, fo: &[(&str, usize)]) -> Result<bool> {
    let mut env = Env {
        model: m,
        fo: fo.to_vec(),
        so: Vec::new(),
    };
    env.eval(f)
}

/// Evaluates a formula under an assignment of its free variables.
pub fn eval_formula(f: &Formula, m: &Model, fo: &[(&str, usize)], so: &[(&str, u64)]) -> Result<bool> {
    check_vocabulary(f, &m.vocabulary())?;
    let mut uses_sets = false;
    let mut quantifies_sets = false;
    f.visit(&mut |g| match g {
        Formula::In(..) | Formula::Subset(..) | Formula::Singleton(_) | Formula::Mod(..) => uses_sets = true,
        Formula::ExistsSet(..) | Formula::ForallSet(..) => quantifies_sets = true,
        _ => {}
    });
    if quantifies_sets && m.size() > SET_QUANTIFIER_LIMIT {
        return Err(Error::TooLarge(format!(
            "set quantification over {} elements (limit {SET_QUANTIFIER_LIMIT})",
            m.size()
        )));
    }
    if uses_sets && m.size() > 64 {
        return Err(Error::TooLarge(format!("set terms over {} elements (limit 64)", m.size())));
    }
    if let Some(&(x, v)) = fo.iter().find(|(_, v)| *v >= m.size()) {
        return Err(Error::RangeError(format!("`{x}` = {v} outside a universe of size {}", m.size())));
    }
    let mut env = Env {
        model: m,
        fo: fo.to_vec(),
        so: so.to_vec(),
    };
    env.eval(f)
}

struct Env<'m, 'f> {
    model: &'m Model,
    fo: Vec<(&'f str, usize)>,
    so: Vec<(&'f str, u64)>,
}

impl<'f> Env<'_, 'f> {
    fn term(&self, t: &Term) -> Result<usize> {
        match t {
            Term::Var(x) => self
                .fo
                .iter()
                .rev()
                .find(|(y, _)| *y == x)
                .map(|&(_, v)| v)
                .ok_or_else(|| Error::MissingVariable(x.clone())),
            Term::Const(c) => self
                .model
                .constant(c)
                .ok_or_else(|| Error::VocabularyMismatch(format!("unknown constant `{c}`"))),
        }
    }

    fn set(&mut self, s: &'f SetTerm) -> Result<u64> {
        match s {
            SetTerm::Var(x) => self
                .so
                .iter()
                .rev()
                .find(|(y, _)| *y == x)
                .map(|&(_, v)| v)
                .ok_or_else(|| Error::MissingVariable(x.clone())),
            SetTerm::Filter { var, body } => {
                let mut out = 0u64;
                for v in 0..self.model.size() {
                    self.fo.push((var, v));
                    let r = self.eval(body);
                    self.fo.pop();
                    if r? {
                        out |= 1 << v;
                    }
                }
                Ok(out)
            }
        }
    }

    fn eval(&mut self, f: &'f Formula) -> Result<bool> {
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Rel(r, ts) if ts.len() <= 4 => {
                let mut t = [0usize; 4];
                for (slot, term) in t.iter_mut().zip(ts) {
                    *slot = self.term(term)?;
                }
                self.model.holds(r, &t[..ts.len()])
            }
            Formula::Rel(r, ts) => {
                let t = ts.iter().map(|t| self.term(t)).collect::<Result<Vec<_>>>()?;
                self.model.holds(r, &t)
            }
            Formula::Eq(a, b) => self.term(a)? == self.term(b)?,
            Formula::In(t, s) => {
                let v = self.term(t)?;
                self.set(s)? >> v & 1 == 1
            }
            Formula::Subset(a, b) => {
                let (a, b) = (self.set(a)?, self.set(b)?);
                a & !b == 0
            }
            Formula::Singleton(s) => self.set(s)?.count_ones() == 1,
            Formula::Mod(s, k, m) => self.set(s)?.count_ones() as usize % m == *k,
            Formula::Not(g) => !self.eval(g)?,
            Formula::And(gs) => {
                for g in gs {
                    if !self.eval(g)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(gs) => {
                for g in gs {
                    if self.eval(g)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Implies(a, b) => !self.eval(a)? || self.eval(b)?,
            Formula::Exists(x, g) | Formula::Forall(x, g) => {
                let want = matches!(f, Formula::Exists(..));
                for v in 0..self.model.size() {
                    self.fo.push((x, v));
                    let r = self.eval(g);
                    self.fo.pop();
                    if r? == want {
                        return Ok(want);
                    }
                }
                !want
            }
            Formula::ExistsSet(x, g) | Formula::ForallSet(x, g) => {
                let want = matches!(f, Formula::ExistsSet(..));
                for s in 0..1u64 << self.model.size() {
                    self.so.push((x, s));
                    let r = self.eval(g);
                    self.so.pop();
                    if r? == want {
                        return Ok(want);
                    }
                }
                !want
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_model_has_no_witness() {
        let f = Formula::parse("(exists x true)").unwrap();
        assert!(!eval_cmso(&f, &Model::new(0)).unwrap());
        assert!(eval_cmso(&Formula::parse("(forall x false)").unwrap(), &Model::new(0)).unwrap());
    }

    #[test]
    fn counting() {
        let f = Formula::parse("(mod (set x true) 0 2)").unwrap();
        assert!(eval_cmso(&f, &Model::new(4)).unwrap());
        assert!(!eval_cmso(&f, &Model::new(3)).unwrap());
        let g = Formula::parse("(exists-set X (and (mod X 1 3) (not (singleton X))))").unwrap();
        assert!(eval_cmso(&g, &Model::new(4)).unwrap());
        assert!(!eval_cmso(&g, &Model::new(3)).unwrap());
    }

    #[test]
    fn reflexivity() {
        let f = Formula::parse("(subset (set x true) (set x (R x x)))").unwrap();
        let mut m = Model::new(2);
        m.insert("R", vec![0, 0]).unwrap();
        assert!(!eval_cmso(&f, &m).unwrap());
        m.insert("R", vec![1, 1]).unwrap();
        assert!(eval_cmso(&f, &m).unwrap());
    }

    #[test]
    fn vocabulary_errors() {
        let f = Formula::parse("(exists x (E x c))").unwrap();
        let mut m = Model::new(1);
        m.declare("E", 2).unwrap();
        assert!(matches!(eval_cmso(&f, &m), Err(Error::VocabularyMismatch(_))));
        m.set_constant("c", 0).unwrap();
        assert!(!eval_cmso(&f, &m).unwrap());
        let g = Formula::parse("(E c)").unwrap();
        assert!(matches!(eval_cmso(&g, &m), Err(Error::VocabularyMismatch(_))));
        let big = Formula::parse("(exists-set X true)").unwrap();
        assert!(matches!(eval_cmso(&big, &Model::new(21)), Err(Error::TooLarge(_))));
    }

    #[test]
    fn free_variables() {
        let f = Formula::parse_with_vars("(and (E x y) (in y Y))", &["x", "y"], &["Y"]).unwrap();
        let mut m = Model::new(2);
        m.insert("E", vec![0, 1]).unwrap();
        assert!(eval_formula(&f, &m, &[("x", 0), ("y", 1)], &[("Y", 0b10)]).unwrap());
        assert!(!eval_formula(&f, &m, &[("x", 0), ("y", 1)], &[("Y", 0b01)]).unwrap());
        assert!(matches!(eval_formula(&f, &m, &[("x", 0)], &[("Y", 0)]), Err(Error::MissingVariable(_))));
    }
}
