//! Counting MSO formulas and their s-expression syntax.
//!
//! ```text
//! true  false
//! (R t ...)            relation atom; (rel R t ...) if R is a keyword
//! (= t t)
//! (in t S)  (subset S S)  (singleton S)  (mod S k m)
//! (not φ)  (and φ ...)  (or φ ...)  (implies φ ψ)
//! (exists x φ)  (forall x φ)  (exists-set X φ)  (forall-set X φ)
//! ```
//!
//! A first-order term is a bound variable or, failing that, a constant of the
//! model. A set term is a bound set variable or `(set x φ)`, the set of
//! elements satisfying the quantifier-free formula `φ(x)`.

use crate::error::Result;
use crate::sexp::{self, Sexp};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(x.to_string())
    }

    pub fn constant(c: &str) -> Term {
        Term::Const(c.to_string())
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Var(x) | Term::Const(x) => x,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SetTerm {
    Var(String),
    Filter { var: String, body: Box<Formula> },
}

impl SetTerm {
    pub fn var(x: &str) -> SetTerm {
        SetTerm::Var(x.to_string())
    }

    pub fn filter(var: &str, body: Formula) -> SetTerm {
        SetTerm::Filter {
            var: var.to_string(),
            body: Box::new(body),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Rel(String, Vec<Term>),
    Eq(Term, Term),
    In(Term, SetTerm),
    Subset(SetTerm, SetTerm),
    Singleton(SetTerm),
    /// `|S| ≡ k (mod m)`.
    Mod(SetTerm, usize, usize),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    ExistsSet(String, Box<Formula>),
    ForallSet(String, Box<Formula>),
}

const KEYWORDS: &[&str] = &[
    "true",
    "false",
    "=",
    "in",
    "subset",
    "singleton",
    "mod",
    "not",
    "and",
    "or",
    "implies",
    "exists",
    "forall",
    "exists-set",
    "forall-set",
    "set",
    "rel",
];

impl Formula {
    pub fn rel(name: &str, terms: Vec<Term>) -> Formula {
        Formula::Rel(name.to_string(), terms)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(x: &str, f: Formula) -> Formula {
        Formula::Exists(x.to_string(), Box::new(f))
    }

    pub fn forall(x: &str, f: Formula) -> Formula {
        Formula::Forall(x.to_string(), Box::new(f))
    }

    pub fn exists_set(x: &str, f: Formula) -> Formula {
        Formula::ExistsSet(x.to_string(), Box::new(f))
    }

    pub fn forall_set(x: &str, f: Formula) -> Formula {
        Formula::ForallSet(x.to_string(), Box::new(f))
    }

    /// Nesting depth of quantifiers, first- and second-order alike.
    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::Not(f) => f.quantifier_rank(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::quantifier_rank).max().unwrap_or(0),
            Formula::Implies(a, b) => a.quantifier_rank().max(b.quantifier_rank()),
            Formula::Exists(_, f) | Formula::Forall(_, f) | Formula::ExistsSet(_, f) | Formula::ForallSet(_, f) => {
                1 + f.quantifier_rank()
            }
            _ => 0,
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.quantifier_rank() == 0
    }

    /// Moduli used by counting atoms, including inside set filters.
    pub fn moduli(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Mod(_, _, m) = f {
                out.insert(*m);
            }
        });
        out
    }

    /// Relation names with the arities they are used at.
    pub fn relations(&self) -> BTreeMap<String, BTreeSet<usize>> {
        let mut out: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
        self.visit(&mut |f| {
            if let Formula::Rel(r, ts) = f {
                out.entry(r.clone()).or_default().insert(ts.len());
            }
        });
        out
    }

    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            let mut add = |t: &Term| {
                if let Term::Const(c) = t {
                    out.insert(c.clone());
                }
            };
            match f {
                Formula::Rel(_, ts) => ts.iter().for_each(&mut add),
                Formula::Eq(a, b) => {
                    add(a);
                    add(b);
                }
                Formula::In(t, _) => add(t),
                _ => {}
            }
        });
        out
    }

    /// Calls `f` on every subformula, including filter bodies.
    pub fn visit(&self, f: &mut dyn FnMut(&Formula)) {
        f(self);
        let set = |s: &SetTerm, f: &mut dyn FnMut(&Formula)| {
            if let SetTerm::Filter { body, .. } = s {
                body.visit(f);
            }
        };
        match self {
            Formula::In(_, s) | Formula::Singleton(s) | Formula::Mod(s, _, _) => set(s, f),
            Formula::Subset(a, b) => {
                set(a, f);
                set(b, f);
            }
            Formula::Not(g) => g.visit(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit(f)),
            Formula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Exists(_, g) | Formula::Forall(_, g) | Formula::ExistsSet(_, g) | Formula::ForallSet(_, g) => {
                g.visit(f)
            }
            _ => {}
        }
    }

    /// Folds `true` and `false` through the connectives.
    pub fn simplify(&self) -> Formula {
        match self {
            Formula::Not(f) => match f.simplify() {
                Formula::True => Formula::False,
                Formula::False => Formula::True,
                Formula::Not(g) => *g,
                g => Formula::not(g),
            },
            Formula::And(fs) => {
                let mut out = Vec::new();
                for f in fs {
                    match f.simplify() {
                        Formula::True => {}
                        Formula::False => return Formula::False,
                        g => out.push(g),
                    }
                }
                match out.len() {
                    0 => Formula::True,
                    1 => out.pop().unwrap(),
                    _ => Formula::And(out),
                }
            }
            Formula::Or(fs) => {
                let mut out = Vec::new();
                for f in fs {
                    match f.simplify() {
                        Formula::False => {}
                        Formula::True => return Formula::True,
                        g => out.push(g),
                    }
                }
                match out.len() {
                    0 => Formula::False,
                    1 => out.pop().unwrap(),
                    _ => Formula::Or(out),
                }
            }
            Formula::Implies(a, b) => Formula::Or(vec![Formula::not((**a).clone()), (**b).clone()]).simplify(),
            Formula::Exists(x, f) => Formula::exists(x, f.simplify()),
            Formula::Forall(x, f) => Formula::forall(x, f.simplify()),
            Formula::ExistsSet(x, f) => Formula::exists_set(x, f.simplify()),
            Formula::ForallSet(x, f) => Formula::forall_set(x, f.simplify()),
            other => other.clone(),
        }
    }

    pub fn to_sexp(&self) -> Sexp {
        let at = |s: &str| Sexp::atom(s);
        let tagged = |h: &str, items: Vec<Sexp>| Sexp::tagged(h, items);
        let term = |t: &Term| at(t.name());
        match self {
            Formula::True => at("true"),
            Formula::False => at("false"),
            Formula::Rel(r, ts) => {
                let mut items = Vec::new();
                if KEYWORDS.contains(&r.as_str()) {
                    items.push(at("rel"));
                }
                items.push(at(r));
                items.extend(ts.iter().map(term));
                Sexp::list(items)
            }
            Formula::Eq(a, b) => tagged("=", vec![term(a), term(b)]),
            Formula::In(t, s) => tagged("in", vec![term(t), set_to_sexp(s)]),
            Formula::Subset(a, b) => tagged("subset", vec![set_to_sexp(a), set_to_sexp(b)]),
            Formula::Singleton(s) => tagged("singleton", vec![set_to_sexp(s)]),
            Formula::Mod(s, k, m) => tagged("mod", vec![set_to_sexp(s), at(&k.to_string()), at(&m.to_string())]),
            Formula::Not(f) => tagged("not", vec![f.to_sexp()]),
            Formula::And(fs) => tagged("and", fs.iter().map(Formula::to_sexp).collect()),
            Formula::Or(fs) => tagged("or", fs.iter().map(Formula::to_sexp).collect()),
            Formula::Implies(a, b) => tagged("implies", vec![a.to_sexp(), b.to_sexp()]),
            Formula::Exists(x, f) => tagged("exists", vec![at(x), f.to_sexp()]),
            Formula::Forall(x, f) => tagged("forall", vec![at(x), f.to_sexp()]),
            Formula::ExistsSet(x, f) => tagged("exists-set", vec![at(x), f.to_sexp()]),
            Formula::ForallSet(x, f) => tagged("forall-set", vec![at(x), f.to_sexp()]),
        }
    }

    /// Parses a sentence: every unbound name is a constant.
    pub fn parse(text: &str) -> Result<Formula> {
        Self::parse_with_vars(text, &[], &[])
    }

    /// Parses a formula whose free first-order variables are `fo` and free
    /// set variables are `so`.
    pub fn parse_with_vars(text: &str, fo: &[&str], so: &[&str]) -> Result<Formula> {
        let s = sexp::parse_one(text)?;
        let mut scope = Scope {
            fo: fo.iter().map(|x| x.to_string()).collect(),
            so: so.iter().map(|x| x.to_string()).collect(),
        };
        formula_from_sexp(&s, &mut scope)
    }

    pub fn from_sexp(s: &Sexp) -> Result<Formula> {
        formula_from_sexp(s, &mut Scope::default())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexp().to_compact())
    }
}

fn set_to_sexp(s: &SetTerm) -> Sexp {
    match s {
        SetTerm::Var(x) => Sexp::atom(x),
        SetTerm::Filter { var, body } => Sexp::tagged("set", vec![Sexp::atom(var), body.to_sexp()]),
    }
}

#[derive(Default)]
struct Scope {
    fo: Vec<String>,
    so: Vec<String>,
}

fn term_from_sexp(s: &Sexp, scope: &Scope) -> Result<Term> {
    let name = s.as_atom()?;
    if scope.fo.iter().rev().any(|x| x == name) {
        Ok(Term::Var(name.to_string()))
    } else if scope.so.iter().any(|x| x == name) {
        Err(s.pos().error(format!("set variable `{name}` used as an element")))
    } else {
        Ok(Term::Const(name.to_string()))
    }
}

fn set_from_sexp(s: &Sexp, scope: &mut Scope) -> Result<SetTerm> {
    if let Sexp::Atom(name, _) = s {
        return if scope.so.iter().any(|x| x == name) {
            Ok(SetTerm::Var(name.clone()))
        } else {
            Err(s.pos().error(format!("`{name}` is not a bound set variable")))
        };
    }
    let items = s.expect_tagged("set")?;
    let [var, body] = items else {
        return Err(s.pos().error("expected `(set x φ)`"));
    };
    let x = var.as_atom()?.to_string();
    // The filter sees only its own variable and the model's constants.
    let mut inner = Scope {
        fo: vec![x.clone()],
        so: Vec::new(),
    };
    let body = formula_from_sexp(body, &mut inner)?;
    if !body.is_quantifier_free() {
        return Err(s.pos().error("set filters must be quantifier-free"));
    }
    let _ = scope;
    Ok(SetTerm::Filter {
        var: x,
        body: Box::new(body),
    })
}

fn formula_from_sexp(s: &Sexp, scope: &mut Scope) -> Result<Formula> {
    match s {
        Sexp::Atom(a, _) if a == "true" => return Ok(Formula::True),
        Sexp::Atom(a, _) if a == "false" => return Ok(Formula::False),
        Sexp::Atom(a, _) => return Err(s.pos().error(format!("expected a formula, found `{a}`"))),
        Sexp::List(..) => {}
    }
    let items = s.as_list()?;
    let Some(head) = items.first() else {
        return Err(s.pos().error("empty formula"));
    };
    let head_name = head.as_atom()?;
    let args = &items[1..];
    let arity_error = |n: &str| s.pos().error(format!("`{head_name}` expects {n}"));
    let sub = |f: &Sexp, scope: &mut Scope| -> Result<Box<Formula>> { Ok(Box::new(formula_from_sexp(f, scope)?)) };
    Ok(match head_name {
        "=" => match args {
            [a, b] => Formula::Eq(term_from_sexp(a, scope)?, term_from_sexp(b, scope)?),
            _ => return Err(arity_error("two terms")),
        },
        "in" => match args {
            [t, x] => Formula::In(term_from_sexp(t, scope)?, set_from_sexp(x, scope)?),
            _ => return Err(arity_error("a term and a set")),
        },
        "subset" => match args {
            [a, b] => Formula::Subset(set_from_sexp(a, scope)?, set_from_sexp(b, scope)?),
            _ => return Err(arity_error("two sets")),
        },
        "singleton" => match args {
            [a] => Formula::Singleton(set_from_sexp(a, scope)?),
            _ => return Err(arity_error("one set")),
        },
        "mod" => match args {
            [x, k, m] => {
                let (k, m) = (k.as_usize()?, m.as_usize()?);
                if m == 0 || k >= m {
                    return Err(s.pos().error(format!("counting needs 0 <= k < m, got k={k}, m={m}")));
                }
                Formula::Mod(set_from_sexp(x, scope)?, k, m)
            }
            _ => return Err(arity_error("a set, a remainder and a modulus")),
        },
        "not" => match args {
            [f] => Formula::Not(sub(f, scope)?),
            _ => return Err(arity_error("one formula")),
        },
        "and" | "or" => {
            let fs = args.iter().map(|f| formula_from_sexp(f, scope)).collect::<Result<Vec<_>>>()?;
            if head_name == "and" {
                Formula::And(fs)
            } else {
                Formula::Or(fs)
            }
        }
        "implies" => match args {
            [a, b] => Formula::Implies(sub(a, scope)?, sub(b, scope)?),
            _ => return Err(arity_error("two formulas")),
        },
        "exists" | "forall" | "exists-set" | "forall-set" => {
            let [x, body] = args else {
                return Err(arity_error("a variable and a formula"));
            };
            let x = x.as_atom()?.to_string();
            let set = head_name.ends_with("-set");
            if set {
                scope.so.push(x.clone());
            } else {
                scope.fo.push(x.clone());
            }
            let body = formula_from_sexp(body, scope);
            if set {
                scope.so.pop();
            } else {
                scope.fo.pop();
            }
            let body = Box::new(body?);
            match head_name {
                "exists" => Formula::Exists(x, body),
                "forall" => Formula::Forall(x, body),
                "exists-set" => Formula::ExistsSet(x, body),
                _ => Formula::ForallSet(x, body),
            }
        }
        "rel" => {
            let Some((name, ts)) = args.split_first() else {
                return Err(arity_error("a relation name"));
            };
            let ts = ts.iter().map(|t| term_from_sexp(t, scope)).collect::<Result<_>>()?;
            Formula::Rel(name.as_atom()?.to_string(), ts)
        }
        "true" | "false" | "set" => return Err(s.pos().error(format!("`{head_name}` cannot be applied"))),
        r => {
            let ts = args.iter().map(|t| term_from_sexp(t, scope)).collect::<Result<_>>()?;
            Formula::Rel(r.to_string(), ts)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn roundtrip_and_rank() {
        let text = "(forall-set X (implies (exists x (in x X)) (or (mod X 0 2) (exists y (and (E x0 y) (in y (set z (not (= z c)))))))))";
        let err = Formula::parse(text);
        // `x0` is unbound, so it is read as a constant.
        let f = err.unwrap();
        assert_eq!(f.to_string(), text);
        assert_eq!(f.quantifier_rank(), 2);
        assert_eq!(f.constants(), ["c".to_string(), "x0".to_string()].into());
    }

    #[test]
    fn reflexivity_sentence() {
        let f = Formula::parse("(subset (set x true) (set x (R x x)))").unwrap();
        assert!(f.is_quantifier_free());
    }

    #[test]
    fn errors() {
        assert!(matches!(Formula::parse("(mod (set x true) 2 2)"), Err(Error::Parse { .. })));
        assert!(matches!(Formula::parse("(in x X)"), Err(Error::Parse { .. })));
        assert!(matches!(Formula::parse("(exists-set X (E X X))"), Err(Error::Parse { .. })));
        assert!(matches!(Formula::parse("(subset (set x (exists y (E x y))) (set x true))"), Err(Error::Parse { .. })));
    }

    #[test]
    fn keyword_relations() {
        let f = Formula::rel("subset", vec![Term::constant("a"), Term::constant("b")]);
        assert_eq!(Formula::parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn simplify_folds_constants() {
        let f = Formula::And(vec![Formula::True, Formula::not(Formula::False), Formula::rel("P", vec![Term::var("x")])]);
        assert_eq!(f.simplify(), Formula::rel("P", vec![Term::var("x")]));
    }
}
