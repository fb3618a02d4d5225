//! Algebras for the hypergraph monad and polynomial operations on them.
//!
//! A polynomial term is a graph whose labels are either constants (elements
//! of the algebra) or variables. Evaluating it substitutes a valuation for the
//! variables and applies the algebra's product to the resulting graph.

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Label};
use crate::ranked::{Ranked, RankedAlphabet, Symbol};
use std::collections::BTreeMap;

/// An algebra for the hypergraph monad: a ranked set of elements with a
/// product from element-labelled graphs to elements. The product must keep
/// the arity: a graph with `n` sources goes to an `n`-ary element.
pub trait Algebra {
    type Element: Label;
    fn product(&self, g: &Hypergraph<Self::Element>) -> Result<Self::Element>;
}

/// The free algebra: elements are graphs over an alphabet and the product
/// is flattening.
#[derive(Clone, Copy, Debug, Default)]
pub struct FreeAlgebra;

impl Algebra for FreeAlgebra {
    type Element = Hypergraph<Symbol>;

    fn product(&self, g: &Hypergraph<Hypergraph<Symbol>>) -> Result<Hypergraph<Symbol>> {
        Ok(g.flatten())
    }
}

/// Label of a polynomial term.
#[derive(Clone, Debug)]
pub enum TermLabel<E> {
    Const(E),
    Var(Symbol),
}

impl<E: Ranked> Ranked for TermLabel<E> {
    fn arity(&self) -> usize {
        match self {
            TermLabel::Const(e) => e.arity(),
            TermLabel::Var(x) => x.arity(),
        }
    }
}

impl<E: Label> Label for TermLabel<E> {
    fn key(&self) -> String {
        match self {
            TermLabel::Const(e) => format!("c:{}", e.key()),
            TermLabel::Var(x) => format!("x:{}", x.key()),
        }
    }
}

pub type Valuation<E> = BTreeMap<String, E>;

#[derive(Clone, Debug)]
pub struct PolynomialTerm<E> {
    body: Hypergraph<TermLabel<E>>,
    variables: RankedAlphabet,
}

impl<E: Label> PolynomialTerm<E> {
    /// Every variable label must be declared in `variables` with the same
    /// arity.
    pub fn new(body: Hypergraph<TermLabel<E>>, variables: RankedAlphabet) -> Result<Self> {
        for e in body.edges() {
            if let TermLabel::Var(x) = &e.label {
                let declared = variables.lookup(x.name())?;
                if declared.arity() != x.arity() {
                    return Err(Error::ArityMismatch(format!(
                        "variable `{}` declared with arity {} but used with {}",
                        x.name(),
                        declared.arity(),
                        x.arity()
                    )));
                }
            }
        }
        Ok(PolynomialTerm { body, variables })
    }

    /// Builds the variable alphabet from the labels used in `body`.
    pub fn from_body(body: Hypergraph<TermLabel<E>>) -> Result<Self> {
        let mut vars = RankedAlphabet::default();
        for e in body.edges() {
            if let TermLabel::Var(x) = &e.label {
                match vars.get(x.name()) {
                    Some(y) if y.arity() != x.arity() => {
                        return Err(Error::ArityMismatch(format!("variable `{}` used with two arities", x.name())))
                    }
                    Some(_) => {}
                    None => vars.insert(x.clone())?,
                }
            }
        }
        Ok(PolynomialTerm { body, variables: vars })
    }

    /// The constant term: a single edge labelled `e`.
    pub fn constant(e: E) -> Self {
        PolynomialTerm {
            body: Hypergraph::unit(TermLabel::Const(e)),
            variables: RankedAlphabet::default(),
        }
    }

    pub fn body(&self) -> &Hypergraph<TermLabel<E>> {
        &self.body
    }

    pub fn variables(&self) -> &RankedAlphabet {
        &self.variables
    }

    pub fn arity(&self) -> usize {
        self.body.arity()
    }

    /// How often each variable occurs, including declared but unused ones.
    pub fn occurrences(&self) -> BTreeMap<String, usize> {
        let mut out: BTreeMap<String, usize> =
            self.variables.symbols().iter().map(|x| (x.name().to_string(), 0)).collect();
        for e in self.body.edges() {
            if let TermLabel::Var(x) = &e.label {
                *out.entry(x.name().to_string()).or_default() += 1;
            }
        }
        out
    }

    /// Exactly one variable, occurring on exactly one hyperedge.
    pub fn is_linear_unary(&self) -> bool {
        let used: Vec<usize> = self.occurrences().into_values().filter(|&c| c > 0).collect();
        used == [1]
    }

    /// Replaces every variable edge by its value.
    pub fn substitute(&self, valuation: &Valuation<E>) -> Result<Hypergraph<E>> {
        self.body.try_map_labels(|l| match l {
            TermLabel::Const(e) => Ok(e.clone()),
            TermLabel::Var(x) => {
                let v = valuation
                    .get(x.name())
                    .ok_or_else(|| Error::MissingVariable(x.name().to_string()))?;
                if v.arity() != x.arity() {
                    return Err(Error::ArityMismatch(format!(
                        "variable `{}` has arity {} but its value has arity {}",
                        x.name(),
                        x.arity(),
                        v.arity()
                    )));
                }
                Ok(v.clone())
            }
        })
    }

    pub fn eval<A: Algebra<Element = E>>(&self, valuation: &Valuation<E>, alg: &A) -> Result<E> {
        alg.product(&self.substitute(valuation)?)
    }

    /// Same body with constants mapped through `f`.
    pub fn map_constants<F: Label>(&self, mut f: impl FnMut(&E) -> Result<F>) -> Result<PolynomialTerm<F>> {
        let body = self.body.try_map_labels(|l| match l {
            TermLabel::Const(e) => Ok(TermLabel::Const(f(e)?)),
            TermLabel::Var(x) => Ok(TermLabel::Var(x.clone())),
        })?;
        Ok(PolynomialTerm {
            body,
            variables: self.variables.clone(),
        })
    }
}

/// Evaluates `term` in `alg`.
pub fn eval_polynomial<A: Algebra>(
    term: &PolynomialTerm<A::Element>,
    valuation: &Valuation<A::Element>,
    alg: &A,
) -> Result<A::Element> {
    term.eval(valuation, alg)
}

fn var(name: &str, arity: usize) -> Symbol {
    Symbol::new(name, arity)
}

/// `x ⊕ y` on `n`-ary arguments.
pub fn parallel_term<E: Label>(n: usize) -> PolynomialTerm<E> {
    let mut body = Hypergraph::sources_only(n);
    body.add_edge(TermLabel::Var(var("x", n)), (0..n).collect()).unwrap();
    body.add_edge(TermLabel::Var(var("y", n)), (0..n).collect()).unwrap();
    PolynomialTerm::from_body(body).unwrap()
}

/// `x` with one extra isolated source appended.
pub fn add_source_term<E: Label>(n: usize) -> PolynomialTerm<E> {
    let mut body = Hypergraph::sources_only(n + 1);
    body.add_edge(TermLabel::Var(var("x", n)), (0..n).collect()).unwrap();
    PolynomialTerm::from_body(body).unwrap()
}

/// `x` with sources reselected by the injective map `f`.
pub fn forget_sources_term<E: Label>(n: usize, f: &[usize]) -> Result<PolynomialTerm<E>> {
    let mut body = Hypergraph::sources_only(n);
    body.add_edge(TermLabel::Var(var("x", n)), (0..n).collect())?;
    let body = body.forget_sources(f)?;
    PolynomialTerm::from_body(body)
}

/// A partition of (some) algebra elements into blocks. Elements are
/// identified by their label key.
#[derive(Clone, Debug)]
pub struct EquivalencePartition<E> {
    blocks: Vec<Vec<E>>,
    index: BTreeMap<String, usize>,
}

impl<E: Label> EquivalencePartition<E> {
    pub fn new(blocks: Vec<Vec<E>>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, block) in blocks.iter().enumerate() {
            for e in block {
                if index.insert(e.key(), i).is_some() {
                    return Err(Error::DuplicateName(format!("{e:?} appears in two blocks")));
                }
            }
            if block.iter().any(|e| e.arity() != block[0].arity()) {
                return Err(Error::ArityMismatch(format!("block {i} mixes arities")));
            }
        }
        Ok(EquivalencePartition { blocks, index })
    }

    pub fn block_of(&self, e: &E) -> Option<usize> {
        self.index.get(&e.key()).copied()
    }

    pub fn blocks(&self) -> &[Vec<E>] {
        &self.blocks
    }
}

#[derive(Clone, Debug)]
pub enum CongruenceReport<E> {
    Congruent,
    /// Pointwise equivalent valuations whose images under `op` are not.
    Counterexample {
        op: usize,
        left: Valuation<E>,
        right: Valuation<E>,
        outputs: (E, E),
    },
    /// An output fell outside the partition.
    Uncovered { op: usize, element: E },
}

impl<E> CongruenceReport<E> {
    pub fn is_congruent(&self) -> bool {
        matches!(self, CongruenceReport::Congruent)
    }
}

/// Checks that every operation maps pointwise-equivalent valuations (drawn
/// from the partition's blocks) to equivalent results.
pub fn check_congruence<A: Algebra>(
    partition: &EquivalencePartition<A::Element>,
    ops: &[PolynomialTerm<A::Element>],
    alg: &A,
) -> Result<CongruenceReport<A::Element>> {
    for (op_index, op) in ops.iter().enumerate() {
        let vars: Vec<Symbol> = op.variables().symbols().to_vec();
        let choices: Vec<Vec<(A::Element, A::Element)>> = vars
            .iter()
            .map(|x| {
                partition
                    .blocks()
                    .iter()
                    .filter(|b| b.first().is_some_and(|e| e.arity() == x.arity()))
                    .flat_map(|b| b.iter().flat_map(move |p| b.iter().map(move |q| (p.clone(), q.clone()))))
                    .collect()
            })
            .collect();
        let mut pick = vec![0usize; vars.len()];
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        loop {
            let mut left = Valuation::new();
            let mut right = Valuation::new();
            for (i, x) in vars.iter().enumerate() {
                let (p, q) = &choices[i][pick[i]];
                left.insert(x.name().to_string(), p.clone());
                right.insert(x.name().to_string(), q.clone());
            }
            let a = op.eval(&left, alg)?;
            let b = op.eval(&right, alg)?;
            match (partition.block_of(&a), partition.block_of(&b)) {
                (None, _) => return Ok(CongruenceReport::Uncovered { op: op_index, element: a }),
                (_, None) => return Ok(CongruenceReport::Uncovered { op: op_index, element: b }),
                (Some(i), Some(j)) if i != j => {
                    return Ok(CongruenceReport::Counterexample {
                        op: op_index,
                        left,
                        right,
                        outputs: (a, b),
                    })
                }
                _ => {}
            }
            // Odometer over the per-variable choices.
            let mut k = 0;
            loop {
                if k == pick.len() {
                    break;
                }
                pick[k] += 1;
                if pick[k] < choices[k].len() {
                    break;
                }
                pick[k] = 0;
                k += 1;
            }
            if k == pick.len() {
                break;
            }
        }
    }
    Ok(CongruenceReport::Congruent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{self, Shape};

    fn sym(n: &str, a: usize) -> Symbol {
        Symbol::new(n, a)
    }

    #[test]
    fn hr_ops_are_polynomial() {
        let alph = sample::test_alphabet();
        let mut rng = sample::rng(1);
        for _ in 0..30 {
            let g = sample::random_graph(&mut rng, &alph, Shape::default());
            let h = sample::random_graph(&mut rng, &alph, Shape::default());
            let val: Valuation<_> = [("x".to_string(), g.clone()), ("y".to_string(), h.clone())].into();
            let p = parallel_term(2).eval(&val, &FreeAlgebra).unwrap();
            assert!(p.is_isomorphic(&g.parallel(&h).unwrap()));
            let s = add_source_term(2).eval(&val, &FreeAlgebra).unwrap();
            assert!(s.is_isomorphic(&g.add_isolated_source()));
            let f = forget_sources_term(2, &[1]).unwrap().eval(&val, &FreeAlgebra).unwrap();
            assert!(f.is_isomorphic(&g.forget_sources(&[1]).unwrap()));
        }
    }

    #[test]
    fn linearity() {
        let mut body = Hypergraph::sources_only(1);
        body.add_edge(TermLabel::<Hypergraph<Symbol>>::Var(sym("x", 1)), vec![0]).unwrap();
        let t = PolynomialTerm::from_body(body.clone()).unwrap();
        assert!(t.is_linear_unary());
        body.add_edge(TermLabel::Var(sym("x", 1)), vec![0]).unwrap();
        assert!(!PolynomialTerm::from_body(body).unwrap().is_linear_unary());
        assert!(!parallel_term::<Hypergraph<Symbol>>(1).is_linear_unary());
    }

    #[test]
    fn evaluation_errors() {
        let t = parallel_term::<Hypergraph<Symbol>>(1);
        let val: Valuation<_> = [("x".to_string(), Hypergraph::sources_only(1))].into();
        assert_eq!(t.eval(&val, &FreeAlgebra).unwrap_err(), Error::MissingVariable("y".into()));
        let val: Valuation<_> = [
            ("x".to_string(), Hypergraph::sources_only(1)),
            ("y".to_string(), Hypergraph::sources_only(2)),
        ]
        .into();
        assert!(matches!(t.eval(&val, &FreeAlgebra), Err(Error::ArityMismatch(_))));
        let mut body = Hypergraph::sources_only(1);
        body.add_edge(TermLabel::<Hypergraph<Symbol>>::Var(sym("z", 1)), vec![0]).unwrap();
        let vars = RankedAlphabet::new([("z", 2)]).unwrap();
        assert!(matches!(PolynomialTerm::new(body, vars), Err(Error::ArityMismatch(_))));
    }
}
