//! Grammars whose rules are polynomial terms, with derivation yields and
//! bounded language enumeration.
//!
//! A rule `X → t` rewrites nonterminal `X` to the term `t`, whose variables
//! are nonterminals. In a derivation every variable of a rule gets one child,
//! so repeated occurrences of a variable receive the same value. This is what
//! lets the grammar `x → a | x·x` produce exactly the words of length `2^n`.
//!
//! Language enumeration is bounded by the *unfolded* size of a derivation:
//! a node counts once, plus its child's size once per occurrence of the
//! child's variable. This equals the node count of the tree one would get by
//! copying shared subtrees apart.

use crate::error::{Error, Result};
use crate::format::{self, SexpLabel};
use crate::hypergraph::{Hypergraph, Label};
use crate::polynomial::{Algebra, PolynomialTerm, TermLabel, Valuation};
use crate::ranked::{Ranked, RankedAlphabet, Symbol};
use crate::sexp::{self, Sexp};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Constants allowed in a grammar: free-algebra constants must only use
/// terminal symbols.
pub trait GrammarConstant: Label {
    fn check_terminals(&self, _terminals: &RankedAlphabet) -> Result<()> {
        Ok(())
    }
}

impl GrammarConstant for Hypergraph<Symbol> {
    fn check_terminals(&self, terminals: &RankedAlphabet) -> Result<()> {
        self.check_alphabet(terminals)
    }
}

#[derive(Clone, Debug)]
pub struct Rule<E> {
    pub lhs: Symbol,
    pub rhs: PolynomialTerm<E>,
}

#[derive(Clone, Debug)]
pub struct Grammar<E> {
    terminals: RankedAlphabet,
    nonterminals: RankedAlphabet,
    start: Symbol,
    rules: Vec<Rule<E>>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct GrammarReport {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl GrammarReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

impl<E: GrammarConstant> Grammar<E> {
    /// Builds a grammar, rejecting structural errors. Softer problems are
    /// reported by [`Grammar::validate`].
    pub fn new(
        terminals: RankedAlphabet,
        nonterminals: RankedAlphabet,
        start: &str,
        rules: Vec<Rule<E>>,
    ) -> Result<Self> {
        let start = nonterminals.lookup(start)?.clone();
        let g = Grammar {
            terminals,
            nonterminals,
            start,
            rules,
        };
        let report = g.validate();
        if let Some(e) = report.errors.first() {
            return Err(Error::InvalidDerivation(e.clone()));
        }
        Ok(g)
    }

    pub fn terminals(&self) -> &RankedAlphabet {
        &self.terminals
    }

    pub fn nonterminals(&self) -> &RankedAlphabet {
        &self.nonterminals
    }

    pub fn start(&self) -> &Symbol {
        &self.start
    }

    pub fn rules(&self) -> &[Rule<E>] {
        &self.rules
    }

    pub fn validate(&self) -> GrammarReport {
        let mut report = GrammarReport::default();
        for s in self.nonterminals.symbols() {
            if self.terminals.get(s.name()).is_some() {
                report.errors.push(format!("`{}` is both terminal and nonterminal", s.name()));
            }
        }
        for (i, r) in self.rules.iter().enumerate() {
            if !self.nonterminals.contains(&r.lhs) {
                report.errors.push(format!("rule {i}: left side `{}` is not a nonterminal", r.lhs.name()));
                continue;
            }
            if r.rhs.arity() != r.lhs.arity() {
                report.errors.push(format!(
                    "rule {i}: `{}` has arity {} but the right side has {} sources",
                    r.lhs.name(),
                    r.lhs.arity(),
                    r.rhs.arity()
                ));
            }
            for x in r.rhs.variables().symbols() {
                if !self.nonterminals.contains(x) {
                    report.errors.push(format!(
                        "rule {i}: variable `{}`/{} is not a nonterminal",
                        x.name(),
                        x.arity()
                    ));
                }
            }
            for e in r.rhs.body().edges() {
                if let TermLabel::Const(c) = &e.label {
                    if let Err(err) = c.check_terminals(&self.terminals) {
                        report.errors.push(format!("rule {i}: {err}"));
                    }
                }
            }
        }
        if !report.is_valid() {
            return report;
        }
        let productive = self.productive();
        let reachable = self.reachable();
        for s in self.nonterminals.symbols() {
            if !self.rules.iter().any(|r| r.lhs == *s) {
                report.warnings.push(format!("nonterminal `{}` has no rules", s.name()));
            } else if !productive.contains(s.name()) {
                report.warnings.push(format!("nonterminal `{}` derives nothing", s.name()));
            }
            if !reachable.contains(s.name()) {
                report.warnings.push(format!("nonterminal `{}` is unreachable from the start", s.name()));
            }
        }
        if !productive.contains(self.start.name()) {
            report.warnings.push("the language is empty".to_string());
        }
        report
    }

    fn productive(&self) -> BTreeSet<String> {
        let mut done = BTreeSet::new();
        loop {
            let before = done.len();
            for r in &self.rules {
                if r.rhs.variables().symbols().iter().all(|x| done.contains(x.name())) {
                    done.insert(r.lhs.name().to_string());
                }
            }
            if done.len() == before {
                return done;
            }
        }
    }

    fn reachable(&self) -> BTreeSet<String> {
        let mut seen = BTreeSet::from([self.start.name().to_string()]);
        let mut stack = vec![self.start.name().to_string()];
        while let Some(x) = stack.pop() {
            for r in self.rules.iter().filter(|r| r.lhs.name() == x) {
                for y in r.rhs.variables().symbols() {
                    if seen.insert(y.name().to_string()) {
                        stack.push(y.name().to_string());
                    }
                }
            }
        }
        seen
    }
}

/// A derivation: a rule and one subderivation per variable of that rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivationTree {
    pub rule: usize,
    pub children: BTreeMap<String, DerivationTree>,
}

impl DerivationTree {
    pub fn leaf(rule: usize) -> Self {
        DerivationTree {
            rule,
            children: BTreeMap::new(),
        }
    }

    pub fn node(rule: usize, children: impl IntoIterator<Item = (&'static str, DerivationTree)>) -> Self {
        DerivationTree {
            rule,
            children: children.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.values().map(|c| c.node_count()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.values().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Size with every shared child counted once per occurrence.
    pub fn unfolded_size<E: GrammarConstant>(&self, g: &Grammar<E>) -> Result<usize> {
        let rule = g
            .rules
            .get(self.rule)
            .ok_or_else(|| Error::InvalidDerivation(format!("no rule {}", self.rule)))?;
        let occ = rule.rhs.occurrences();
        let mut size = 1;
        for (x, child) in &self.children {
            size += occ.get(x).copied().unwrap_or(0) * child.unfolded_size(g)?;
        }
        Ok(size)
    }
}

/// The value of a derivation, evaluated bottom-up.
pub fn yield_of<A: Algebra>(d: &DerivationTree, g: &Grammar<A::Element>, alg: &A) -> Result<A::Element>
where
    A::Element: GrammarConstant,
{
    let rule = g
        .rules
        .get(d.rule)
        .ok_or_else(|| Error::InvalidDerivation(format!("no rule {}", d.rule)))?;
    let vars: BTreeSet<&str> = rule.rhs.variables().symbols().iter().map(|x| x.name()).collect();
    let given: BTreeSet<&str> = d.children.keys().map(|k| k.as_str()).collect();
    if vars != given {
        return Err(Error::InvalidDerivation(format!(
            "rule {} needs children for {:?}, got {:?}",
            d.rule, vars, given
        )));
    }
    let mut valuation = Valuation::new();
    for (x, child) in &d.children {
        let child_rule = g
            .rules
            .get(child.rule)
            .ok_or_else(|| Error::InvalidDerivation(format!("no rule {}", child.rule)))?;
        if child_rule.lhs.name() != x {
            return Err(Error::InvalidDerivation(format!(
                "child for `{x}` uses rule {} for `{}`",
                child.rule,
                child_rule.lhs.name()
            )));
        }
        valuation.insert(x.clone(), yield_of(child, g, alg)?);
    }
    rule.rhs.eval(&valuation, alg)
}

/// One element of a bounded language, with its smallest derivation.
#[derive(Clone, Debug)]
pub struct LanguageItem<E> {
    pub value: E,
    pub size: usize,
    pub derivation: DerivationTree,
}

/// All yields of start-rooted derivations of unfolded size at most `bound`,
/// one per isomorphism class, ordered by (smallest size, canonical key).
pub fn enumerate_language<A: Algebra>(
    g: &Grammar<A::Element>,
    alg: &A,
    bound: usize,
) -> Result<Vec<LanguageItem<A::Element>>>
where
    A::Element: GrammarConstant,
{
    // For every nonterminal: key -> item with minimal size.
    let mut items: BTreeMap<String, BTreeMap<String, LanguageItem<A::Element>>> = g
        .nonterminals
        .symbols()
        .iter()
        .map(|s| (s.name().to_string(), BTreeMap::new()))
        .collect();
    for size in 1..=bound {
        let mut fresh: Vec<(String, String, LanguageItem<A::Element>)> = Vec::new();
        for (ri, rule) in g.rules.iter().enumerate() {
            let occ: Vec<(String, usize)> = rule
                .rhs
                .variables()
                .symbols()
                .iter()
                .map(|x| (x.name().to_string(), rule.rhs.occurrences()[x.name()]))
                .collect();
            let mut picks: Vec<&LanguageItem<A::Element>> = Vec::new();
            combine(&items, &occ, size - 1, &mut picks, &mut |picks| {
                let mut valuation = Valuation::new();
                let mut children = BTreeMap::new();
                for ((x, _), item) in occ.iter().zip(picks) {
                    valuation.insert(x.clone(), item.value.clone());
                    children.insert(x.clone(), item.derivation.clone());
                }
                let value = rule.rhs.eval(&valuation, alg)?;
                fresh.push((
                    rule.lhs.name().to_string(),
                    value.key(),
                    LanguageItem {
                        value,
                        size,
                        derivation: DerivationTree { rule: ri, children },
                    },
                ));
                Ok(())
            })?;
        }
        for (x, key, item) in fresh {
            items.get_mut(&x).expect("lhs is a nonterminal").entry(key).or_insert(item);
        }
    }
    let mut out: Vec<(usize, String, LanguageItem<A::Element>)> = items
        .remove(g.start.name())
        .unwrap_or_default()
        .into_iter()
        .map(|(k, v)| (v.size, k, v))
        .collect();
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(out.into_iter().map(|(_, _, v)| v).collect())
}

/// Calls `f` for every choice of one item per variable whose weighted sizes
/// sum to exactly `budget`.
fn combine<'a, E>(
    items: &'a BTreeMap<String, BTreeMap<String, LanguageItem<E>>>,
    occ: &[(String, usize)],
    budget: usize,
    picks: &mut Vec<&'a LanguageItem<E>>,
    f: &mut dyn FnMut(&[&'a LanguageItem<E>]) -> Result<()>,
) -> Result<()> {
    let Some(((x, mult), rest)) = occ.split_first() else {
        return if budget == 0 { f(picks) } else { Ok(()) };
    };
    let min_rest: usize = rest.iter().map(|(_, m)| m).sum();
    for item in items[x].values() {
        let cost = mult * item.size;
        if cost + min_rest > budget {
            continue;
        }
        picks.push(item);
        combine(items, rest, budget - cost, picks, f)?;
        picks.pop();
    }
    Ok(())
}

impl SexpLabel for TermLabel<Hypergraph<Symbol>> {
    fn label_to_sexp(&self) -> Sexp {
        match self {
            TermLabel::Var(x) => Sexp::tagged("var", vec![Sexp::atom(x.name())]),
            TermLabel::Const(g) => {
                let is_unit = g.edges().len() == 1
                    && g.vertex_count() == g.arity()
                    && g.sources().iter().copied().eq(0..g.arity())
                    && g.edges()[0].incidence == g.sources();
                if is_unit {
                    Sexp::tagged("const", vec![Sexp::atom(g.edges()[0].label.name())])
                } else {
                    Sexp::tagged("const", vec![format::graph_to_sexp(g)])
                }
            }
        }
    }

    fn label_from_sexp(s: &Sexp, arity: usize) -> Result<Self> {
        let items = s.as_list()?;
        match (s.head(), items.len()) {
            (Some("var"), 2) => Ok(TermLabel::Var(Symbol::new(items[1].as_atom()?, arity))),
            (Some("const"), 2) => match &items[1] {
                Sexp::Atom(name, _) => Ok(TermLabel::Const(Hypergraph::unit(Symbol::new(name, arity)))),
                graph => Ok(TermLabel::Const(Hypergraph::label_from_sexp(graph, arity)?)),
            },
            _ => Err(s.pos().error("expected `(const NAME)`, `(const (graph ...))` or `(var NAME)`")),
        }
    }
}

pub type FreeGrammar = Grammar<Hypergraph<Symbol>>;

impl FreeGrammar {
    pub fn to_sexp(&self) -> Sexp {
        let alph = |tag: &str, a: &RankedAlphabet| {
            Sexp::tagged(
                tag,
                a.symbols()
                    .iter()
                    .map(|s| Sexp::list(vec![Sexp::atom(s.name()), Sexp::atom(s.arity().to_string())]))
                    .collect(),
            )
        };
        let mut items = vec![
            alph("terminals", &self.terminals),
            alph("nonterminals", &self.nonterminals),
            Sexp::tagged("start", vec![Sexp::atom(self.start.name())]),
        ];
        for r in &self.rules {
            items.push(Sexp::tagged(
                "rule",
                vec![Sexp::atom(r.lhs.name()), format::graph_to_sexp(r.rhs.body())],
            ));
        }
        Sexp::tagged("grammar", items)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("(grammar");
        for item in &self.to_sexp().as_list().expect("list")[1..] {
            out.push_str("\n  ");
            out.push_str(&item.to_compact());
        }
        out.push_str(")\n");
        out
    }

    pub fn from_sexp(s: &Sexp) -> Result<Self> {
        let mut terminals = None;
        let mut nonterminals = None;
        let mut start = None;
        let mut raw_rules = Vec::new();
        for item in s.expect_tagged("grammar")? {
            match item.head() {
                Some("terminals") | Some("nonterminals") => {
                    let mut a = RankedAlphabet::default();
                    for entry in &item.as_list()?[1..] {
                        a.insert_entry(entry)?;
                    }
                    let slot = if item.head() == Some("terminals") {
                        &mut terminals
                    } else {
                        &mut nonterminals
                    };
                    if slot.replace(a).is_some() {
                        return Err(item.pos().error("section repeated"));
                    }
                }
                Some("start") => match &item.as_list()?[1..] {
                    [x] => start = Some((x.as_atom()?.to_string(), x.pos())),
                    _ => return Err(item.pos().error("expected `(start NAME)`")),
                },
                Some("rule") => raw_rules.push(item),
                _ => return Err(item.pos().error("expected terminals, nonterminals, start or rule")),
            }
        }
        let terminals = terminals.unwrap_or_default();
        let nonterminals = nonterminals.ok_or_else(|| s.pos().error("missing `(nonterminals ...)`"))?;
        let (start, start_pos) = start.ok_or_else(|| s.pos().error("missing `(start NAME)`"))?;
        let start_sym = nonterminals
            .get(&start)
            .ok_or_else(|| start_pos.error(format!("start `{start}` is not a nonterminal")))?
            .clone();
        let mut rules = Vec::new();
        for item in raw_rules {
            let parts = &item.as_list()?[1..];
            let [lhs, body] = parts else {
                return Err(item.pos().error("expected `(rule NAME TERM)`"));
            };
            let name = lhs.as_atom()?;
            let lhs_sym = nonterminals
                .get(name)
                .ok_or_else(|| lhs.pos().error(format!("`{name}` is not a nonterminal")))?
                .clone();
            let body: Hypergraph<TermLabel<Hypergraph<Symbol>>> = format::graph_from_sexp(body)?;
            let rhs = PolynomialTerm::from_body(body).map_err(|e| item.pos().error(e.to_string()))?;
            rules.push(Rule { lhs: lhs_sym, rhs });
        }
        let g = Grammar {
            terminals,
            nonterminals,
            start: start_sym,
            rules,
        };
        let report = g.validate();
        if let Some(e) = report.errors.first() {
            return Err(s.pos().error(e.clone()));
        }
        Ok(g)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_sexp(&sexp::parse_one(text)?)
    }
}

/// Ready-made grammars used by tests, examples and the command line.
pub mod examples {
    use super::*;

    fn var(x: &str, arity: usize) -> TermLabel<Hypergraph<Symbol>> {
        TermLabel::Var(Symbol::new(x, arity))
    }

    fn term(sym: &Symbol) -> TermLabel<Hypergraph<Symbol>> {
        TermLabel::Const(Hypergraph::unit(sym.clone()))
    }

    fn body(
        vertices: usize,
        sources: &[usize],
        edges: Vec<(TermLabel<Hypergraph<Symbol>>, Vec<usize>)>,
    ) -> PolynomialTerm<Hypergraph<Symbol>> {
        let mut g = Hypergraph::sources_only(0);
        for _ in 0..vertices {
            g.add_vertex();
        }
        for (l, inc) in edges {
            g.add_edge(l, inc).expect("example edge");
        }
        g.set_sources(sources.to_vec()).expect("example sources");
        PolynomialTerm::from_body(g).expect("example term")
    }

    /// Words as paths from the first to the second source. `x → a` and
    /// `x → x·x`, so the words have length `2^n`.
    pub fn exponential() -> FreeGrammar {
        let a = Symbol::new("a", 2);
        let t = RankedAlphabet::from_symbols([a.clone()]).unwrap();
        let n = RankedAlphabet::new([("x", 2)]).unwrap();
        let x = n.lookup("x").unwrap().clone();
        let rules = vec![
            Rule {
                lhs: x.clone(),
                rhs: body(2, &[0, 1], vec![(term(&a), vec![0, 1])]),
            },
            Rule {
                lhs: x,
                rhs: body(3, &[0, 2], vec![(var("x", 2), vec![0, 1]), (var("x", 2), vec![1, 2])]),
            },
        ];
        Grammar::new(t, n, "x", rules).unwrap()
    }

    /// Balanced binary trees, edges pointing towards the root, root = source.
    pub fn balanced_trees() -> FreeGrammar {
        let e = Symbol::new("edge", 2);
        let t = RankedAlphabet::from_symbols([e.clone()]).unwrap();
        let n = RankedAlphabet::new([("x", 1)]).unwrap();
        let x = n.lookup("x").unwrap().clone();
        let rules = vec![
            Rule {
                lhs: x.clone(),
                rhs: body(1, &[0], vec![]),
            },
            Rule {
                lhs: x,
                rhs: body(
                    3,
                    &[0],
                    vec![
                        (term(&e), vec![1, 0]),
                        (term(&e), vec![2, 0]),
                        (var("x", 1), vec![1]),
                        (var("x", 1), vec![2]),
                    ],
                ),
            },
        ];
        Grammar::new(t, n, "x", rules).unwrap()
    }

    /// All rooted trees, edges pointing towards the root. `y` adds an edge
    /// above a tree or fuses two trees at their roots; `o` is a copy of `y`
    /// so that fusion can use two independent values.
    pub fn trees() -> FreeGrammar {
        let e = Symbol::new("edge", 2);
        let t = RankedAlphabet::from_symbols([e.clone()]).unwrap();
        let n = RankedAlphabet::new([("y", 1), ("o", 1)]).unwrap();
        let y = n.lookup("y").unwrap().clone();
        let o = n.lookup("o").unwrap().clone();
        let rules = vec![
            Rule {
                lhs: y.clone(),
                rhs: body(1, &[0], vec![]),
            },
            Rule {
                lhs: y.clone(),
                rhs: body(2, &[0], vec![(term(&e), vec![1, 0]), (var("y", 1), vec![1])]),
            },
            Rule {
                lhs: y,
                rhs: body(1, &[0], vec![(var("y", 1), vec![0]), (var("o", 1), vec![0])]),
            },
            Rule {
                lhs: o,
                rhs: body(1, &[0], vec![(var("y", 1), vec![0])]),
            },
        ];
        Grammar::new(t, n, "y", rules).unwrap()
    }

    /// Directed cycles of length at least two. `p` derives directed paths
    /// from its first source to its second.
    pub fn cycles() -> FreeGrammar {
        let e = Symbol::new("edge", 2);
        let t = RankedAlphabet::from_symbols([e.clone()]).unwrap();
        let n = RankedAlphabet::new([("s", 0), ("p", 2)]).unwrap();
        let s = n.lookup("s").unwrap().clone();
        let p = n.lookup("p").unwrap().clone();
        let rules = vec![
            Rule {
                lhs: s,
                rhs: body(2, &[], vec![(term(&e), vec![0, 1]), (var("p", 2), vec![1, 0])]),
            },
            Rule {
                lhs: p.clone(),
                rhs: body(2, &[0, 1], vec![(term(&e), vec![0, 1])]),
            },
            Rule {
                lhs: p,
                rhs: body(3, &[0, 2], vec![(term(&e), vec![0, 1]), (var("p", 2), vec![1, 2])]),
            },
        ];
        Grammar::new(t, n, "s", rules).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::FreeAlgebra;

    #[test]
    fn exponential_depth_three() {
        let g = examples::exponential();
        let d = DerivationTree::node(1, [("x", DerivationTree::node(1, [("x", DerivationTree::leaf(0))]))]);
        let w = yield_of(&d, &g, &FreeAlgebra).unwrap();
        assert_eq!(w.edges().len(), 4);
        assert_eq!(d.node_count(), 3);
        assert_eq!(d.unfolded_size(&g).unwrap(), 7);
    }

    #[test]
    fn balanced_depth_two() {
        let g = examples::balanced_trees();
        let d = DerivationTree::node(1, [("x", DerivationTree::leaf(0))]);
        let t = yield_of(&d, &g, &FreeAlgebra).unwrap();
        assert_eq!(t.vertex_count(), 3);
        assert_eq!(t.edges().len(), 2);
    }

    #[test]
    fn invalid_derivations() {
        let g = examples::cycles();
        // Rule 0 is for `s` and needs a child for `p`.
        assert!(matches!(
            yield_of(&DerivationTree::leaf(0), &g, &FreeAlgebra),
            Err(Error::InvalidDerivation(_))
        ));
        // Child for `p` uses a rule for `s`.
        let d = DerivationTree::node(0, [("p", DerivationTree::leaf(0))]);
        assert!(matches!(yield_of(&d, &g, &FreeAlgebra), Err(Error::InvalidDerivation(_))));
        assert!(matches!(
            yield_of(&DerivationTree::leaf(7), &g, &FreeAlgebra),
            Err(Error::InvalidDerivation(_))
        ));
    }

    #[test]
    fn enumeration_is_monotone() {
        let g = examples::trees();
        let small: Vec<String> = enumerate_language(&g, &FreeAlgebra, 4).unwrap().iter().map(|i| i.value.key()).collect();
        let large: BTreeSet<String> =
            enumerate_language(&g, &FreeAlgebra, 6).unwrap().iter().map(|i| i.value.key()).collect();
        assert!(small.iter().all(|k| large.contains(k)));
        assert!(large.len() > small.len());
    }

    #[test]
    fn file_roundtrip() {
        for g in [
            examples::exponential(),
            examples::balanced_trees(),
            examples::trees(),
            examples::cycles(),
        ] {
            let text = g.to_text();
            let back = FreeGrammar::parse(&text).unwrap();
            assert_eq!(back.to_text(), text);
        }
    }

    #[test]
    fn validation_messages() {
        let text = "(grammar (terminals (a 2)) (nonterminals (x 2) (z 1)) (start x)\n (rule x (graph (arity 2) (vertices 0 1) (sources 0 1) (edges (0 (const a) 0 1)))))";
        let g = FreeGrammar::parse(text).unwrap();
        let r = g.validate();
        assert!(r.is_valid());
        assert!(r.warnings.iter().any(|w| w.contains("`z` has no rules")));
        let bad = "(grammar (terminals (a 2)) (nonterminals (x 2)) (start x)\n (rule x (graph (arity 2) (vertices 0 1) (sources 0 1) (edges (0 (const b) 0 1)))))";
        assert!(matches!(FreeGrammar::parse(bad), Err(Error::Parse { .. })));
        let bad_start = "(grammar (nonterminals (x 2)) (start y))";
        assert!(matches!(FreeGrammar::parse(bad_start), Err(Error::Parse { line: 1, column: 38, .. })));
    }
}
