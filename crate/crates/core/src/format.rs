//! Text formats for hypergraphs: the `(graph ...)` s-expression and DOT.
//!
//! ```text
//! (graph
//!   (arity 2)
//!   (vertices 0 1 2)
//!   (sources 0 2)
//!   (edges
//!     (0 e 0 1)
//!     (1 e 1 2)))
//! ```
//!
//! Vertex and edge identifiers are arbitrary atoms. Printing always numbers
//! them from zero, so a printed file reads back to the same text.

use crate::error::{Error, Result};
use crate::hypergraph::{Hyperedge, Hypergraph, Label};
use crate::ranked::{Ranked, RankedAlphabet, Symbol};
use crate::sexp::{self, Pos, Sexp};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Labels that have an s-expression form.
pub trait SexpLabel: Label + Sized {
    fn label_to_sexp(&self) -> Sexp;
    fn label_from_sexp(s: &Sexp, arity: usize) -> Result<Self>;
}

impl SexpLabel for Symbol {
    fn label_to_sexp(&self) -> Sexp {
        Sexp::atom(self.name())
    }

    fn label_from_sexp(s: &Sexp, arity: usize) -> Result<Self> {
        Ok(Symbol::new(s.as_atom()?, arity))
    }
}

impl<L: SexpLabel> SexpLabel for Hypergraph<L> {
    fn label_to_sexp(&self) -> Sexp {
        graph_to_sexp(self)
    }

    fn label_from_sexp(s: &Sexp, arity: usize) -> Result<Self> {
        let g: Hypergraph<L> = graph_from_sexp(s)?;
        if g.arity() != arity {
            return Err(s.pos().error(format!(
                "nested graph has arity {} but is attached to {arity} vertices",
                g.arity()
            )));
        }
        Ok(g)
    }
}

pub fn graph_to_sexp<L: SexpLabel>(g: &Hypergraph<L>) -> Sexp {
    let num = |v: usize| Sexp::atom(v.to_string());
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let mut items = vec![num(i), e.label.label_to_sexp()];
            items.extend(e.incidence.iter().map(|&v| num(v)));
            Sexp::list(items)
        })
        .collect();
    Sexp::tagged(
        "graph",
        vec![
            Sexp::tagged("arity", vec![num(g.arity())]),
            Sexp::tagged("vertices", (0..g.vertex_count()).map(num).collect()),
            Sexp::tagged("sources", g.sources().iter().map(|&v| num(v)).collect()),
            Sexp::tagged("edges", edges),
        ],
    )
}

/// Splits `(head (name ...) (name ...))` into its named sections, rejecting
/// unknown or repeated names.
pub(crate) fn sections<'a>(items: &'a [Sexp], allowed: &[&str]) -> Result<BTreeMap<String, (&'a [Sexp], Pos)>> {
    let mut out = BTreeMap::new();
    for item in items {
        let name = item
            .head()
            .ok_or_else(|| item.pos().error("expected a `(section ...)` list"))?;
        if !allowed.contains(&name) {
            return Err(item.pos().error(format!("unknown section `{name}`")));
        }
        let body = &item.as_list()?[1..];
        if out.insert(name.to_string(), (body, item.pos())).is_some() {
            return Err(item.pos().error(format!("section `{name}` repeated")));
        }
    }
    Ok(out)
}

pub fn graph_from_sexp<L: SexpLabel>(s: &Sexp) -> Result<Hypergraph<L>> {
    let secs = sections(s.expect_tagged("graph")?, &["arity", "vertices", "sources", "edges"])?;
    let (vbody, _) = secs
        .get("vertices")
        .ok_or_else(|| s.pos().error("missing `(vertices ...)`"))?;
    let mut ids: BTreeMap<&str, usize> = BTreeMap::new();
    for v in vbody.iter() {
        let name = v.as_atom()?;
        if ids.insert(name, ids.len()).is_some() {
            return Err(v.pos().error(format!("duplicate vertex `{name}`")));
        }
    }
    let vertex = |v: &Sexp| -> Result<usize> {
        let name = v.as_atom()?;
        ids.get(name)
            .copied()
            .ok_or_else(|| v.pos().error(format!("unknown vertex `{name}`")))
    };
    let mut sources = Vec::new();
    if let Some((body, _)) = secs.get("sources") {
        for v in body.iter() {
            sources.push(vertex(v)?);
        }
    }
    if let Some((body, pos)) = secs.get("arity") {
        let n = match body {
            [x] => x.as_usize()?,
            _ => return Err(pos.error("expected `(arity N)`")),
        };
        if n != sources.len() {
            return Err(pos.error(format!("arity {n} but {} sources listed", sources.len())));
        }
    }
    let mut edges = Vec::new();
    let mut edge_ids = std::collections::BTreeSet::new();
    if let Some((body, _)) = secs.get("edges") {
        for e in body.iter() {
            let items = e.as_list()?;
            if items.len() < 2 {
                return Err(e.pos().error("expected `(ID LABEL v...)`"));
            }
            let id = items[0].as_atom()?;
            if !edge_ids.insert(id) {
                return Err(items[0].pos().error(format!("duplicate edge `{id}`")));
            }
            let incidence = items[2..].iter().map(vertex).collect::<Result<Vec<_>>>()?;
            let label = L::label_from_sexp(&items[1], incidence.len())?;
            edges.push(Hyperedge { label, incidence });
        }
    }
    Hypergraph::new(ids.len(), edges, sources).map_err(|err| s.pos().error(err.to_string()))
}

pub fn parse_graph<L: SexpLabel>(text: &str) -> Result<Hypergraph<L>> {
    graph_from_sexp(&sexp::parse_one(text)?)
}

pub fn print_graph<L: SexpLabel>(g: &Hypergraph<L>) -> String {
    graph_to_sexp(g).to_pretty()
}

impl Hypergraph<Symbol> {
    /// Checks every label against `alphabet`.
    pub fn check_alphabet(&self, alphabet: &RankedAlphabet) -> Result<()> {
        for e in self.edges() {
            let s = alphabet.lookup(e.label.name())?;
            if s.arity() != e.label.arity() {
                return Err(Error::ArityMismatch(format!(
                    "`{}` used with {} attachments, declared arity {}",
                    s.name(),
                    e.label.arity(),
                    s.arity()
                )));
            }
        }
        Ok(())
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT rendering: vertices as circles, hyperedges as boxes, with numbered
/// arrows from each box to its attachments.
pub fn graph_to_dot<L: SexpLabel>(g: &Hypergraph<L>, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", dot_escape(name));
    for v in 0..g.vertex_count() {
        let label = match g.source_index(v) {
            Some(i) => format!("{v} [s{}]", i + 1),
            None => v.to_string(),
        };
        let _ = writeln!(out, "  v{v} [shape=circle, label=\"{}\"];", dot_escape(&label));
    }
    for (i, e) in g.edges().iter().enumerate() {
        let _ = writeln!(
            out,
            "  e{i} [shape=box, label=\"{}\"];",
            dot_escape(&e.label.label_to_sexp().to_compact())
        );
        for (k, v) in e.incidence.iter().enumerate() {
            let _ = writeln!(out, "  e{i} -> v{v} [label=\"{}\"];", k + 1);
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const PATH: &str = "(graph\n  (arity 2)\n  (vertices 0 1 2)\n  (sources 0 2)\n  (edges\n    (0 e 0 1)\n    (1 e 1 2)))\n";

    #[test]
    fn roundtrip() {
        let g: Hypergraph<Symbol> = parse_graph(PATH).unwrap();
        assert_eq!(print_graph(&g), PATH);
    }

    #[test]
    fn named_vertices() {
        let g: Hypergraph<Symbol> =
            parse_graph("(graph (vertices x y) (sources y) (edges (a e x y)))").unwrap();
        assert_eq!(g.sources(), &[1]);
        assert_eq!(g.edges()[0].incidence, vec![0, 1]);
    }

    #[test]
    fn errors_have_positions() {
        let err = parse_graph::<Symbol>("(graph (vertices 0)\n (edges (0 e 0 9)))").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 16, .. }), "{err:?}");
        let err = parse_graph::<Symbol>("(graph (arity 2) (vertices 0) (sources 0))").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, column: 8, .. }), "{err:?}");
    }

    #[test]
    fn nested_labels() {
        let text = "(graph (vertices 0 1) (sources 0) (edges (0 (graph (vertices a b) (sources a b) (edges (0 e a b))) 0 1)))";
        let g: Hypergraph<Hypergraph<Symbol>> = parse_graph(text).unwrap();
        let flat = g.flatten();
        assert_eq!(flat.edges().len(), 1);
        let back: Hypergraph<Hypergraph<Symbol>> = parse_graph(&print_graph(&g)).unwrap();
        assert_eq!(print_graph(&back), print_graph(&g));
    }

    #[test]
    fn dot_output() {
        let g: Hypergraph<Symbol> = parse_graph(PATH).unwrap();
        let dot = graph_to_dot(&g, "p");
        assert!(dot.contains("e1 -> v2 [label=\"2\"]"));
        assert!(dot.contains("v0 [shape=circle, label=\"0 [s1]\"]"));
    }
}
