//! Sourced hypergraphs and the hypergraph monad.
//!
//! A [`Hypergraph<L>`] has vertices `0..n`, a list of hyperedges labelled by
//! `L` (each with a non-repeating incidence list whose length is the label's
//! arity) and an injective list of sources. The label type is generic, so the
//! same type serves for graphs over an alphabet, graphs of graphs (the input
//! of [`Hypergraph::flatten`]), polynomial terms and algebra terms.
//!
//! There is deliberately no `PartialEq`: graphs are compared up to
//! isomorphism through [`Hypergraph::is_isomorphic`] or canonical codes.

use crate::canon::{self, Canonical, Structure};
use crate::error::{Error, Result};
use crate::ranked::{Ranked, RankedMap, Symbol};
use std::fmt;

/// A hyperedge label. `key` must be equal for two labels exactly when they
/// are interchangeable up to isomorphism; it feeds canonical forms.
pub trait Label: Ranked + Clone + fmt::Debug {
    fn key(&self) -> String;
}

impl Label for Symbol {
    fn key(&self) -> String {
        format!("{}/{}", self.name(), self.arity())
    }
}

#[derive(Clone, Debug)]
pub struct Hyperedge<L> {
    pub label: L,
    pub incidence: Vec<usize>,
}

#[derive(Clone)]
pub struct Hypergraph<L> {
    vertex_count: usize,
    edges: Vec<Hyperedge<L>>,
    sources: Vec<usize>,
}

impl<L: Label> Hypergraph<L> {
    pub fn new(vertex_count: usize, edges: Vec<Hyperedge<L>>, sources: Vec<usize>) -> Result<Self> {
        let g = Hypergraph {
            vertex_count,
            edges,
            sources,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        for (i, e) in self.edges.iter().enumerate() {
            if e.incidence.len() != e.label.arity() {
                return Err(Error::ArityMismatch(format!(
                    "edge {i} has {} attachments but its label has arity {}",
                    e.incidence.len(),
                    e.label.arity()
                )));
            }
            check_injective_in_range(&e.incidence, self.vertex_count, &format!("edge {i}"))?;
        }
        check_injective_in_range(&self.sources, self.vertex_count, "sources")
    }

    /// The graph with no vertices and no edges.
    pub fn empty() -> Self {
        Hypergraph {
            vertex_count: 0,
            edges: Vec::new(),
            sources: Vec::new(),
        }
    }

    /// `n` vertices, all of them sources in order, and no edges.
    pub fn sources_only(n: usize) -> Self {
        Hypergraph {
            vertex_count: n,
            edges: Vec::new(),
            sources: (0..n).collect(),
        }
    }

    /// The monad unit: vertices `0..n`, one edge over them, sources in order.
    pub fn unit(label: L) -> Self {
        let n = label.arity();
        Hypergraph {
            vertex_count: n,
            edges: vec![Hyperedge {
                label,
                incidence: (0..n).collect(),
            }],
            sources: (0..n).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Hyperedge<L>] {
        &self.edges
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    pub fn source_index(&self, v: usize) -> Option<usize> {
        self.sources.iter().position(|&s| s == v)
    }

    pub fn add_vertex(&mut self) -> usize {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    pub fn add_edge(&mut self, label: L, incidence: Vec<usize>) -> Result<usize> {
        let idx = self.edges.len();
        self.edges.push(Hyperedge { label, incidence });
        if let Err(e) = self.validate() {
            self.edges.pop();
            return Err(e);
        }
        Ok(idx)
    }

    pub fn set_sources(&mut self, sources: Vec<usize>) -> Result<()> {
        check_injective_in_range(&sources, self.vertex_count, "sources")?;
        self.sources = sources;
        Ok(())
    }

    /// Functor action on labels. Arities must be preserved.
    pub fn try_map_labels<M: Label>(&self, mut f: impl FnMut(&L) -> Result<M>) -> Result<Hypergraph<M>> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let label = f(&e.label)?;
            if label.arity() != e.label.arity() {
                return Err(Error::ArityMismatch(format!(
                    "label {:?} of arity {} replaced by {:?} of arity {}",
                    e.label,
                    e.label.arity(),
                    label,
                    label.arity()
                )));
            }
            edges.push(Hyperedge {
                label,
                incidence: e.incidence.clone(),
            });
        }
        Ok(Hypergraph {
            vertex_count: self.vertex_count,
            edges,
            sources: self.sources.clone(),
        })
    }

    pub fn map_labels<M: Label>(&self, mut f: impl FnMut(&L) -> M) -> Result<Hypergraph<M>> {
        self.try_map_labels(|l| Ok(f(l)))
    }

    /// Colour-and-tuple view used by canonical forms.
    pub fn to_structure(&self) -> Structure {
        let mut colors = vec![String::new(); self.vertex_count];
        for (i, &s) in self.sources.iter().enumerate() {
            colors[s] = format!("s{i}");
        }
        let mut st = Structure::new(colors);
        for e in &self.edges {
            st.push(e.label.key(), e.incidence.clone());
        }
        st
    }

    pub fn canonical(&self) -> Canonical {
        canon::canonicalize(&self.to_structure())
    }

    pub fn canonical_code(&self) -> String {
        self.canonical().code
    }

    /// Relabels vertices into canonical order.
    pub fn canonical_graph(&self) -> Self {
        let order = self.canonical().order;
        let mut rank = vec![0; self.vertex_count];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        let mut edges: Vec<Hyperedge<L>> = self
            .edges
            .iter()
            .map(|e| Hyperedge {
                label: e.label.clone(),
                incidence: e.incidence.iter().map(|&v| rank[v]).collect(),
            })
            .collect();
        edges.sort_by_cached_key(|e| (e.label.key(), e.incidence.clone()));
        Hypergraph {
            vertex_count: self.vertex_count,
            edges,
            sources: self.sources.iter().map(|&v| rank[v]).collect(),
        }
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.isomorphism(other).is_some()
    }

    /// A vertex bijection to `other` preserving edges (with multiplicity),
    /// labels and sources.
    pub fn isomorphism(&self, other: &Self) -> Option<Vec<usize>> {
        if self.vertex_count != other.vertex_count
            || self.edges.len() != other.edges.len()
            || self.sources.len() != other.sources.len()
        {
            return None;
        }
        canon::isomorphism(&self.to_structure(), &other.to_structure())
    }

    /// Parallel composition: disjoint union with the `i`-th sources fused.
    pub fn parallel(&self, other: &Self) -> Result<Self> {
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch(format!(
                "parallel composition of arities {} and {}",
                self.arity(),
                other.arity()
            )));
        }
        let mut out = self.clone();
        let map: Vec<usize> = (0..other.vertex_count)
            .map(|v| match other.source_index(v) {
                Some(i) => self.sources[i],
                None => out.add_vertex(),
            })
            .collect();
        for e in &other.edges {
            out.edges.push(Hyperedge {
                label: e.label.clone(),
                incidence: e.incidence.iter().map(|&v| map[v]).collect(),
            });
        }
        Ok(out)
    }

    /// Adds a fresh vertex that becomes the last source.
    pub fn add_isolated_source(&self) -> Self {
        let mut out = self.clone();
        let v = out.add_vertex();
        out.sources.push(v);
        out
    }

    /// Output source `i` is input source `f[i]`; sources outside the image
    /// of `f` become ordinary vertices. `f` must be injective.
    pub fn forget_sources(&self, f: &[usize]) -> Result<Self> {
        check_injective_in_range(f, self.arity(), "source map")?;
        let mut out = self.clone();
        out.sources = f.iter().map(|&i| self.sources[i]).collect();
        Ok(out)
    }

    /// Vertex-disjoint union; sources of `self` come first.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let off = self.vertex_count;
        let mut out = self.clone();
        out.vertex_count += other.vertex_count;
        for e in &other.edges {
            out.edges.push(Hyperedge {
                label: e.label.clone(),
                incidence: e.incidence.iter().map(|&v| v + off).collect(),
            });
        }
        out.sources.extend(other.sources.iter().map(|&v| v + off));
        out
    }

    /// Adjacency lists of the primal graph: two vertices are adjacent when
    /// some hyperedge contains both.
    pub fn primal_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![std::collections::BTreeSet::new(); self.vertex_count];
        for e in &self.edges {
            for &u in &e.incidence {
                for &v in &e.incidence {
                    if u != v {
                        adj[u].insert(v);
                    }
                }
            }
        }
        adj.into_iter().map(|s| s.into_iter().collect()).collect()
    }
}

impl<L> Ranked for Hypergraph<L> {
    fn arity(&self) -> usize {
        self.sources.len()
    }
}

impl<L: Label> Label for Hypergraph<L> {
    fn key(&self) -> String {
        format!("G[{}]", self.canonical_code())
    }
}

impl<L: fmt::Debug> fmt::Debug for Hypergraph<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypergraph(v={}, src={:?}, edges=[", self.vertex_count, self.sources)?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{:?}{:?}", e.label, e.incidence)?;
        }
        f.write_str("])")
    }
}

impl<L: Label> Hypergraph<Hypergraph<L>> {
    /// Monad multiplication: replace each edge by its label graph, fusing the
    /// label's `i`-th source with the edge's `i`-th attachment.
    pub fn flatten(&self) -> Hypergraph<L> {
        let mut out = Hypergraph {
            vertex_count: self.vertex_count,
            edges: Vec::new(),
            sources: self.sources.clone(),
        };
        for e in &self.edges {
            let inner = &e.label;
            let map: Vec<usize> = (0..inner.vertex_count)
                .map(|v| match inner.source_index(v) {
                    Some(i) => e.incidence[i],
                    None => out.add_vertex(),
                })
                .collect();
            for f in &inner.edges {
                out.edges.push(Hyperedge {
                    label: f.label.clone(),
                    incidence: f.incidence.iter().map(|&v| map[v]).collect(),
                });
            }
        }
        out
    }
}

impl Hypergraph<Symbol> {
    pub fn relabel(&self, map: &RankedMap) -> Result<Hypergraph<Symbol>> {
        self.try_map_labels(|s| map.apply(s))
    }

    /// Replaces every label by its unit graph.
    pub fn units(&self) -> Hypergraph<Hypergraph<Symbol>> {
        self.map_labels(|s| Hypergraph::unit(s.clone()))
            .expect("unit preserves arity")
    }

    /// Alphabet of the labels actually used.
    pub fn used_symbols(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = self.edges.iter().map(|e| e.label.clone()).collect();
        out.sort();
        out.dedup();
        out
    }
}

pub(crate) fn check_injective_in_range(list: &[usize], bound: usize, what: &str) -> Result<()> {
    for (i, &x) in list.iter().enumerate() {
        if x >= bound {
            return Err(Error::RangeError(format!("{what}: {x} is not below {bound}")));
        }
        if list[..i].contains(&x) {
            return Err(Error::NotInjective(format!("{what}: {x} repeated")));
        }
    }
    Ok(())
}
