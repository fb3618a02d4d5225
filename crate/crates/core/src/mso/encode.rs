//! Relational encodings of hypergraphs.

use super::model::Model;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::ranked::{Ranked, RankedAlphabet, Symbol};
use crate::vr::VHypergraph;

/// Universe: vertices `0..|V|`, then hyperedges. A unary relation per
/// alphabet symbol holding of its edges, binary relations `inc_i` (for `i`
/// up to the alphabet's maximal arity) holding of `(e, v)` when `v` is the
/// `i`-th vertex of `e`, and constants `src_1..src_n` for the sources.
pub fn encode_h(g: &Hypergraph<Symbol>, alphabet: &RankedAlphabet) -> Result<Model> {
    let nv = g.vertex_count();
    let mut m = Model::new(nv + g.edges().len());
    for s in alphabet.symbols() {
        m.declare(s.name(), 1)?;
    }
    for i in 1..=alphabet.max_arity() {
        m.declare(&inc(i), 2)?;
    }
    for (k, e) in g.edges().iter().enumerate() {
        if !alphabet.contains(&e.label) {
            return Err(Error::UnknownSymbol(e.label.to_string()));
        }
        let id = nv + k;
        m.insert(e.label.name(), vec![id])?;
        for (i, &v) in e.incidence.iter().enumerate() {
            m.insert(&inc(i + 1), vec![id, v])?;
        }
    }
    for (i, &v) in g.sources().iter().enumerate() {
        m.set_constant(&source(i + 1), v)?;
    }
    Ok(m)
}

/// Universe: the corners, hypervertex by hypervertex. A binary `edge`
/// relation, unary `{a}#{i}` selecting the `i`-th corners of `a`-labelled
/// hypervertices, and unary `port_{p}` for `p` up to the arity.
pub fn encode_v(g: &VHypergraph<Symbol>, alphabet: &RankedAlphabet) -> Result<Model> {
    let corners: Vec<(usize, usize)> = g.corners().collect();
    let id = |c: (usize, usize)| corners.binary_search(&c).expect("corner exists");
    let mut m = Model::new(corners.len());
    m.declare("edge", 2)?;
    for s in alphabet.symbols() {
        for i in 1..=s.arity() {
            m.declare(&corner_relation(s.name(), i), 1)?;
        }
    }
    for p in 1..=g.arity() {
        m.declare(&port(p), 1)?;
    }
    for (v, l) in g.labels().iter().enumerate() {
        if !alphabet.contains(l) {
            return Err(Error::UnknownSymbol(l.to_string()));
        }
        for i in 0..l.arity() {
            m.insert(&corner_relation(l.name(), i + 1), vec![id((v, i))])?;
            m.insert(&port(g.port((v, i)) + 1), vec![id((v, i))])?;
        }
    }
    for &(a, b) in g.edges() {
        m.insert("edge", vec![id(a), id(b)])?;
    }
    Ok(m)
}

pub fn inc(i: usize) -> String {
    format!("inc_{i}")
}

pub fn source(i: usize) -> String {
    format!("src_{i}")
}

pub fn port(p: usize) -> String {
    format!("port_{p}")
}

pub fn corner_relation(label: &str, i: usize) -> String {
    format!("{label}#{i}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vr::directed_graph;

    #[test]
    fn unit_edge() {
        let alph = RankedAlphabet::new([("edge", 2)]).unwrap();
        let g = Hypergraph::unit(alph.get("edge").unwrap().clone());
        let m = encode_h(&g, &alph).unwrap();
        assert_eq!(m.size(), 3);
        assert_eq!(m.relation("inc_1").unwrap().sorted(), vec![&vec![2, 0]]);
        assert_eq!(m.relation("inc_2").unwrap().sorted(), vec![&vec![2, 1]]);
        assert_eq!(m.constant("src_1"), Some(0));
        assert_eq!(m.constant("src_2"), Some(1));
        let empty = encode_h(&Hypergraph::empty(), &alph).unwrap();
        assert_eq!(empty.size(), 0);
        assert!(empty.constants().is_empty());
    }

    #[test]
    fn directed_two_cycle() {
        let g = directed_graph(2, &[(0, 1), (1, 0)]).unwrap();
        let alph = RankedAlphabet::from_used(g.labels().iter().cloned()).unwrap();
        let m = encode_v(&g, &alph).unwrap();
        assert_eq!(m.size(), 2);
        assert_eq!(m.relation("edge").unwrap().sorted(), vec![&vec![0, 1], &vec![1, 0]]);
        assert_eq!(m.relation("port_1").unwrap().tuples.len(), 2);
    }

    #[test]
    fn unknown_label() {
        let alph = RankedAlphabet::new([("a", 1)]).unwrap();
        let g = Hypergraph::unit(Symbol::new("b", 1));
        assert!(matches!(encode_h(&g, &alph), Err(Error::UnknownSymbol(_))));
    }
}
