//! Exhaustive enumeration of small sourced hypergraphs up to isomorphism.

use crate::hypergraph::{Hyperedge, Hypergraph, Label};
use crate::ranked::{RankedAlphabet, Symbol};
use std::collections::BTreeMap;

/// One representative per isomorphism class of graphs over `alphabet` with
/// `arity` sources, at most `max_vertices` vertices and at most `max_edges`
/// edges. Sources are the first `arity` vertices of every representative.
/// The order is deterministic: by vertex count, edge count, canonical code.
pub fn enumerate_hypergraphs(
    alphabet: &RankedAlphabet,
    arity: usize,
    max_vertices: usize,
    max_edges: usize,
) -> Vec<Hypergraph<Symbol>> {
    let mut found: BTreeMap<(usize, usize, String), Hypergraph<Symbol>> = BTreeMap::new();
    for n in arity..=max_vertices {
        let slots = edge_slots(alphabet.symbols(), n);
        let mut chosen: Vec<usize> = Vec::new();
        multisets(slots.len(), max_edges, 0, &mut chosen, &mut |picked| {
            let edges = picked
                .iter()
                .map(|&i| Hyperedge {
                    label: slots[i].0.clone(),
                    incidence: slots[i].1.clone(),
                })
                .collect();
            let g = Hypergraph::new(n, edges, (0..arity).collect()).expect("slots are valid");
            let code = g.canonical_code();
            found.entry((n, picked.len(), code)).or_insert(g);
        });
    }
    found.into_values().collect()
}

/// Every (label, incidence) pair possible on `n` vertices.
fn edge_slots<L: Label>(labels: &[L], n: usize) -> Vec<(L, Vec<usize>)> {
    let mut out = Vec::new();
    for l in labels {
        let mut tuple = Vec::new();
        injective_tuples(n, l.arity(), &mut tuple, &mut |t| out.push((l.clone(), t.to_vec())));
    }
    out
}

pub(crate) fn injective_tuples(n: usize, len: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == len {
        f(cur);
        return;
    }
    for v in 0..n {
        if !cur.contains(&v) {
            cur.push(v);
            injective_tuples(n, len, cur, f);
            cur.pop();
        }
    }
}

/// Non-decreasing index sequences of length at most `max` over `0..k`.
fn multisets(k: usize, max: usize, from: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    f(cur);
    if cur.len() == max {
        return;
    }
    for i in from..k {
        cur.push(i);
        multisets(k, max, i, cur, f);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_unary_symbol() {
        let a = RankedAlphabet::new([("a", 1)]).unwrap();
        let all = enumerate_hypergraphs(&a, 0, 2, 1);
        assert_eq!(all.len(), 5);
    }

    #[test]
    fn pairwise_non_isomorphic() {
        let a = RankedAlphabet::new([("a", 1), ("e", 2)]).unwrap();
        let all = enumerate_hypergraphs(&a, 1, 3, 2);
        for i in 0..all.len() {
            for j in 0..i {
                assert!(!all[i].is_isomorphic(&all[j]));
            }
        }
    }

    #[test]
    fn deterministic() {
        let a = RankedAlphabet::new([("e", 2)]).unwrap();
        let x: Vec<String> = enumerate_hypergraphs(&a, 0, 3, 2).iter().map(|g| g.canonical_code()).collect();
        let y: Vec<String> = enumerate_hypergraphs(&a, 0, 3, 2).iter().map(|g| g.canonical_code()).collect();
        assert_eq!(x, y);
    }
}
