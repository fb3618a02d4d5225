//! The two base graph properties that the recognisable-language constructions
//! start from, evaluated directly on graphs.

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::ranked::{Ranked, Symbol};

/// Is there an `a`-edge `e` and a `b`-edge `f` with `e[i] = f[j]`?
/// Positions are zero-based. With `strict`, `e` and `f` must be different
/// edges; this only matters when `(a, i) = (b, j)`.
pub fn base_shared_vertex(
    g: &Hypergraph<Symbol>,
    (a, i): (&Symbol, usize),
    (b, j): (&Symbol, usize),
    strict: bool,
) -> Result<bool> {
    if i >= a.arity() || j >= b.arity() {
        return Err(Error::RangeError(format!("positions ({i}, {j}) for {a:?} and {b:?}")));
    }
    let edges = g.edges();
    for (x, e) in edges.iter().enumerate() {
        if &e.label != a {
            continue;
        }
        for (y, f) in edges.iter().enumerate() {
            if &f.label == b && e.incidence[i] == f.incidence[j] && !(strict && x == y) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Is the number of `a`-edges divisible by `m`?
pub fn base_count_divisible(g: &Hypergraph<Symbol>, a: &Symbol, m: usize) -> Result<bool> {
    if m == 0 {
        return Err(Error::RangeError("modulus must be at least 1".into()));
    }
    Ok(count_label(g, a) % m == 0)
}

pub fn count_label(g: &Hypergraph<Symbol>, a: &Symbol) -> usize {
    g.edges().iter().filter(|e| &e.label == a).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shared_first_vertex() {
        let e = Symbol::new("edge", 2);
        let mut g = Hypergraph::sources_only(0);
        for _ in 0..3 {
            g.add_vertex();
        }
        g.add_edge(e.clone(), vec![0, 1]).unwrap();
        g.add_edge(e.clone(), vec![0, 2]).unwrap();
        assert!(base_shared_vertex(&g, (&e, 0), (&e, 0), true).unwrap());
        assert!(!base_shared_vertex(&g, (&e, 1), (&e, 1), true).unwrap());
        assert!(base_shared_vertex(&g, (&e, 1), (&e, 1), false).unwrap());
        assert!(base_shared_vertex(&g, (&e, 2), (&e, 0), false).is_err());
    }

    #[test]
    fn divisibility() {
        let a = Symbol::new("a", 0);
        assert!(base_count_divisible(&Hypergraph::empty(), &a, 3).unwrap());
        let mut g = Hypergraph::empty();
        for _ in 0..3 {
            g.add_edge(a.clone(), vec![]).unwrap();
        }
        assert!(!base_count_divisible(&g, &a, 2).unwrap());
        assert!(base_count_divisible(&g, &a, 0).is_err());
    }
}
