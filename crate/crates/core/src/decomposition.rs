//! Tree decompositions, exact treewidth of small graphs, binarisation and
//! algebraic tree decompositions.
//!
//! Width is the largest bag size minus one, so a forest has width one and
//! the empty graph has width minus one.

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::polynomial::{FreeAlgebra, PolynomialTerm, Valuation};
use crate::ranked::{Ranked, Symbol};
use crate::sexp::{self, Sexp};
use std::collections::{BTreeMap, BTreeSet};

/// Largest vertex count accepted by [`exact_treewidth`].
pub const EXACT_TREEWIDTH_LIMIT: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TdNode {
    pub bag: BTreeSet<usize>,
    pub children: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub nodes: Vec<TdNode>,
    pub root: usize,
}

impl TreeDecomposition {
    pub fn single(bag: impl IntoIterator<Item = usize>) -> Self {
        TreeDecomposition {
            nodes: vec![TdNode {
                bag: bag.into_iter().collect(),
                children: Vec::new(),
            }],
            root: 0,
        }
    }

    pub fn width(&self) -> isize {
        self.nodes.iter().map(|n| n.bag.len() as isize).max().unwrap_or(0) - 1
    }

    /// Parent of every node, or an error if the nodes do not form a tree
    /// rooted at `root`.
    fn parents(&self) -> std::result::Result<Vec<Option<usize>>, String> {
        let n = self.nodes.len();
        if self.root >= n {
            return Err("root is not a node".into());
        }
        let mut parent = vec![None; n];
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                if c >= n {
                    return Err(format!("node {i} has unknown child {c}"));
                }
                if c == self.root || parent[c].replace(i).is_some() {
                    return Err(format!("node {c} has more than one parent"));
                }
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            if std::mem::replace(&mut seen[x], true) {
                return Err("cycle among nodes".into());
            }
            stack.extend(&self.nodes[x].children);
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(format!("node {i} is not reachable from the root"));
        }
        Ok(parent)
    }

    /// Checks the decomposition against `g`. With `sourced`, every source
    /// must also lie in the root bag.
    pub fn check<L: crate::Label>(&self, g: &Hypergraph<L>, sourced: bool) -> std::result::Result<(), String> {
        let parent = self.parents()?;
        for (i, node) in self.nodes.iter().enumerate() {
            if let Some(&v) = node.bag.iter().find(|&&v| v >= g.vertex_count()) {
                return Err(format!("bag {i} contains unknown vertex {v}"));
            }
        }
        for v in 0..g.vertex_count() {
            let tops = (0..self.nodes.len())
                .filter(|&i| self.nodes[i].bag.contains(&v))
                .filter(|&i| parent[i].is_none_or(|p| !self.nodes[p].bag.contains(&v)))
                .count();
            match tops {
                0 => return Err(format!("vertex {v} is in no bag")),
                1 => {}
                _ => return Err(format!("bags containing vertex {v} are not connected")),
            }
        }
        for (i, e) in g.edges().iter().enumerate() {
            if !self.nodes.iter().any(|n| e.incidence.iter().all(|v| n.bag.contains(v))) {
                return Err(format!("no bag covers edge {i}"));
            }
        }
        if sourced {
            if let Some(s) = g.sources().iter().find(|s| !self.nodes[self.root].bag.contains(s)) {
                return Err(format!("source vertex {s} is not in the root bag"));
            }
        }
        Ok(())
    }

    pub fn to_sexp(&self) -> Sexp {
        let num = |v: usize| Sexp::atom(v.to_string());
        // Root first, then the rest in index order, so ids are stable.
        let order: Vec<usize> = std::iter::once(self.root)
            .chain((0..self.nodes.len()).filter(|&i| i != self.root))
            .collect();
        let mut id = vec![0; self.nodes.len()];
        for (k, &i) in order.iter().enumerate() {
            id[i] = k;
        }
        Sexp::tagged(
            "tdec",
            order
                .iter()
                .map(|&i| {
                    let n = &self.nodes[i];
                    Sexp::tagged(
                        "node",
                        vec![
                            num(id[i]),
                            Sexp::tagged("bag", n.bag.iter().map(|&v| num(v)).collect()),
                            Sexp::tagged("children", n.children.iter().map(|&c| num(id[c])).collect()),
                        ],
                    )
                })
                .collect(),
        )
    }

    pub fn to_text(&self) -> String {
        self.to_sexp().to_pretty()
    }

    /// Parses `(tdec (node ID (bag v...) (children ID...)) ...)`. The root is
    /// the node that is nobody's child.
    pub fn from_sexp(s: &Sexp) -> Result<Self> {
        let items = s.expect_tagged("tdec")?;
        let mut ids: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, item) in items.iter().enumerate() {
            let parts = item.expect_tagged("node")?;
            let id = parts
                .first()
                .ok_or_else(|| item.pos().error("node needs an id"))?
                .as_atom()?;
            if ids.insert(id, i).is_some() {
                return Err(item.pos().error(format!("duplicate node `{id}`")));
            }
        }
        let mut nodes = Vec::new();
        for item in items {
            let parts = item.expect_tagged("node")?;
            let secs = crate::format::sections(&parts[1..], &["bag", "children"])?;
            let bag = match secs.get("bag") {
                Some((b, _)) => b.iter().map(|v| v.as_usize()).collect::<Result<BTreeSet<_>>>()?,
                None => BTreeSet::new(),
            };
            let mut children = Vec::new();
            if let Some((cs, _)) = secs.get("children") {
                for c in cs.iter() {
                    let name = c.as_atom()?;
                    children.push(
                        *ids.get(name)
                            .ok_or_else(|| c.pos().error(format!("unknown node `{name}`")))?,
                    );
                }
            }
            nodes.push(TdNode { bag, children });
        }
        let mut is_child = vec![false; nodes.len()];
        for n in &nodes {
            for &c in &n.children {
                is_child[c] = true;
            }
        }
        let roots: Vec<usize> = (0..nodes.len()).filter(|&i| !is_child[i]).collect();
        match roots.as_slice() {
            [r] => Ok(TreeDecomposition { nodes, root: *r }),
            _ => Err(s.pos().error(format!("expected exactly one root, found {}", roots.len()))),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_sexp(&sexp::parse_one(text)?)
    }
}

pub fn is_valid_decomposition<L: crate::Label>(g: &Hypergraph<L>, t: &TreeDecomposition, sourced: bool) -> bool {
    t.check(g, sourced).is_ok()
}

pub fn width(t: &TreeDecomposition) -> isize {
    t.width()
}

#[derive(Clone, Debug)]
pub struct Treewidth {
    pub width: isize,
    pub decomposition: TreeDecomposition,
}

/// Exact treewidth by dynamic programming over vertex subsets. With
/// `sourced`, the decomposition must have all sources in its root bag, which
/// is the same as treating the sources as a clique.
pub fn exact_treewidth<L: crate::Label>(g: &Hypergraph<L>, sourced: bool) -> Result<Treewidth> {
    let n = g.vertex_count();
    if n > EXACT_TREEWIDTH_LIMIT {
        return Err(Error::TooLarge(format!(
            "exact treewidth supports at most {EXACT_TREEWIDTH_LIMIT} vertices, got {n}"
        )));
    }
    let mut adj = vec![0u32; n];
    for (v, list) in g.primal_adjacency().into_iter().enumerate() {
        for w in list {
            adj[v] |= 1 << w;
        }
    }
    if sourced {
        for &s in g.sources() {
            for &t in g.sources() {
                if s != t {
                    adj[s] |= 1 << t;
                }
            }
        }
    }
    let order = best_elimination_order(&adj);
    let mut decomposition = decomposition_from_order(&adj, &order);
    if sourced && !g.sources().is_empty() {
        let holder = decomposition
            .nodes
            .iter()
            .position(|nd| g.sources().iter().all(|s| nd.bag.contains(s)))
            .expect("a clique lies inside some bag");
        decomposition = reroot(&decomposition, holder);
    }
    Ok(Treewidth {
        width: decomposition.width(),
        decomposition,
    })
}

/// Vertices outside `eliminated ∪ {v}` reachable from `v` through
/// `eliminated`: the neighbourhood of `v` once `eliminated` is gone.
fn q_set(adj: &[u32], eliminated: u32, v: usize) -> u32 {
    let mut visited = 1u32 << v;
    let mut frontier = 1u32 << v;
    let mut out = 0u32;
    while frontier != 0 {
        let x = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let nb = adj[x] & !visited;
        visited |= nb;
        out |= nb & !eliminated;
        frontier |= nb & eliminated;
    }
    out
}

fn best_elimination_order(adj: &[u32]) -> Vec<usize> {
    let n = adj.len();
    let full = (1u32 << n) - 1;
    // tw[s]: best width achievable eliminating exactly the set s first.
    let mut tw = vec![i32::MAX; 1 << n];
    let mut choice = vec![0u8; 1 << n];
    tw[0] = -1;
    for s in 1..=full {
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = s & !(1 << v);
            let cost = tw[prev as usize].max(q_set(adj, prev, v).count_ones() as i32);
            if cost < tw[s as usize] {
                tw[s as usize] = cost;
                choice[s as usize] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = choice[s as usize] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    order
}

/// Bag of `v` = `v` plus its neighbours at elimination time; the parent of a
/// bag is the bag of the earliest-eliminated of those neighbours.
fn decomposition_from_order(adj: &[u32], order: &[usize]) -> TreeDecomposition {
    let n = adj.len();
    if n == 0 {
        return TreeDecomposition::single([]);
    }
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut nodes = Vec::with_capacity(n);
    let mut parent = vec![None; n];
    let mut eliminated = 0u32;
    for &v in order {
        let q = q_set(adj, eliminated, v);
        let mut bag: BTreeSet<usize> = (0..n).filter(|&w| q & (1 << w) != 0).collect();
        parent[position[v]] = bag.iter().map(|&w| position[w]).min();
        bag.insert(v);
        nodes.push(TdNode {
            bag,
            children: Vec::new(),
        });
        eliminated |= 1 << v;
    }
    // Components end in parentless nodes; chain them under the last one.
    let root = n - 1;
    for i in 0..n {
        match parent[i] {
            Some(p) => nodes[p].children.push(i),
            None if i != root => nodes[root].children.push(i),
            None => {}
        }
    }
    TreeDecomposition { nodes, root }
}

fn reroot(t: &TreeDecomposition, new_root: usize) -> TreeDecomposition {
    let n = t.nodes.len();
    let mut nb = vec![Vec::new(); n];
    for (i, node) in t.nodes.iter().enumerate() {
        for &c in &node.children {
            nb[i].push(c);
            nb[c].push(i);
        }
    }
    let mut nodes: Vec<TdNode> = t
        .nodes
        .iter()
        .map(|nd| TdNode {
            bag: nd.bag.clone(),
            children: Vec::new(),
        })
        .collect();
    let mut seen = vec![false; n];
    let mut stack = vec![new_root];
    seen[new_root] = true;
    while let Some(x) = stack.pop() {
        for &y in &nb[x] {
            if !seen[y] {
                seen[y] = true;
                nodes[x].children.push(y);
                stack.push(y);
            }
        }
    }
    TreeDecomposition { nodes, root: new_root }
}

/// Replaces every hyperedge by a vertex with binary edges `c1`, `c2`, ...
/// pointing to its attachments. Sources are kept.
pub fn binarise(g: &Hypergraph<Symbol>) -> Hypergraph<Symbol> {
    let mut out = Hypergraph::sources_only(0);
    for _ in 0..g.vertex_count() {
        out.add_vertex();
    }
    for e in g.edges() {
        let x = out.add_vertex();
        for (i, &v) in e.incidence.iter().enumerate() {
            out.add_edge(Symbol::new(&format!("c{}", i + 1), 2), vec![x, v])
                .expect("colour edges are binary");
        }
    }
    out.set_sources(g.sources().to_vec()).expect("sources unchanged");
    out
}

/// Operation at a node of an algebraic tree decomposition.
#[derive(Clone, Debug)]
pub enum AlgebraicOp {
    /// A constant graph; only valid at leaves.
    Leaf(Hypergraph<Symbol>),
    /// A polynomial in one variable applied to the single child.
    Unary(PolynomialTerm<Hypergraph<Symbol>>),
    /// Parallel composition of two or more children of equal arity.
    Oplus,
}

#[derive(Clone, Debug)]
pub struct AlgebraicDecomposition {
    pub op: AlgebraicOp,
    pub children: Vec<AlgebraicDecomposition>,
}

impl AlgebraicDecomposition {
    pub fn leaf(g: Hypergraph<Symbol>) -> Self {
        AlgebraicDecomposition {
            op: AlgebraicOp::Leaf(g),
            children: Vec::new(),
        }
    }

    pub fn unary(p: PolynomialTerm<Hypergraph<Symbol>>, child: AlgebraicDecomposition) -> Self {
        AlgebraicDecomposition {
            op: AlgebraicOp::Unary(p),
            children: vec![child],
        }
    }

    pub fn oplus(children: Vec<AlgebraicDecomposition>) -> Self {
        AlgebraicDecomposition {
            op: AlgebraicOp::Oplus,
            children,
        }
    }
}

/// Value of an algebraic decomposition, or `None` when a node's operation
/// does not fit its children (wrong degree, arity or variable count).
pub fn eval_algebraic_decomposition(t: &AlgebraicDecomposition) -> Option<Hypergraph<Symbol>> {
    match (&t.op, t.children.as_slice()) {
        (AlgebraicOp::Leaf(g), []) => Some(g.clone()),
        (AlgebraicOp::Unary(p), [child]) => {
            let vars = p.variables().symbols();
            if vars.len() != 1 {
                return None;
            }
            let value = eval_algebraic_decomposition(child)?;
            if value.arity() != vars[0].arity() {
                return None;
            }
            let val: Valuation<_> = [(vars[0].name().to_string(), value)].into();
            p.eval(&val, &FreeAlgebra).ok()
        }
        (AlgebraicOp::Oplus, children) if children.len() >= 2 => {
            let mut acc = eval_algebraic_decomposition(&children[0])?;
            for c in &children[1..] {
                acc = acc.parallel(&eval_algebraic_decomposition(c)?).ok()?;
            }
            Some(acc)
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::TermLabel;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Hypergraph<Symbol> {
        let mut g = Hypergraph::sources_only(0);
        for _ in 0..n {
            g.add_vertex();
        }
        for &(a, b) in edges {
            g.add_edge(Symbol::new("e", 2), vec![a, b]).unwrap();
        }
        g
    }

    #[test]
    fn small_widths() {
        assert_eq!(exact_treewidth(&graph(0, &[]), false).unwrap().width, -1);
        assert_eq!(exact_treewidth(&graph(3, &[]), false).unwrap().width, 0);
        assert_eq!(exact_treewidth(&graph(4, &[(0, 1), (1, 2), (2, 3)]), false).unwrap().width, 1);
        let cycle = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(exact_treewidth(&cycle, false).unwrap().width, 2);
        let k4 = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(exact_treewidth(&k4, false).unwrap().width, 3);
    }

    #[test]
    fn sourced_variant() {
        let mut g = graph(3, &[]);
        g.set_sources(vec![0, 2]).unwrap();
        let tw = exact_treewidth(&g, true).unwrap();
        assert_eq!(tw.width, 1);
        tw.decomposition.check(&g, true).unwrap();
        assert_eq!(exact_treewidth(&g, false).unwrap().width, 0);
    }

    #[test]
    fn too_large() {
        assert!(matches!(exact_treewidth(&graph(11, &[]), false), Err(Error::TooLarge(_))));
    }

    #[test]
    fn invalid_decompositions() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let mut t = TreeDecomposition {
            nodes: vec![
                TdNode {
                    bag: [0, 1].into(),
                    children: vec![1],
                },
                TdNode {
                    bag: [1, 2].into(),
                    children: vec![],
                },
            ],
            root: 0,
        };
        t.check(&g, false).unwrap();
        t.nodes[1].bag = [2].into();
        assert!(t.check(&g, false).unwrap_err().contains("no bag covers edge 1"));
        t.nodes[1].bag = [0, 1, 2].into();
        t.nodes.push(TdNode {
            bag: [0].into(),
            children: vec![],
        });
        t.nodes[0].children.push(2);
        t.nodes[0].bag = [1].into();
        assert!(t.check(&g, false).unwrap_err().contains("not connected"));
    }

    #[test]
    fn tdec_roundtrip() {
        let g = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let t = exact_treewidth(&g, false).unwrap().decomposition;
        let text = t.to_text();
        let back = TreeDecomposition::parse(&text).unwrap();
        assert_eq!(back.to_text(), text);
        back.check(&g, false).unwrap();
    }

    #[test]
    fn binarise_shape() {
        let mut g = Hypergraph::sources_only(3);
        g.add_edge(Symbol::new("t", 3), vec![0, 1, 2]).unwrap();
        let b = binarise(&g);
        assert_eq!(b.vertex_count(), 4);
        assert_eq!(b.edges().len(), 3);
        assert_eq!(b.sources(), &[0, 1, 2]);
        assert!(b.edges().iter().all(|e| e.incidence[0] == 3));
    }

    #[test]
    fn algebraic_undefined_cases() {
        let u = Hypergraph::unit(Symbol::new("e", 2));
        assert!(eval_algebraic_decomposition(&AlgebraicDecomposition::oplus(vec![
            AlgebraicDecomposition::leaf(u.clone()),
            AlgebraicDecomposition::leaf(u.clone()),
        ]))
        .is_some());
        // Mismatched arities under a parallel node.
        assert!(eval_algebraic_decomposition(&AlgebraicDecomposition::oplus(vec![
            AlgebraicDecomposition::leaf(u.clone()),
            AlgebraicDecomposition::leaf(Hypergraph::sources_only(1)),
        ]))
        .is_none());
        // A leaf operation with a child.
        let bad = AlgebraicDecomposition {
            op: AlgebraicOp::Leaf(u.clone()),
            children: vec![AlgebraicDecomposition::leaf(u.clone())],
        };
        assert!(eval_algebraic_decomposition(&bad).is_none());
        // Forget the second source of the child.
        let mut body = Hypergraph::sources_only(2);
        body.add_edge(TermLabel::Var(Symbol::new("x", 2)), vec![0, 1]).unwrap();
        let p = PolynomialTerm::from_body(body.forget_sources(&[0]).unwrap()).unwrap();
        let t = AlgebraicDecomposition::unary(p, AlgebraicDecomposition::leaf(u));
        assert_eq!(eval_algebraic_decomposition(&t).unwrap().arity(), 1);
    }
}
