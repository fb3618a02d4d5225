//! Vertex-replacement hypergraphs and the monad they form.
//!
//! A [`VHypergraph`] has hypervertices, each with a label of positive arity
//! and that many *corners*; a binary edge relation on corners; and a port
//! function from corners to `0..arity`. Flattening replaces every
//! hypervertex by its label graph: corner ports of the inner graph name
//! corners of the outer hypervertex, and outer edges are copied to every
//! pair of inner corners sitting on the connected outer corners.
//!
//! Corner indices and ports are zero-based in the API and one-based in the
//! `(vgraph ...)` file format.

use crate::canon::{self, Canonical, Structure};
use crate::error::{Error, Result};
use crate::hypergraph::Label;
use crate::ranked::{Ranked, Symbol};
use crate::sexp::{self, Sexp};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::{self, Write as _};

/// A corner: hypervertex and index within it.
pub type Corner = (usize, usize);

#[derive(Clone)]
pub struct VHypergraph<L> {
    arity: usize,
    labels: Vec<L>,
    ports: Vec<Vec<usize>>,
    edges: BTreeSet<(Corner, Corner)>,
}

impl<L: Label> VHypergraph<L> {
    pub fn new(
        arity: usize,
        labels: Vec<L>,
        ports: Vec<Vec<usize>>,
        edges: impl IntoIterator<Item = (Corner, Corner)>,
    ) -> Result<Self> {
        let g = VHypergraph {
            arity,
            labels,
            ports,
            edges: edges.into_iter().collect(),
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if self.arity == 0 {
            return Err(Error::ZeroArity("graph".into()));
        }
        if self.labels.is_empty() {
            return Err(Error::InvalidGraph("a vertex-replacement graph needs a hypervertex".into()));
        }
        if self.ports.len() != self.labels.len() {
            return Err(Error::InvalidGraph("one port list per hypervertex".into()));
        }
        for (v, (l, ps)) in self.labels.iter().zip(&self.ports).enumerate() {
            if l.arity() == 0 {
                return Err(Error::ZeroArity(format!("{l:?}")));
            }
            if ps.len() != l.arity() {
                return Err(Error::ArityMismatch(format!(
                    "hypervertex {v} has {} corners but {} ports",
                    l.arity(),
                    ps.len()
                )));
            }
            if let Some(p) = ps.iter().find(|&&p| p >= self.arity) {
                return Err(Error::RangeError(format!("port {p} of hypervertex {v} exceeds arity {}", self.arity)));
            }
        }
        for &(a, b) in &self.edges {
            for (v, i) in [a, b] {
                if v >= self.labels.len() || i >= self.labels[v].arity() {
                    return Err(Error::RangeError(format!("corner ({v}, {i}) does not exist")));
                }
            }
        }
        Ok(())
    }

    /// One hypervertex labelled `label` whose `i`-th corner has port `i`.
    pub fn unit(label: L) -> Result<Self> {
        let n = label.arity();
        if n == 0 {
            return Err(Error::ZeroArity(format!("{label:?}")));
        }
        Ok(VHypergraph {
            arity: n,
            labels: vec![label],
            ports: vec![(0..n).collect()],
            edges: BTreeSet::new(),
        })
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn ports(&self) -> &[Vec<usize>] {
        &self.ports
    }

    pub fn edges(&self) -> &BTreeSet<(Corner, Corner)> {
        &self.edges
    }

    pub fn hypervertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn corners(&self) -> impl Iterator<Item = Corner> + '_ {
        self.labels
            .iter()
            .enumerate()
            .flat_map(|(v, l)| (0..l.arity()).map(move |i| (v, i)))
    }

    pub fn port(&self, c: Corner) -> usize {
        self.ports[c.0][c.1]
    }

    pub fn try_map_labels<M: Label>(&self, mut f: impl FnMut(&L) -> Result<M>) -> Result<VHypergraph<M>> {
        let mut labels = Vec::with_capacity(self.labels.len());
        for l in &self.labels {
            let m = f(l)?;
            if m.arity() != l.arity() {
                return Err(Error::ArityMismatch(format!("{l:?} replaced by {m:?}")));
            }
            labels.push(m);
        }
        Ok(VHypergraph {
            arity: self.arity,
            labels,
            ports: self.ports.clone(),
            edges: self.edges.clone(),
        })
    }

    pub fn map_labels<M: Label>(&self, mut f: impl FnMut(&L) -> M) -> Result<VHypergraph<M>> {
        self.try_map_labels(|l| Ok(f(l)))
    }

    pub fn to_structure(&self) -> Structure {
        let mut st = Structure::new(self.labels.iter().map(|l| l.key()).collect());
        for (v, ps) in self.ports.iter().enumerate() {
            for (i, p) in ps.iter().enumerate() {
                st.push(format!("p{i}:{p}"), vec![v]);
            }
        }
        for &((v, i), (w, j)) in &self.edges {
            st.push(format!("e{i}>{j}"), vec![v, w]);
        }
        st
    }

    pub fn canonical(&self) -> Canonical {
        let mut c = canon::canonicalize(&self.to_structure());
        c.code = format!("{}|{}", self.arity, c.code);
        c
    }

    pub fn canonical_code(&self) -> String {
        self.canonical().code
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.arity == other.arity
            && self.labels.len() == other.labels.len()
            && self.edges.len() == other.edges.len()
            && canon::isomorphism(&self.to_structure(), &other.to_structure()).is_some()
    }

    /// Disjoint union; the arity is the larger of the two.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let off = self.labels.len();
        let mut out = self.clone();
        out.arity = self.arity.max(other.arity);
        out.labels.extend(other.labels.iter().cloned());
        out.ports.extend(other.ports.iter().cloned());
        out.edges
            .extend(other.edges.iter().map(|&((v, i), (w, j))| ((v + off, i), (w + off, j))));
        out
    }

    /// Moves every port `p` to `f[p]`; the result has arity `m`.
    pub fn relabel_ports(&self, f: &[usize], m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroArity("relabelled graph".into()));
        }
        if f.len() != self.arity {
            return Err(Error::ArityMismatch(format!("port map has {} entries, arity is {}", f.len(), self.arity)));
        }
        if let Some(p) = f.iter().find(|&&p| p >= m) {
            return Err(Error::RangeError(format!("port {p} exceeds new arity {m}")));
        }
        let mut out = self.clone();
        out.arity = m;
        for ps in &mut out.ports {
            for p in ps.iter_mut() {
                *p = f[*p];
            }
        }
        Ok(out)
    }

    /// Adds an edge from every corner on port `i` to every corner on port
    /// `j`, for each `(i, j)` in `pairs`.
    pub fn add_edges(&self, pairs: &[(usize, usize)], mode: SamePortEdges) -> Result<Self> {
        let mut out = self.clone();
        for &(i, j) in pairs {
            if i >= self.arity || j >= self.arity {
                return Err(Error::RangeError(format!("port pair ({i}, {j}) exceeds arity {}", self.arity)));
            }
            if i == j && mode == SamePortEdges::Forbidden {
                return Err(Error::RangeError(format!("port pair ({i}, {i}) is not allowed")));
            }
            let from: Vec<Corner> = self.corners().filter(|&c| self.port(c) == i).collect();
            let to: Vec<Corner> = self.corners().filter(|&c| self.port(c) == j).collect();
            for &c in &from {
                for &d in &to {
                    if c != d || mode == SamePortEdges::AllPairs {
                        out.edges.insert((c, d));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// How `add_edges` treats a pair `(i, i)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SamePortEdges {
    /// Edges between distinct corners on port `i`; no loop on a corner.
    #[default]
    DistinctCorners,
    /// Every pair, loops included. This is what the polynomial form of the
    /// operation computes.
    AllPairs,
    /// Reject the pair.
    Forbidden,
}

impl<L> Ranked for VHypergraph<L> {
    fn arity(&self) -> usize {
        self.arity
    }
}

impl<L: Label> Label for VHypergraph<L> {
    fn key(&self) -> String {
        format!("V[{}]", self.canonical_code())
    }
}

impl<L: fmt::Debug> fmt::Debug for VHypergraph<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VHypergraph(arity={}, hv=[", self.arity)?;
        for (v, (l, ps)) in self.labels.iter().zip(&self.ports).enumerate() {
            if v > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l:?}{ps:?}")?;
        }
        write!(f, "], edges={:?})", self.edges)
    }
}

impl<L: Label> VHypergraph<VHypergraph<L>> {
    pub fn flatten(&self) -> VHypergraph<L> {
        let mut id: Vec<Vec<usize>> = Vec::new();
        let mut labels = Vec::new();
        let mut ports = Vec::new();
        for (v, inner) in self.labels.iter().enumerate() {
            let mut ids = Vec::new();
            for (w, l) in inner.labels.iter().enumerate() {
                ids.push(labels.len());
                labels.push(l.clone());
                ports.push(inner.ports[w].iter().map(|&j| self.ports[v][j]).collect());
            }
            id.push(ids);
        }
        let mut edges = BTreeSet::new();
        for (v, inner) in self.labels.iter().enumerate() {
            for &((w, i), (w2, i2)) in &inner.edges {
                edges.insert(((id[v][w], i), (id[v][w2], i2)));
            }
        }
        for &((v, j), (v2, j2)) in &self.edges {
            let from: Vec<Corner> = self.labels[v].corners().filter(|&c| self.labels[v].port(c) == j).collect();
            let to: Vec<Corner> = self.labels[v2].corners().filter(|&c| self.labels[v2].port(c) == j2).collect();
            for &(w, i) in &from {
                for &(w2, i2) in &to {
                    edges.insert(((id[v][w], i), (id[v2][w2], i2)));
                }
            }
        }
        VHypergraph {
            arity: self.arity,
            labels,
            ports,
            edges,
        }
    }
}

/// Substitutes a value for every (variable-labelled) hypervertex of `body`
/// and flattens.
pub fn v_eval_term<L: Label>(body: &VHypergraph<Symbol>, valuation: &BTreeMap<String, VHypergraph<L>>) -> Result<VHypergraph<L>> {
    let g = body.try_map_labels(|x| {
        valuation
            .get(x.name())
            .cloned()
            .ok_or_else(|| Error::MissingVariable(x.name().to_string()))
    })?;
    Ok(g.flatten())
}

/// A term over the vertex-replacement operations.
#[derive(Clone, Debug)]
pub enum VrTerm<L> {
    Unit(L),
    Union(Box<VrTerm<L>>, Box<VrTerm<L>>),
    Relabel { map: Vec<usize>, arity: usize, inner: Box<VrTerm<L>> },
    AddEdges { pairs: Vec<(usize, usize)>, inner: Box<VrTerm<L>> },
}

pub fn eval_vr_term<L: Label>(t: &VrTerm<L>, mode: SamePortEdges) -> Result<VHypergraph<L>> {
    match t {
        VrTerm::Unit(l) => VHypergraph::unit(l.clone()),
        VrTerm::Union(a, b) => Ok(eval_vr_term(a, mode)?.disjoint_union(&eval_vr_term(b, mode)?)),
        VrTerm::Relabel { map, arity, inner } => eval_vr_term(inner, mode)?.relabel_ports(map, *arity),
        VrTerm::AddEdges { pairs, inner } => eval_vr_term(inner, mode)?.add_edges(pairs, mode),
    }
}

fn var(name: &str, arity: usize) -> Symbol {
    Symbol::new(name, arity)
}

/// `x ⊔ y` as a term body over variables `x` and `y`.
pub fn union_term(n1: usize, n2: usize) -> VHypergraph<Symbol> {
    VHypergraph::new(
        n1.max(n2),
        vec![var("x", n1), var("y", n2)],
        vec![(0..n1).collect(), (0..n2).collect()],
        [],
    )
    .expect("well-formed union term")
}

pub fn relabel_term(n: usize, f: &[usize], m: usize) -> Result<VHypergraph<Symbol>> {
    VHypergraph::new(m, vec![var("x", n)], vec![f.to_vec()], [])
}

/// The polynomial form of `add_edges`: a loop on an outer corner becomes
/// every pair of inner corners on that port, loops included.
pub fn add_edges_term(n: usize, pairs: &[(usize, usize)]) -> Result<VHypergraph<Symbol>> {
    VHypergraph::new(
        n,
        vec![var("x", n)],
        vec![(0..n).collect()],
        pairs.iter().map(|&(i, j)| ((0, i), (0, j))),
    )
}

/// Evaluates a VR term by translating every operation to its term body and
/// flattening. Agrees with [`eval_vr_term`] in [`SamePortEdges::AllPairs`]
/// mode.
pub fn eval_vr_term_by_substitution<L: Label>(t: &VrTerm<L>) -> Result<VHypergraph<L>> {
    let one = |name: &str, g: VHypergraph<L>| -> BTreeMap<String, VHypergraph<L>> { [(name.to_string(), g)].into() };
    match t {
        VrTerm::Unit(l) => VHypergraph::unit(l.clone()),
        VrTerm::Union(a, b) => {
            let (a, b) = (eval_vr_term_by_substitution(a)?, eval_vr_term_by_substitution(b)?);
            let mut val = one("x", a.clone());
            val.insert("y".into(), b.clone());
            v_eval_term(&union_term(a.arity(), b.arity()), &val)
        }
        VrTerm::Relabel { map, arity, inner } => {
            let g = eval_vr_term_by_substitution(inner)?;
            if map.len() != g.arity() {
                return Err(Error::ArityMismatch("port map length".into()));
            }
            v_eval_term(&relabel_term(g.arity(), map, *arity)?, &one("x", g))
        }
        VrTerm::AddEdges { pairs, inner } => {
            let g = eval_vr_term_by_substitution(inner)?;
            v_eval_term(&add_edges_term(g.arity(), pairs)?, &one("x", g))
        }
    }
}

/// Largest hypervertex count accepted by [`cliquewidth_upper`].
pub const CLIQUEWIDTH_LIMIT: usize = 6;

#[derive(Clone, PartialEq, Eq, Hash)]
struct CwState {
    members: u32,
    /// Port of every corner (by global corner index); `u8::MAX` if absent.
    ports: Vec<u8>,
    edges: u64,
}

/// Whether `g` is the value of a VR term using only arities up to `n`.
/// Exhaustive over partial constructions of `g` itself, so it is exact.
pub fn cliquewidth_upper<L: Label>(g: &VHypergraph<L>, n: usize, mode: SamePortEdges) -> Result<bool> {
    let hv = g.hypervertex_count();
    if hv > CLIQUEWIDTH_LIMIT {
        return Err(Error::TooLarge(format!("cliquewidth search supports at most {CLIQUEWIDTH_LIMIT} hypervertices")));
    }
    if g.edges.len() > 64 {
        return Err(Error::TooLarge("cliquewidth search supports at most 64 edges".into()));
    }
    if n == 0 || g.arity() > n {
        return Ok(false);
    }
    let corners: Vec<Corner> = g.corners().collect();
    let cidx: HashMap<Corner, usize> = corners.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let edge_list: Vec<(usize, usize)> = g.edges.iter().map(|(a, b)| (cidx[a], cidx[b])).collect();
    let edge_index: HashMap<(usize, usize), usize> = edge_list.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let all_edges: u64 = if edge_list.len() == 64 { u64::MAX } else { (1u64 << edge_list.len()) - 1 };
    let full: u32 = (1 << hv) - 1;
    let ctx = CwContext {
        n,
        mode,
        corner_count: corners.len(),
        edge_index,
    };

    let mut seen: HashSet<CwState> = HashSet::new();
    let mut by_members: HashMap<u32, Vec<CwState>> = HashMap::new();
    let mut queue: Vec<CwState> = Vec::new();
    for v in 0..hv {
        let k = g.labels[v].arity();
        if k > n {
            continue;
        }
        let mut ports = vec![u8::MAX; corners.len()];
        for i in 0..k {
            ports[cidx[&(v, i)]] = i as u8;
        }
        ctx.push(
            CwState {
                members: 1 << v,
                ports,
                edges: 0,
            },
            &mut seen,
            &mut queue,
        );
    }
    while let Some(state) = queue.pop() {
        if state.members == full && state.edges == all_edges && refines(&state, &corners, g) {
            return Ok(true);
        }
        if !ctx.alive(&state) {
            continue;
        }
        let mut next = Vec::new();
        let used = port_count(&state);
        for merged in merges(used) {
            next.push(normalize(CwState {
                ports: state.ports.iter().map(|&p| if p == u8::MAX { p } else { merged[p as usize] }).collect(),
                ..state.clone()
            }));
        }
        for i in 0..used {
            for j in 0..used {
                if let Some(s) = ctx.add_pair(&state, i as u8, j as u8) {
                    next.push(s);
                }
            }
        }
        for (&mask, others) in &by_members {
            if mask & state.members != 0 {
                continue;
            }
            for other in others {
                next.extend(ctx.unions(&state, other));
            }
        }
        by_members.entry(state.members).or_default().push(state);
        for s in next {
            ctx.push(s, &mut seen, &mut queue);
        }
    }
    Ok(false)
}

struct CwContext {
    n: usize,
    mode: SamePortEdges,
    corner_count: usize,
    edge_index: HashMap<(usize, usize), usize>,
}

impl CwContext {
    fn push(&self, s: CwState, seen: &mut HashSet<CwState>, queue: &mut Vec<CwState>) {
        let s = normalize(s);
        if port_count(&s) <= self.n && seen.insert(s.clone()) {
            queue.push(s);
        }
    }

    /// Edges added by the port pair `(i, j)`, or `None` if one of them is not
    /// an edge of the target.
    fn pair_edges(&self, s: &CwState, i: u8, j: u8) -> Option<u64> {
        if i == j && self.mode == SamePortEdges::Forbidden {
            return None;
        }
        let mut bits = 0u64;
        for c in 0..self.corner_count {
            if s.ports[c] != i {
                continue;
            }
            for d in 0..self.corner_count {
                if s.ports[d] != j || (c == d && self.mode != SamePortEdges::AllPairs) {
                    continue;
                }
                bits |= 1 << self.edge_index.get(&(c, d))?;
            }
        }
        Some(bits)
    }

    fn add_pair(&self, s: &CwState, i: u8, j: u8) -> Option<CwState> {
        let bits = self.pair_edges(s, i, j)?;
        (bits & !s.edges != 0).then(|| CwState {
            edges: s.edges | bits,
            ..s.clone()
        })
    }

    /// A missing target edge between present corners can only be added by
    /// its current port pair, since ports never split again.
    fn alive(&self, s: &CwState) -> bool {
        for (&(c, d), &e) in &self.edge_index {
            if s.edges & (1 << e) == 0 && s.ports[c] != u8::MAX && s.ports[d] != u8::MAX {
                if self.pair_edges(s, s.ports[c], s.ports[d]).is_none() {
                    return false;
                }
            }
        }
        true
    }

    /// Disjoint unions of `a` and `b`, identifying any partial matching of
    /// their ports so that at most `n` ports remain.
    fn unions(&self, a: &CwState, b: &CwState) -> Vec<CwState> {
        let (ka, kb) = (port_count(a), port_count(b));
        let mut out = Vec::new();
        let mut assign = vec![u8::MAX; kb];
        matchings(ka, kb, 0, &mut assign, &mut |assign| {
            let mut next_port = ka as u8;
            let mut map = assign.to_vec();
            for m in map.iter_mut() {
                if *m == u8::MAX {
                    *m = next_port;
                    next_port += 1;
                }
            }
            if next_port as usize > self.n {
                return;
            }
            let ports = a
                .ports
                .iter()
                .zip(&b.ports)
                .map(|(&p, &q)| if p != u8::MAX { p } else if q != u8::MAX { map[q as usize] } else { u8::MAX })
                .collect();
            out.push(CwState {
                members: a.members | b.members,
                ports,
                edges: a.edges | b.edges,
            });
        });
        out
    }
}

/// Calls `f` for every partial injective assignment of `kb` ports to `ka`
/// ports (`u8::MAX` = unmatched).
fn matchings(ka: usize, kb: usize, i: usize, assign: &mut Vec<u8>, f: &mut dyn FnMut(&[u8])) {
    if i == kb {
        f(assign);
        return;
    }
    assign[i] = u8::MAX;
    matchings(ka, kb, i + 1, assign, f);
    for p in 0..ka as u8 {
        if !assign[..i].contains(&p) {
            assign[i] = p;
            matchings(ka, kb, i + 1, assign, f);
        }
    }
    assign[i] = u8::MAX;
}

fn port_count(s: &CwState) -> usize {
    s.ports.iter().filter(|&&p| p != u8::MAX).map(|&p| p as usize + 1).max().unwrap_or(0)
}

/// Renames ports in order of first appearance.
fn normalize(mut s: CwState) -> CwState {
    let mut rename = [u8::MAX; 256];
    let mut next = 0u8;
    for p in s.ports.iter_mut() {
        if *p == u8::MAX {
            continue;
        }
        if rename[*p as usize] == u8::MAX {
            rename[*p as usize] = next;
            next += 1;
        }
        *p = rename[*p as usize];
    }
    s
}

/// Every non-identity way to merge `k` ports, as a map to block indices.
fn merges(k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(k: usize, cur: &mut Vec<u8>, blocks: u8, out: &mut Vec<Vec<u8>>) {
        if cur.len() == k {
            if (blocks as usize) < k {
                out.push(cur.clone());
            }
            return;
        }
        for b in 0..=blocks {
            cur.push(b);
            go(k, cur, blocks.max(b + 1), out);
            cur.pop();
        }
    }
    go(k, &mut cur, 0, &mut out);
    out
}

/// Corners sharing a state port must share a target port.
fn refines<L: Label>(s: &CwState, corners: &[Corner], g: &VHypergraph<L>) -> bool {
    let mut target: HashMap<u8, usize> = HashMap::new();
    corners
        .iter()
        .enumerate()
        .all(|(i, &c)| *target.entry(s.ports[i]).or_insert(g.port(c)) == g.port(c))
}

/// Smallest `n ≤ max` for which [`cliquewidth_upper`] holds.
pub fn cliquewidth<L: Label>(g: &VHypergraph<L>, max: usize, mode: SamePortEdges) -> Result<Option<usize>> {
    for n in 1..=max {
        if cliquewidth_upper(g, n, mode)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// A directed graph as a vertex-replacement graph of arity one: every vertex
/// is a unary hypervertex labelled `v` on port 0.
pub fn directed_graph(vertices: usize, edges: &[(usize, usize)]) -> Result<VHypergraph<Symbol>> {
    VHypergraph::new(
        1,
        vec![Symbol::new("v", 1); vertices],
        vec![vec![0]; vertices],
        edges.iter().map(|&(a, b)| ((a, 0), (b, 0))),
    )
}

impl VHypergraph<Symbol> {
    pub fn to_sexp(&self) -> Sexp {
        let num = |v: usize| Sexp::atom(v.to_string());
        let hv = self
            .labels
            .iter()
            .enumerate()
            .map(|(v, l)| Sexp::list(vec![num(v), Sexp::atom(l.name()), num(l.arity())]))
            .collect();
        let ports = self
            .corners()
            .map(|(v, i)| Sexp::list(vec![num(v), num(i + 1), num(self.port((v, i)) + 1)]))
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|&((v, i), (w, j))| Sexp::list(vec![Sexp::list(vec![num(v), num(i + 1)]), Sexp::list(vec![num(w), num(j + 1)])]))
            .collect();
        Sexp::tagged(
            "vgraph",
            vec![
                Sexp::tagged("arity", vec![num(self.arity)]),
                Sexp::tagged("hypervertices", hv),
                Sexp::tagged("ports", ports),
                Sexp::tagged("edges", edges),
            ],
        )
    }

    pub fn to_text(&self) -> String {
        self.to_sexp().to_pretty()
    }

    pub fn from_sexp(s: &Sexp) -> Result<Self> {
        let secs = crate::format::sections(s.expect_tagged("vgraph")?, &["arity", "hypervertices", "ports", "edges"])?;
        let arity = match secs.get("arity") {
            Some(([x], _)) => x.as_usize()?,
            _ => return Err(s.pos().error("expected `(arity N)`")),
        };
        let mut ids: BTreeMap<String, usize> = BTreeMap::new();
        let mut labels = Vec::new();
        if let Some((body, _)) = secs.get("hypervertices") {
            for item in body.iter() {
                let [id, label, k] = item.as_list()? else {
                    return Err(item.pos().error("expected `(ID LABEL ARITY)`"));
                };
                let name = id.as_atom()?.to_string();
                if ids.insert(name.clone(), labels.len()).is_some() {
                    return Err(id.pos().error(format!("duplicate hypervertex `{name}`")));
                }
                let k = k.as_usize()?;
                if k == 0 {
                    return Err(item.pos().error("hypervertex arity must be positive"));
                }
                labels.push(Symbol::new(label.as_atom()?, k));
            }
        }
        let corner = |v: &Sexp, i: &Sexp| -> Result<Corner> {
            let name = v.as_atom()?;
            let v_idx = *ids.get(name).ok_or_else(|| v.pos().error(format!("unknown hypervertex `{name}`")))?;
            let i_val = i.as_usize()?;
            if i_val == 0 || i_val > labels[v_idx].arity() {
                return Err(i.pos().error(format!("`{name}` has no corner {i_val}")));
            }
            Ok((v_idx, i_val - 1))
        };
        let mut ports: Vec<Vec<Option<usize>>> = labels.iter().map(|l| vec![None; l.arity()]).collect();
        if let Some((body, _)) = secs.get("ports") {
            for item in body.iter() {
                let [v, i, p] = item.as_list()? else {
                    return Err(item.pos().error("expected `(ID INDEX PORT)`"));
                };
                let (v_idx, i_idx) = corner(v, i)?;
                let port = p.as_usize()?;
                if port == 0 || port > arity {
                    return Err(p.pos().error(format!("port {port} outside 1..{arity}")));
                }
                if ports[v_idx][i_idx].replace(port - 1).is_some() {
                    return Err(item.pos().error("corner given two ports"));
                }
            }
        }
        let ports = ports
            .into_iter()
            .enumerate()
            .map(|(v, ps)| {
                ps.into_iter()
                    .enumerate()
                    .map(|(i, p)| p.ok_or_else(|| s.pos().error(format!("corner {} of hypervertex {v} has no port", i + 1))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut edges = Vec::new();
        if let Some((body, _)) = secs.get("edges") {
            for item in body.iter() {
                let [a, b] = item.as_list()? else {
                    return Err(item.pos().error("expected `((ID INDEX) (ID INDEX))`"));
                };
                let pair = |x: &Sexp| -> Result<Corner> {
                    match x.as_list()? {
                        [v, i] => corner(v, i),
                        _ => Err(x.pos().error("expected `(ID INDEX)`")),
                    }
                };
                edges.push((pair(a)?, pair(b)?));
            }
        }
        VHypergraph::new(arity, labels, ports, edges).map_err(|e| s.pos().error(e.to_string()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_sexp(&sexp::parse_one(text)?)
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{name}\" {{\n  node [shape=record];");
        for (v, l) in self.labels.iter().enumerate() {
            let fields: Vec<String> = (0..l.arity())
                .map(|i| format!("<c{i}> {}:p{}", i + 1, self.ports[v][i] + 1))
                .collect();
            let _ = writeln!(out, "  h{v} [label=\"{} | {}\"];", l.name(), fields.join(" | "));
        }
        for &((v, i), (w, j)) in &self.edges {
            let _ = writeln!(out, "  h{v}:c{i} -> h{w}:c{j};");
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clique(n: usize) -> VHypergraph<Symbol> {
        let mut e = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    e.push((a, b));
                }
            }
        }
        directed_graph(n, &e).unwrap()
    }

    #[test]
    fn zero_arity_rejected() {
        assert!(matches!(VHypergraph::unit(Symbol::new("c", 0)), Err(Error::ZeroArity(_))));
    }

    #[test]
    fn unit_ports() {
        let u = VHypergraph::unit(Symbol::new("t", 3)).unwrap();
        assert_eq!(u.ports()[0], vec![0, 1, 2]);
        assert_eq!(u.arity(), 3);
    }

    #[test]
    fn clique_width_one() {
        let k4 = clique(4);
        assert!(cliquewidth_upper(&k4, 1, SamePortEdges::DistinctCorners).unwrap());
        assert!(!cliquewidth_upper(&k4, 1, SamePortEdges::AllPairs).unwrap());
    }

    #[test]
    fn directed_path() {
        let p = directed_graph(3, &[(0, 1), (1, 2)]).unwrap();
        let m = SamePortEdges::DistinctCorners;
        assert!(!cliquewidth_upper(&p, 1, m).unwrap());
        assert!(!cliquewidth_upper(&p, 2, m).unwrap());
        assert!(cliquewidth_upper(&p, 3, m).unwrap());
        assert_eq!(cliquewidth(&p, 4, m).unwrap(), Some(3));
    }

    #[test]
    fn edgeless_graph_width_one() {
        let g = directed_graph(5, &[]).unwrap();
        assert!(cliquewidth_upper(&g, 1, SamePortEdges::default()).unwrap());
    }

    #[test]
    fn vr_term_matches_picture() {
        // Three unary vertices on ports 0, 1, 2 with edges 0→1, 1→2, 0→2.
        let unit = |p: usize| VrTerm::Relabel {
            map: vec![p],
            arity: 3,
            inner: Box::new(VrTerm::Unit(Symbol::new("v", 1))),
        };
        let t = VrTerm::AddEdges {
            pairs: vec![(0, 1), (1, 2), (0, 2)],
            inner: Box::new(VrTerm::Union(Box::new(unit(0)), Box::new(VrTerm::Union(Box::new(unit(1)), Box::new(unit(2)))))),
        };
        let g = eval_vr_term(&t, SamePortEdges::default()).unwrap();
        assert_eq!(g.edges().len(), 3);
        assert!(g.is_isomorphic(&eval_vr_term_by_substitution(&t).unwrap()));
    }

    #[test]
    fn vgraph_roundtrip() {
        let text = "(vgraph\n  (arity 2)\n  (hypervertices\n    (0 v 1)\n    (1 w 2))\n  (ports\n    (0 1 1)\n    (1 1 2)\n    (1 2 2))\n  (edges\n    ((0 1) (1 2))\n    ((1 1) (1 2))))\n";
        let g = VHypergraph::parse(text).unwrap();
        assert_eq!(g.to_text(), text);
        let missing = "(vgraph (arity 1) (hypervertices (0 v 1)))";
        assert!(matches!(VHypergraph::parse(missing), Err(Error::Parse { .. })));
    }
}
