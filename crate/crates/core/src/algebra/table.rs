//! Algebras given by finite tables, and their file format.
//!
//! A table algebra stores, for every arity up to its cap, the universe, the
//! edgeless element, `⊕`, adding an isolated source, dropping the last
//! source and swapping adjacent sources. These operations generate every
//! product: a graph is built edge by edge with its visited vertices as the
//! current sources, so a graph with `k` vertices needs arities up to `k`.
//!
//! ```text
//! (algebra
//!   (name mod2)
//!   (arity-cap 1)
//!   (universe (0 r0 r1) (1 r0 r1))
//!   (empty (0 r0) (1 r0))
//!   (oplus (0 r0 r0 r0) (0 r0 r1 r1) ...)
//!   (add-source (0 r0 r0) (0 r1 r1))
//!   (drop-last (1 r0 r0) (1 r1 r1))
//!   (swap (2 1 x y) ...)
//!   (symbols (a 0 r1) (b 1 r0))
//!   (accept r0))
//! ```
//!
//! Table entries are `(ARITY ARGS... RESULT)`; swap entries are
//! `(ARITY POSITION ARG RESULT)` with positions counted from 1.

use super::{
    add_source, check_input, drop_last, elements, empty_element, oplus, swap, Elem, FiniteAlgebra, Homomorphism,
    Language, Recogniser, SharedAlgebra,
};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::ranked::{Ranked, RankedAlphabet, Symbol};
use crate::sexp::{self, Pos, Sexp};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct TableAlgebra {
    name: String,
    cap: usize,
    names: Vec<Vec<String>>,
    empty: Vec<usize>,
    oplus: Vec<Vec<usize>>,
    add_source: Vec<Vec<usize>>,
    drop_last: Vec<Vec<usize>>,
    swap: Vec<Vec<Vec<usize>>>,
}

impl TableAlgebra {
    pub fn element_name(&self, e: Elem) -> &str {
        &self.names[e.arity][e.index]
    }

    pub fn element(&self, arity: usize, name: &str) -> Option<Elem> {
        let names = self.names.get(arity)?;
        names.iter().position(|n| n == name).map(|i| Elem::new(arity, i))
    }

    fn add(&self, n: usize, x: usize) -> Result<usize> {
        if n >= self.cap {
            return Err(Error::ArityCap { arity: n + 1, cap: self.cap });
        }
        Ok(self.add_source[n][x])
    }

    /// Reorders the sources of `x` (currently the vertices `cur`) into the
    /// order of `target` by adjacent swaps.
    fn permute(&self, n: usize, mut x: usize, cur: &mut [usize], target: &[usize]) -> usize {
        let pos: HashMap<usize, usize> = target.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        for pass in 0..n {
            for i in 0..n.saturating_sub(1 + pass) {
                if pos[&cur[i]] > pos[&cur[i + 1]] {
                    cur.swap(i, i + 1);
                    x = self.swap[n][i][x];
                }
            }
        }
        x
    }
}

impl FiniteAlgebra for TableAlgebra {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn arity_cap(&self) -> usize {
        self.cap
    }
    fn size(&self, arity: usize) -> usize {
        self.names[arity].len()
    }
    fn product(&self, g: &Hypergraph<Elem>) -> Result<Elem> {
        check_input(self, g)?;
        let mut acc = self.empty[0];
        let mut iface: Vec<usize> = Vec::new();
        for e in g.edges() {
            for &v in &e.incidence {
                if !iface.contains(&v) {
                    acc = self.add(iface.len(), acc)?;
                    iface.push(v);
                }
            }
            let mut b = e.label.index;
            let mut cur = e.incidence.clone();
            for &v in &iface {
                if !cur.contains(&v) {
                    b = self.add(cur.len(), b)?;
                    cur.push(v);
                }
            }
            let n = iface.len();
            b = self.permute(n, b, &mut cur, &iface);
            acc = self.oplus[n][acc * self.size(n) + b];
        }
        for v in 0..g.vertex_count() {
            if !iface.contains(&v) {
                acc = self.add(iface.len(), acc)?;
                iface.push(v);
            }
        }
        let mut target: Vec<usize> = g.sources().to_vec();
        target.extend(iface.iter().filter(|v| !g.sources().contains(v)));
        let n = iface.len();
        acc = self.permute(n, acc, &mut iface, &target);
        for k in (g.arity() + 1..=n).rev() {
            acc = self.drop_last[k][acc];
        }
        Ok(Elem::new(g.arity(), acc))
    }
    fn describe(&self, e: Elem) -> String {
        self.element_name(e).to_string()
    }
}

/// Tabulates any algebra up to its cap. Element names come from
/// `describe` when those are usable atoms, and are `e0, e1, ...` otherwise.
pub fn tabulate(alg: &dyn FiniteAlgebra, name: &str) -> Result<TableAlgebra> {
    let cap = alg.arity_cap();
    let mut t = TableAlgebra {
        name: name.to_string(),
        cap,
        names: Vec::new(),
        empty: Vec::new(),
        oplus: Vec::new(),
        add_source: Vec::new(),
        drop_last: Vec::new(),
        swap: Vec::new(),
    };
    for n in 0..=cap {
        let elems = elements(alg, n);
        let described: Vec<String> = elems.iter().map(|&e| alg.describe(e)).collect();
        let mut distinct = described.clone();
        distinct.sort();
        distinct.dedup();
        let usable = distinct.len() == described.len() && described.iter().all(|s| sexp::is_valid_atom(s));
        t.names.push(if usable {
            described
        } else {
            (0..elems.len()).map(|i| format!("e{i}")).collect()
        });
        t.empty.push(empty_element(alg, n)?.index);
        let mut table = Vec::with_capacity(elems.len() * elems.len());
        for &a in &elems {
            for &b in &elems {
                table.push(oplus(alg, a, b)?.index);
            }
        }
        t.oplus.push(table);
        t.add_source.push(if n < cap {
            elems.iter().map(|&x| add_source(alg, x).map(|e| e.index)).collect::<Result<_>>()?
        } else {
            Vec::new()
        });
        t.drop_last.push(if n > 0 {
            elems.iter().map(|&x| drop_last(alg, x).map(|e| e.index)).collect::<Result<_>>()?
        } else {
            Vec::new()
        });
        let mut swaps = Vec::new();
        for i in 0..n.saturating_sub(1) {
            swaps.push(elems.iter().map(|&x| swap(alg, x, i).map(|e| e.index)).collect::<Result<_>>()?);
        }
        t.swap.push(swaps);
    }
    Ok(t)
}

/// A table algebra with an optional homomorphism and accepting set.
#[derive(Clone, Debug)]
pub struct TableFile {
    pub algebra: Arc<TableAlgebra>,
    pub alphabet: RankedAlphabet,
    pub images: BTreeMap<String, Elem>,
    pub accepting: Vec<usize>,
}

impl TableFile {
    /// Tabulates the algebra of a recogniser together with its images and
    /// accepting set.
    pub fn from_recogniser(name: &str, r: &Recogniser) -> Result<Self> {
        Ok(TableFile {
            algebra: Arc::new(tabulate(&**r.algebra(), name)?),
            alphabet: r.hom.alphabet().clone(),
            images: r.hom.images().clone(),
            accepting: r.accepting.iter().copied().collect(),
        })
    }

    pub fn recogniser(&self) -> Result<Recogniser> {
        let alg: SharedAlgebra = self.algebra.clone();
        let hom = Homomorphism::new(self.alphabet.clone(), alg, self.images.clone())?;
        Recogniser::new(hom, self.accepting.iter().copied())
    }

    pub fn language(&self) -> Result<Language> {
        Ok(Language::recognised_by(&self.algebra.name, self.recogniser()?))
    }

    pub fn to_sexp(&self) -> Sexp {
        let t = &*self.algebra;
        let at = |s: &str| Sexp::atom(s);
        let num = |n: usize| Sexp::atom(n.to_string());
        let nm = |n: usize, i: usize| Sexp::atom(&t.names[n][i]);
        let mut universe = Vec::new();
        let mut empty = Vec::new();
        let mut op = Vec::new();
        let mut add = Vec::new();
        let mut drop = Vec::new();
        let mut sw = Vec::new();
        for n in 0..=t.cap {
            let size = t.names[n].len();
            let mut u = vec![num(n)];
            u.extend((0..size).map(|i| nm(n, i)));
            universe.push(Sexp::list(u));
            empty.push(Sexp::list(vec![num(n), nm(n, t.empty[n])]));
            for a in 0..size {
                for b in 0..size {
                    op.push(Sexp::list(vec![num(n), nm(n, a), nm(n, b), nm(n, t.oplus[n][a * size + b])]));
                }
                if n < t.cap {
                    add.push(Sexp::list(vec![num(n), nm(n, a), nm(n + 1, t.add_source[n][a])]));
                }
                if n > 0 {
                    drop.push(Sexp::list(vec![num(n), nm(n, a), nm(n - 1, t.drop_last[n][a])]));
                }
            }
            for (i, table) in t.swap[n].iter().enumerate() {
                for (a, &r) in table.iter().enumerate() {
                    sw.push(Sexp::list(vec![num(n), num(i + 1), nm(n, a), nm(n, r)]));
                }
            }
        }
        let symbols = self
            .alphabet
            .symbols()
            .iter()
            .map(|s| {
                let img = self.images[s.name()];
                Sexp::list(vec![at(s.name()), num(s.arity()), nm(img.arity, img.index)])
            })
            .collect();
        let accept = self.accepting.iter().map(|&i| nm(0, i)).collect();
        Sexp::tagged(
            "algebra",
            vec![
                Sexp::tagged("name", vec![at(&t.name)]),
                Sexp::tagged("arity-cap", vec![num(t.cap)]),
                Sexp::tagged("universe", universe),
                Sexp::tagged("empty", empty),
                Sexp::tagged("oplus", op),
                Sexp::tagged("add-source", add),
                Sexp::tagged("drop-last", drop),
                Sexp::tagged("swap", sw),
                Sexp::tagged("symbols", symbols),
                Sexp::tagged("accept", accept),
            ],
        )
    }

    pub fn to_text(&self) -> String {
        self.to_sexp().to_pretty()
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_sexp(&sexp::parse_one(text)?)
    }

    pub fn from_sexp(s: &Sexp) -> Result<Self> {
        let secs = crate::format::sections(
            s.expect_tagged("algebra")?,
            &[
                "name",
                "arity-cap",
                "universe",
                "empty",
                "oplus",
                "add-source",
                "drop-last",
                "swap",
                "symbols",
                "accept",
            ],
        )?;
        let section = |name: &str| -> Result<(&[Sexp], Pos)> {
            secs.get(name)
                .copied()
                .ok_or_else(|| s.pos().error(format!("missing `({name} ...)`")))
        };
        let single = |name: &str| -> Result<&Sexp> {
            match section(name)? {
                ([x], _) => Ok(x),
                (_, pos) => Err(pos.error(format!("expected `({name} VALUE)`"))),
            }
        };
        let name = single("name")?.as_atom()?.to_string();
        let cap = single("arity-cap")?.as_usize()?;

        let mut names: Vec<Option<Vec<String>>> = vec![None; cap + 1];
        for item in section("universe")?.0 {
            let items = item.as_list()?;
            let Some((n, elems)) = items.split_first() else {
                return Err(item.pos().error("expected `(ARITY NAME...)`"));
            };
            let arity = n.as_usize()?;
            if arity > cap {
                return Err(n.pos().error(format!("arity {arity} above the cap {cap}")));
            }
            let mut list: Vec<String> = Vec::new();
            for e in elems {
                let e_name = e.as_atom()?.to_string();
                if list.contains(&e_name) {
                    return Err(e.pos().error(format!("duplicate element `{e_name}`")));
                }
                list.push(e_name);
            }
            if list.is_empty() {
                return Err(item.pos().error("a universe must be nonempty"));
            }
            if names[arity].replace(list).is_some() {
                return Err(item.pos().error(format!("arity {arity} listed twice")));
            }
        }
        let names: Vec<Vec<String>> = names
            .into_iter()
            .enumerate()
            .map(|(n, l)| l.ok_or_else(|| s.pos().error(format!("no universe for arity {n}"))))
            .collect::<Result<_>>()?;
        let lookup = |n: usize, x: &Sexp| -> Result<usize> {
            let e_name = x.as_atom()?;
            names[n]
                .iter()
                .position(|m| m == e_name)
                .ok_or_else(|| x.pos().error(format!("`{e_name}` is not an element of arity {n}")))
        };
        let arity_of = |x: &Sexp, lo: usize, hi: usize| -> Result<usize> {
            let n = x.as_usize()?;
            if n < lo || n > hi {
                return Err(x.pos().error(format!("arity {n} outside {lo}..={hi}")));
            }
            Ok(n)
        };

        // Each table is filled from entries, then checked for completeness.
        let size = |n: usize| names[n].len();
        let mut empty: Vec<Option<usize>> = vec![None; cap + 1];
        let mut op: Vec<Vec<Option<usize>>> = (0..=cap).map(|n| vec![None; size(n) * size(n)]).collect();
        let mut add: Vec<Vec<Option<usize>>> = (0..=cap).map(|n| vec![None; if n < cap { size(n) } else { 0 }]).collect();
        let mut drop: Vec<Vec<Option<usize>>> = (0..=cap).map(|n| vec![None; if n > 0 { size(n) } else { 0 }]).collect();
        let mut sw: Vec<Vec<Vec<Option<usize>>>> =
            (0..=cap).map(|n| vec![vec![None; size(n)]; n.saturating_sub(1)]).collect();
        let set = |slot: &mut Option<usize>, v: usize, at: &Sexp| -> Result<()> {
            if slot.replace(v).is_some() {
                return Err(at.pos().error("entry given twice"));
            }
            Ok(())
        };
        for item in section("empty")?.0 {
            let [n, x] = item.as_list()? else {
                return Err(item.pos().error("expected `(ARITY ELEMENT)`"));
            };
            let n = arity_of(n, 0, cap)?;
            set(&mut empty[n], lookup(n, x)?, item)?;
        }
        for item in section("oplus")?.0 {
            let [n, a, b, r] = item.as_list()? else {
                return Err(item.pos().error("expected `(ARITY A B RESULT)`"));
            };
            let n = arity_of(n, 0, cap)?;
            let idx = lookup(n, a)? * size(n) + lookup(n, b)?;
            set(&mut op[n][idx], lookup(n, r)?, item)?;
        }
        if cap > 0 {
            for item in section("add-source")?.0 {
                let [n, a, r] = item.as_list()? else {
                    return Err(item.pos().error("expected `(ARITY A RESULT)`"));
                };
                let n = arity_of(n, 0, cap - 1)?;
                set(&mut add[n][lookup(n, a)?], lookup(n + 1, r)?, item)?;
            }
            for item in section("drop-last")?.0 {
                let [n, a, r] = item.as_list()? else {
                    return Err(item.pos().error("expected `(ARITY A RESULT)`"));
                };
                let n = arity_of(n, 1, cap)?;
                set(&mut drop[n][lookup(n, a)?], lookup(n - 1, r)?, item)?;
            }
        }
        if cap > 1 {
            for item in section("swap")?.0 {
                let [n, i, a, r] = item.as_list()? else {
                    return Err(item.pos().error("expected `(ARITY POSITION A RESULT)`"));
                };
                let n = arity_of(n, 2, cap)?;
                let pos = i.as_usize()?;
                if pos == 0 || pos + 1 > n {
                    return Err(i.pos().error(format!("swap position {pos} outside 1..{}", n - 1)));
                }
                set(&mut sw[n][pos - 1][lookup(n, a)?], lookup(n, r)?, item)?;
            }
        }
        let complete = |v: Vec<Option<usize>>, what: &str| -> Result<Vec<usize>> {
            v.into_iter()
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| s.pos().error(format!("table `{what}` is incomplete")))
        };
        let table = TableAlgebra {
            name,
            cap,
            empty: complete(empty, "empty")?,
            oplus: op.into_iter().map(|v| complete(v, "oplus")).collect::<Result<_>>()?,
            add_source: add.into_iter().map(|v| complete(v, "add-source")).collect::<Result<_>>()?,
            drop_last: drop.into_iter().map(|v| complete(v, "drop-last")).collect::<Result<_>>()?,
            swap: sw
                .into_iter()
                .map(|per| per.into_iter().map(|v| complete(v, "swap")).collect::<Result<_>>())
                .collect::<Result<_>>()?,
            names: names.clone(),
        };

        let mut alphabet = RankedAlphabet::default();
        let mut images = BTreeMap::new();
        if let Some((body, _)) = secs.get("symbols") {
            for item in body.iter() {
                let [sym, k, img] = item.as_list()? else {
                    return Err(item.pos().error("expected `(SYMBOL ARITY ELEMENT)`"));
                };
                let k = arity_of(k, 0, cap)?;
                let sym_name = sym.as_atom()?;
                alphabet
                    .insert(Symbol::new(sym_name, k))
                    .map_err(|e| sym.pos().error(e.to_string()))?;
                images.insert(sym_name.to_string(), Elem::new(k, lookup(k, img)?));
            }
        }
        let mut accepting = Vec::new();
        if let Some((body, _)) = secs.get("accept") {
            for x in body.iter() {
                accepting.push(lookup(0, x)?);
            }
        }
        Ok(TableFile {
            algebra: Arc::new(table),
            alphabet,
            images,
            accepting,
        })
    }
}

impl TableFile {
    pub fn symbol_images(&self) -> impl Iterator<Item = (&Symbol, Elem)> + '_ {
        self.alphabet.symbols().iter().map(|s| (s, self.images[s.name()]))
    }

    /// Number of elements per arity.
    pub fn sizes(&self) -> Vec<usize> {
        (0..=self.algebra.cap).map(|n| self.algebra.size(n)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{divisibility_algebra, shared_vertex_algebra};
    use crate::sample;

    #[test]
    fn tables_reproduce_products() {
        let alphabet = RankedAlphabet::new([("a", 1), ("e", 2)]).unwrap();
        let e = alphabet.get("e").unwrap().clone();
        let r = shared_vertex_algebra((&e, 0), (&e, 1), false, &alphabet, 4).unwrap();
        let table = tabulate(&**r.algebra(), "sv").unwrap();
        let mut rng = sample::rng(3);
        for _ in 0..200 {
            let shape = sample::Shape {
                arity: 0,
                max_extra_vertices: 4,
                max_edges: 4,
                max_label_arity: 2,
            };
            let g = sample::random_graph(&mut rng, &alphabet, shape);
            let labelled = g.try_map_labels(|s| r.hom.image(s)).unwrap();
            assert_eq!(table.product(&labelled).unwrap(), r.algebra().product(&labelled).unwrap(), "{g:?}");
        }
    }

    #[test]
    fn file_roundtrip() {
        let alphabet = RankedAlphabet::new([("a", 0), ("b", 1)]).unwrap();
        let a = alphabet.get("a").unwrap().clone();
        let r = divisibility_algebra(&a, 2, &alphabet, 2).unwrap();
        let file = TableFile::from_recogniser("mod2", &r).unwrap();
        let text = file.to_text();
        assert!(text.contains("(oplus\n    (0 r0 r0 r0)"));
        let back = TableFile::parse(&text).unwrap();
        assert_eq!(back.to_text(), text);
        assert_eq!(back.sizes(), vec![2, 2, 2]);
    }

    #[test]
    fn incomplete_tables_are_rejected() {
        let text = "(algebra (name x) (arity-cap 0) (universe (0 p q)) (empty (0 p)) (oplus (0 p p p)))";
        let err = TableFile::parse(text).unwrap_err();
        assert!(err.to_string().contains("oplus"), "{err}");
    }
}
