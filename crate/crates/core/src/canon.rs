//! Canonical forms and isomorphism for coloured tuple structures.
//!
//! A [`Structure`] is a finite set of points with an initial colour per point
//! and a multiset of tagged tuples. Hypergraphs, vertex-replacement graphs and
//! relational models are all translated into this shape before comparison.
//!
//! Canonical labelling is individualisation-refinement: colour refinement to
//! a stable partition, then branch on the first non-singleton cell, keeping the
//! lexicographically least leaf code. Automorphisms found at equal leaves prune
//! sibling branches in the same orbit.

use std::collections::BTreeSet;

#[derive(Clone, Debug, Default)]
pub struct Structure {
    pub colors: Vec<String>,
    pub tuples: Vec<(String, Vec<usize>)>,
}

impl Structure {
    pub fn new(colors: Vec<String>) -> Structure {
        Structure {
            colors,
            tuples: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn push(&mut self, tag: impl Into<String>, tuple: Vec<usize>) {
        self.tuples.push((tag.into(), tuple));
    }
}

/// Canonical code plus the point order that produced it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Canonical {
    pub code: String,
    /// `order[r]` is the point placed at rank `r`.
    pub order: Vec<usize>,
}

/// Integer view of a structure (or of two structures side by side).
struct Prepared {
    n: usize,
    colors: Vec<u32>,
    tuples: Vec<(u32, Vec<usize>)>,
    /// Which input structure each tuple came from.
    tuple_part: Vec<usize>,
    ranges: Vec<std::ops::Range<usize>>,
    /// For every point, the (tuple index, position) pairs it occurs at.
    occurrences: Vec<Vec<(usize, usize)>>,
    color_names: Vec<String>,
    tag_names: Vec<String>,
}

fn prepare(parts: &[&Structure]) -> Prepared {
    let color_names: Vec<String> = parts
        .iter()
        .flat_map(|s| s.colors.iter().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let tag_names: Vec<String> = parts
        .iter()
        .flat_map(|s| s.tuples.iter().map(|(t, _)| t.clone()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut colors = Vec::new();
    let mut tuples: Vec<(u32, Vec<usize>)> = Vec::new();
    let mut tuple_part = Vec::new();
    let mut ranges = Vec::new();
    let mut offset = 0;
    for (part, s) in parts.iter().enumerate() {
        ranges.push(offset..offset + s.len());
        for c in &s.colors {
            colors.push(color_names.binary_search(c).unwrap() as u32);
        }
        for (tag, t) in &s.tuples {
            let tag = tag_names.binary_search(tag).unwrap() as u32;
            tuples.push((tag, t.iter().map(|&p| p + offset).collect()));
            tuple_part.push(part);
        }
        offset += s.len();
    }
    let n = colors.len();
    let mut occurrences = vec![Vec::new(); n];
    for (ti, (_, t)) in tuples.iter().enumerate() {
        for (pos, &p) in t.iter().enumerate() {
            occurrences[p].push((ti, pos));
        }
    }
    Prepared {
        n,
        colors,
        tuples,
        tuple_part,
        ranges,
        occurrences,
        color_names,
        tag_names,
    }
}

impl Prepared {
    /// Refines `colors` until stable. Colours are renumbered by sorted
    /// signature, so the result depends only on the isomorphism type.
    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let mut classes = count_classes(&colors);
        loop {
            let sigs: Vec<(u32, Vec<(u32, usize, Vec<u32>)>)> = (0..self.n)
                .map(|p| {
                    let mut occ: Vec<(u32, usize, Vec<u32>)> = self.occurrences[p]
                        .iter()
                        .map(|&(ti, pos)| {
                            let (tag, t) = &self.tuples[ti];
                            (*tag, pos, t.iter().map(|&q| colors[q]).collect())
                        })
                        .collect();
                    occ.sort_unstable();
                    (colors[p], occ)
                })
                .collect();
            let mut distinct: Vec<&(u32, Vec<(u32, usize, Vec<u32>)>)> = sigs.iter().collect();
            distinct.sort();
            distinct.dedup();
            let next: Vec<u32> = sigs
                .iter()
                .map(|s| distinct.binary_search(&s).unwrap() as u32)
                .collect();
            let next_classes = distinct.len();
            colors = next;
            if next_classes == classes {
                return colors;
            }
            classes = next_classes;
        }
    }

    /// Numeric code of the structure with points laid out by `rank`.
    fn code(&self, rank: &[usize], part: usize) -> Vec<u32> {
        let range = self.ranges[part].clone();
        let len = range.len();
        let mut order = vec![0; len];
        for p in range.clone() {
            order[rank[p]] = p;
        }
        let mut out = vec![len as u32];
        out.extend(order.iter().map(|&p| self.colors[p]));
        let mut ts: Vec<Vec<u32>> = self
            .tuples
            .iter()
            .zip(&self.tuple_part)
            .filter(|(_, &tp)| tp == part)
            .map(|((tag, t), _)| {
                let mut v = vec![*tag, t.len() as u32];
                v.extend(t.iter().map(|&p| rank[p] as u32));
                v
            })
            .collect();
        ts.sort();
        out.push(ts.len() as u32);
        for t in ts {
            out.extend(t);
        }
        out
    }
}

fn count_classes(colors: &[u32]) -> usize {
    colors.iter().collect::<BTreeSet<_>>().len()
}

/// Splits the cell of `p` so that `p` sorts first within it.
fn individualize(colors: &[u32], p: usize) -> Vec<u32> {
    colors
        .iter()
        .enumerate()
        .map(|(q, &c)| 2 * c + u32::from(q != p))
        .collect()
}

/// The point map sending the leaf `from` to the leaf `to` (given as ranks).
fn automorphism(from: &[usize], to: &[usize]) -> Vec<usize> {
    let mut order = vec![0; to.len()];
    for (p, &r) in to.iter().enumerate() {
        order[r] = p;
    }
    from.iter().map(|&r| order[r]).collect()
}

fn first_nonsingleton(colors: &[u32]) -> Option<Vec<usize>> {
    let mut by_color: std::collections::BTreeMap<u32, Vec<usize>> = Default::default();
    for (p, &c) in colors.iter().enumerate() {
        by_color.entry(c).or_default().push(p);
    }
    by_color.into_values().find(|cell| cell.len() > 1)
}

struct Search<'a> {
    prep: &'a Prepared,
    best: Option<(Vec<u32>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

type Leaf = (Vec<u32>, Vec<usize>);

impl Search<'_> {
    /// Explores the subtree below `colors` and returns its first leaf.
    fn run(&mut self, colors: Vec<u32>, prefix: &mut Vec<usize>) -> Leaf {
        let colors = self.prep.refine(colors);
        let Some(cell) = first_nonsingleton(&colors) else {
            return self.leaf(&colors);
        };
        let mut reference: Option<Leaf> = None;
        let mut explored: Vec<usize> = Vec::new();
        for &p in &cell {
            if !explored.is_empty() && self.same_orbit(prefix, &explored, p) {
                continue;
            }
            let next = individualize(&colors, p);
            prefix.push(p);
            match &reference {
                None => reference = Some(self.run(next, prefix)),
                Some(r) => {
                    // If the first leaf below `p` matches the reference leaf,
                    // the whole subtree is an automorphic image of one
                    // already searched.
                    let probe = self.dive(next.clone());
                    if probe.0 == r.0 {
                        let gamma = automorphism(&r.1, &probe.1);
                        self.automorphisms.push(gamma);
                    } else {
                        self.run(next, prefix);
                    }
                }
            }
            prefix.pop();
            explored.push(p);
        }
        reference.expect("a non-singleton cell has a first point")
    }

    fn dive(&mut self, mut colors: Vec<u32>) -> Leaf {
        loop {
            colors = self.prep.refine(colors);
            match first_nonsingleton(&colors) {
                None => return self.leaf(&colors),
                Some(cell) => colors = individualize(&colors, cell[0]),
            }
        }
    }

    fn leaf(&mut self, colors: &[u32]) -> Leaf {
        let rank: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
        let code = self.prep.code(&rank, 0);
        if self.best.as_ref().is_none_or(|b| code < b.0) {
            self.best = Some((code.clone(), rank.clone()));
        }
        (code, rank)
    }

    /// Whether `p` shares an orbit with an explored point under the
    /// automorphisms found so far that fix `prefix` pointwise.
    fn same_orbit(&self, prefix: &[usize], explored: &[usize], p: usize) -> bool {
        let n = self.prep.n;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut any = false;
        for gamma in &self.automorphisms {
            if prefix.iter().any(|&q| gamma[q] != q) {
                continue;
            }
            any = true;
            for x in 0..n {
                let (a, b) = (find(&mut parent, x), find(&mut parent, gamma[x]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        if !any {
            return false;
        }
        let root = find(&mut parent, p);
        explored.iter().any(|&q| find(&mut parent, q) == root)
    }
}

/// Canonical form of a structure. Two structures are isomorphic exactly when
/// their codes are equal.
pub fn canonicalize(s: &Structure) -> Canonical {
    let prep = prepare(&[s]);
    let mut search = Search {
        prep: &prep,
        best: None,
        automorphisms: Vec::new(),
    };
    search.run(prep.colors.clone(), &mut Vec::new());
    let (code, rank) = search.best.expect("search always reaches a leaf");
    let mut order = vec![0; rank.len()];
    for (p, &r) in rank.iter().enumerate() {
        order[r] = p;
    }
    let mut text = String::new();
    text.push_str(&prep.color_names.join("\u{1}"));
    text.push('\u{2}');
    text.push_str(&prep.tag_names.join("\u{1}"));
    text.push('\u{2}');
    text.push_str(&code.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
    Canonical { code: text, order }
}

/// Finds an isomorphism `a → b` as a point map, by joint refinement and
/// branching on matched pairs.
pub fn isomorphism(a: &Structure, b: &Structure) -> Option<Vec<usize>> {
    if a.len() != b.len() || a.tuples.len() != b.tuples.len() {
        return None;
    }
    let prep = prepare(&[a, b]);
    let na = a.len();
    let identity: Vec<usize> = (0..prep.n).map(|p| p - na * usize::from(p >= na)).collect();
    let target = prep.code(&identity, 1);
    iso_search(&prep, na, prep.colors.clone(), &target)
}

fn iso_search(prep: &Prepared, na: usize, colors: Vec<u32>, target: &[u32]) -> Option<Vec<usize>> {
    let colors = prep.refine(colors);
    let mut cells: std::collections::BTreeMap<u32, (Vec<usize>, Vec<usize>)> = Default::default();
    for (p, &c) in colors.iter().enumerate() {
        let e = cells.entry(c).or_default();
        if p < na {
            e.0.push(p)
        } else {
            e.1.push(p)
        }
    }
    if cells.values().any(|(l, r)| l.len() != r.len()) {
        return None;
    }
    match cells.values().find(|(l, _)| l.len() > 1) {
        None => {
            let mut map = vec![0; na];
            for (l, r) in cells.values() {
                if let (Some(&x), Some(&y)) = (l.first(), r.first()) {
                    map[x] = y - na;
                }
            }
            // Verify by laying `a` out in the order of its image.
            let mut rank = vec![0; prep.n];
            for (x, &y) in map.iter().enumerate() {
                rank[x] = y;
            }
            (prep.code(&rank, 0) == target).then_some(map)
        }
        Some((l, r)) => {
            let x = l[0];
            for &y in r {
                let mut next: Vec<u32> = colors.iter().map(|&c| 2 * c + 1).collect();
                next[x] -= 1;
                next[y] -= 1;
                if let Some(m) = iso_search(prep, na, next, target) {
                    return Some(m);
                }
            }
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize, offset: usize) -> Structure {
        let mut s = Structure::new(vec![String::new(); n]);
        for i in 0..n {
            s.push("e", vec![(i + offset) % n, (i + offset + 1) % n]);
        }
        s
    }

    #[test]
    fn rotated_cycles_agree() {
        let a = canonicalize(&cycle(6, 0));
        let b = canonicalize(&cycle(6, 2));
        assert_eq!(a.code, b.code);
        assert!(isomorphism(&cycle(6, 0), &cycle(6, 3)).is_some());
    }

    #[test]
    fn two_triangles_vs_hexagon() {
        let mut two = Structure::new(vec![String::new(); 6]);
        for (x, y) in [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)] {
            two.push("e", vec![x, y]);
        }
        assert_ne!(canonicalize(&two).code, canonicalize(&cycle(6, 0)).code);
        assert!(isomorphism(&two, &cycle(6, 0)).is_none());
    }

    #[test]
    fn many_twins_are_fast() {
        let mut s = Structure::new(vec![String::new(); 40]);
        for i in 0..40 {
            s.push("p", vec![i]);
        }
        let c = canonicalize(&s);
        assert_eq!(c.order.len(), 40);
    }

    #[test]
    fn nullary_tuples_counted() {
        let mut a = Structure::new(vec![]);
        a.push("c", vec![]);
        let b = Structure::new(vec![]);
        assert_ne!(canonicalize(&a).code, canonicalize(&b).code);
        assert!(isomorphism(&a, &b).is_none());
        assert!(isomorphism(&a, &a.clone()).is_some());
    }
}
