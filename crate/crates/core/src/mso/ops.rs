//! Products, disjoint unions, quantifier-free restrictions and
//! interpretations of models, and the interpretation turning a product of
//! powerset models into the powerset model of a disjoint union.

use super::eval::{check_vocabulary, eval_unchecked};
use super::formula::{Formula, Term};
use super::model::{Model, Vocabulary};
use super::powerset::{constant_name, mod_relation};
use crate::error::{Error, Result};
use std::collections::BTreeSet;

/// Relation or constant `name` of factor or summand `i`.
pub fn component_name(i: usize, name: &str) -> String {
    format!("{i}.{name}")
}

/// Universe: tuples of elements, encoded in mixed radix with the first
/// factor most significant. Relation `i.R` holds of a tuple of elements
/// whose `i`-th projections satisfy `R`. Each family of constants, one per
/// factor, gives a constant named by joining the names with `|`.
pub fn model_product(ms: &[Model]) -> Result<Model> {
    let size = ms.iter().try_fold(1usize, |acc, m| {
        acc.checked_mul(m.size())
            .filter(|&s| s <= 1 << 20)
            .ok_or_else(|| Error::TooLarge("product universe above 2^20".into()))
    })?;
    let sizes: Vec<usize> = ms.iter().map(Model::size).collect();
    let project = |mut e: usize, i: usize| -> usize {
        for j in (i + 1..ms.len()).rev() {
            e /= sizes[j];
        }
        e % sizes[i]
    };
    let mut out = Model::new(size);
    for (i, m) in ms.iter().enumerate() {
        // fibres[x]: product elements whose i-th coordinate is x.
        let mut fibres = vec![Vec::new(); m.size()];
        for e in 0..size {
            fibres[project(e, i)].push(e);
        }
        for (name, r) in m.relations() {
            let full = component_name(i, name);
            out.declare(&full, r.arity)?;
            if size == 0 {
                continue;
            }
            for tuple in r.sorted() {
                let mut pos = vec![0usize; r.arity];
                'tuples: loop {
                    out.insert(&full, (0..r.arity).map(|k| fibres[tuple[k]][pos[k]]).collect())?;
                    for k in 0..r.arity {
                        pos[k] += 1;
                        if pos[k] < fibres[tuple[k]].len() {
                            continue 'tuples;
                        }
                        pos[k] = 0;
                    }
                    break;
                }
            }
        }
    }
    let mut families: Vec<(String, usize)> = vec![(String::new(), 0)];
    for (i, m) in ms.iter().enumerate() {
        let mut next = Vec::new();
        for (prefix, value) in &families {
            for (c, &v) in m.constants() {
                let name = if i == 0 { c.clone() } else { format!("{prefix}|{c}") };
                next.push((name, value * sizes[i] + v));
            }
        }
        families = next;
    }
    if !ms.is_empty() {
        for (name, v) in families {
            out.set_constant(&name, v)?;
        }
    }
    Ok(out)
}

/// Universe: the summands one after another. Relation `i.R` is `R` on
/// summand `i`; constant `i.c` is `c` of summand `i`.
pub fn model_disjoint_union(ms: &[Model]) -> Result<Model> {
    let size = ms.iter().map(Model::size).sum();
    let mut out = Model::new(size);
    let mut offset = 0;
    for (i, m) in ms.iter().enumerate() {
        for (name, r) in m.relations() {
            let full = component_name(i, name);
            out.declare(&full, r.arity)?;
            for t in &r.tuples {
                out.insert(&full, t.iter().map(|&v| v + offset).collect())?;
            }
        }
        for (c, &v) in m.constants() {
            out.set_constant(&component_name(i, c), v + offset)?;
        }
        offset += m.size();
    }
    Ok(out)
}

/// Keeps the elements satisfying the quantifier-free `φ(var)`, renumbered
/// in order. Returns the restricted model and the kept elements.
pub fn qf_restrict(m: &Model, var: &str, phi: &Formula) -> Result<(Model, Vec<usize>)> {
    if !phi.is_quantifier_free() {
        return Err(Error::RangeError(format!("restriction formula {phi} has quantifiers")));
    }
    check_vocabulary(phi, &m.vocabulary())?;
    let mut kept = Vec::new();
    for v in 0..m.size() {
        if eval_unchecked(phi, m, &[(var, v)])? {
            kept.push(v);
        }
    }
    let mut new_id = vec![usize::MAX; m.size()];
    for (i, &v) in kept.iter().enumerate() {
        new_id[v] = i;
    }
    let mut out = Model::new(kept.len());
    for (c, &v) in m.constants() {
        if new_id[v] == usize::MAX {
            return Err(Error::ConstantViolatesRestriction(c.clone()));
        }
        out.set_constant(c, new_id[v])?;
    }
    for (name, r) in m.relations() {
        out.declare(name, r.arity)?;
        for t in &r.tuples {
            if t.iter().all(|&v| new_id[v] != usize::MAX) {
                out.insert(name, t.iter().map(|&v| new_id[v]).collect())?;
            }
        }
    }
    Ok((out, kept))
}

#[derive(Clone, Debug)]
pub struct RelationDef {
    pub name: String,
    pub vars: Vec<String>,
    pub body: Formula,
}

/// New relations defined by quantifier-free formulas over the old
/// vocabulary, and new constants copied from old ones.
#[derive(Clone, Debug, Default)]
pub struct Interpretation {
    pub relations: Vec<RelationDef>,
    /// `(new name, old name)`.
    pub constants: Vec<(String, String)>,
}

impl Interpretation {
    pub fn relation(mut self, name: &str, vars: &[&str], body: Formula) -> Self {
        self.relations.push(RelationDef {
            name: name.to_string(),
            vars: vars.iter().map(|v| v.to_string()).collect(),
            body,
        });
        self
    }

    pub fn constant(mut self, new: &str, old: &str) -> Self {
        self.constants.push((new.to_string(), old.to_string()));
        self
    }

    pub fn target_vocabulary(&self) -> Vocabulary {
        Vocabulary {
            relations: self.relations.iter().map(|d| (d.name.clone(), d.vars.len())).collect(),
            constants: self.constants.iter().map(|(n, _)| n.clone()).collect(),
        }
    }
}

/// Same universe; relations and constants as the interpretation says.
pub fn qf_interpret(m: &Model, f: &Interpretation) -> Result<Model> {
    let vocab = m.vocabulary();
    let mut out = Model::new(m.size());
    for d in &f.relations {
        if !d.body.is_quantifier_free() {
            return Err(Error::RangeError(format!("definition of `{}` has quantifiers", d.name)));
        }
        check_vocabulary(&d.body, &vocab)?;
        if out.relation(&d.name).is_some() {
            return Err(Error::DuplicateName(d.name.clone()));
        }
        out.declare(&d.name, d.vars.len())?;
        let k = d.vars.len();
        if k > 0 && m.size() == 0 {
            continue;
        }
        if let Some((r, positions)) = guard(&d.body, &d.vars) {
            // Only tuples of the guard relation can satisfy the body.
            let Some(rel) = m.relation(r) else { continue };
            for g in rel.sorted() {
                let t: Vec<usize> = positions.iter().map(|&p| g[p]).collect();
                let env: Vec<(&str, usize)> = d.vars.iter().map(String::as_str).zip(t.iter().copied()).collect();
                if eval_unchecked(&d.body, m, &env)? {
                    out.insert(&d.name, t)?;
                }
            }
            continue;
        }
        let mut t = vec![0usize; k];
        'tuples: loop {
            let env: Vec<(&str, usize)> = d.vars.iter().map(String::as_str).zip(t.iter().copied()).collect();
            if eval_unchecked(&d.body, m, &env)? {
                out.insert(&d.name, t.clone())?;
            }
            for i in 0..k {
                t[i] += 1;
                if t[i] < m.size() {
                    continue 'tuples;
                }
                t[i] = 0;
            }
            break;
        }
    }
    for (new, old) in &f.constants {
        let v = m
            .constant(old)
            .ok_or_else(|| Error::VocabularyMismatch(format!("unknown constant `{old}`")))?;
        out.set_constant(new, v)?;
    }
    Ok(out)
}

/// An atom `R(y1..yk)` that the body implies, whose arguments are exactly the
/// defined variables, each once. Returns `R` and, for each variable, its
/// position among the arguments.
fn guard<'a>(body: &'a Formula, vars: &[String]) -> Option<(&'a str, Vec<usize>)> {
    let atom = match body {
        Formula::And(parts) => parts.first()?,
        f => f,
    };
    let Formula::Rel(r, ts) = atom else { return None };
    if ts.len() != vars.len() || vars.is_empty() {
        return None;
    }
    let positions: Option<Vec<usize>> = vars
        .iter()
        .map(|v| ts.iter().position(|t| matches!(t, Term::Var(x) if x == v)))
        .collect();
    let positions = positions?;
    let mut seen = positions.clone();
    seen.sort_unstable();
    seen.dedup();
    (seen.len() == vars.len()).then_some((r.as_str(), positions))
}

/// Splits a quantifier-free `φ(x)` over the vocabulary of a disjoint union
/// into the formula it induces on summand `side`, for elements of that
/// summand. Atoms that mention `x` together with something outside the
/// summand are false. Returns `None` for atoms over constants alone, whose
/// truth depends on the summands themselves.
pub fn split_for_summand(phi: &Formula, side: usize) -> Option<Formula> {
    let prefix = format!("{side}.");
    let local = |t: &Term| -> Option<Term> {
        match t {
            Term::Var(x) => Some(Term::Var(x.clone())),
            Term::Const(c) => c.strip_prefix(&prefix).map(Term::constant),
        }
    };
    let out = match phi {
        Formula::True | Formula::False => phi.clone(),
        Formula::Rel(r, ts) => {
            if !ts.iter().any(|t| matches!(t, Term::Var(_))) {
                return None;
            }
            let mapped: Option<Vec<Term>> = ts.iter().map(local).collect();
            match (r.strip_prefix(&prefix), mapped) {
                (Some(r), Some(ts)) => Formula::Rel(r.to_string(), ts),
                _ => Formula::False,
            }
        }
        Formula::Eq(a, b) => {
            let vars = [a, b].iter().filter(|t| matches!(t, Term::Var(_))).count();
            if vars == 0 {
                return None;
            }
            match (local(a), local(b)) {
                (Some(a), Some(b)) => Formula::Eq(a, b),
                _ => Formula::False,
            }
        }
        Formula::Not(g) => Formula::not(split_for_summand(g, side)?),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| split_for_summand(g, side)).collect::<Option<_>>()?),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| split_for_summand(g, side)).collect::<Option<_>>()?),
        Formula::Implies(a, b) => Formula::implies(split_for_summand(a, side)?, split_for_summand(b, side)?),
        _ => return None,
    };
    Some(out)
}

/// The quantifier-free interpretation `g` with
/// `P(A ⊔ B) ≅ g(P(A) × P(B))`, for two-summand unions of models over the
/// vocabularies `va` and `vb`. Generators of the union must split into
/// generators of the summands (see [`split_for_summand`]); the summand
/// powerset models must have been built with `gen_a` and `gen_b`.
///
/// The isomorphism sends a set `X` to `(X ∩ A, X ∩ B)`.
pub fn powerset_union_interpretation(
    va: &Vocabulary,
    vb: &Vocabulary,
    gen_union: &[Formula],
    gen_a: &[Formula],
    gen_b: &[Formula],
    moduli: &BTreeSet<usize>,
) -> Result<Interpretation> {
    let vocabs = [va, vb];
    let gens = [gen_a, gen_b];
    for (side, g) in gens.iter().enumerate() {
        if !g.contains(&Formula::False) {
            return Err(Error::RangeError(format!("summand {side} generators must contain `false`")));
        }
    }
    let empty = format!("{}|{}", constant_name(&Formula::False), constant_name(&Formula::False));
    let is_empty = |side: usize, v: &str| -> Formula {
        Formula::rel(&component_name(side, "subset"), vec![Term::var(v), Term::constant(&empty)])
    };
    let x = |v: &str| Term::var(v);
    let mut g = Interpretation::default().relation(
        "subset",
        &["X", "Y"],
        Formula::And(vec![
            Formula::rel(&component_name(0, "subset"), vec![x("X"), x("Y")]),
            Formula::rel(&component_name(1, "subset"), vec![x("X"), x("Y")]),
        ]),
    );
    g = g.relation(
        "singleton",
        &["X"],
        Formula::Or(vec![
            Formula::And(vec![Formula::rel(&component_name(0, "singleton"), vec![x("X")]), is_empty(1, "X")]),
            Formula::And(vec![is_empty(0, "X"), Formula::rel(&component_name(1, "singleton"), vec![x("X")])]),
        ]),
    );
    for (side, v) in vocabs.iter().enumerate() {
        for (r, &n) in &v.relations {
            let vars: Vec<String> = (0..n).map(|i| format!("X{i}")).collect();
            let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
            let mut parts = vec![Formula::rel(
                &component_name(side, r),
                vars.iter().map(|v| Term::var(v)).collect(),
            )];
            parts.extend(vars.iter().map(|v| is_empty(1 - side, v)));
            g = g.relation(&component_name(side, r), &refs, Formula::And(parts));
        }
    }
    for &m in moduli {
        for k in 0..m {
            let mut cases = Vec::new();
            for k0 in 0..m {
                let k1 = (k + m - k0) % m;
                cases.push(Formula::And(vec![
                    Formula::rel(&component_name(0, &mod_relation(m, k0)), vec![x("X")]),
                    Formula::rel(&component_name(1, &mod_relation(m, k1)), vec![x("X")]),
                ]));
            }
            g = g.relation(&mod_relation(m, k), &["X"], Formula::Or(cases));
        }
    }
    let mut seen = BTreeSet::new();
    for phi in gen_union {
        let name = constant_name(phi);
        if !seen.insert(name.clone()) {
            continue;
        }
        let mut halves = Vec::new();
        for side in 0..2 {
            let half = split_for_summand(phi, side)
                .ok_or_else(|| Error::RangeError(format!("generator {phi} mentions no element")))?;
            let half = find_generator(&half, gens[side])
                .ok_or_else(|| Error::RangeError(format!("generator {phi} restricted to summand {side} is {half}, which is not a generator there")))?;
            halves.push(constant_name(half));
        }
        g = g.constant(&name, &halves.join("|"));
    }
    Ok(g)
}

/// A generator equal to `phi` after folding `true`/`false`.
fn find_generator<'a>(phi: &Formula, gens: &'a [Formula]) -> Option<&'a Formula> {
    let target = phi.simplify();
    gens.iter().find(|g| g.simplify() == target)
}

/// The isomorphism from `P(A ⊔ B)` to `P(A) × P(B)` as a map on elements.
pub fn powerset_union_map(size_a: usize, size_b: usize) -> Vec<usize> {
    let mask_a = (1usize << size_a) - 1;
    (0..1usize << (size_a + size_b))
        .map(|x| (x & mask_a) * (1 << size_b) + (x >> size_a))
        .collect()
}

/// Builds both sides of `P(A ⊔ B) ≅ g(P(A) × P(B))` with `Default`
/// generators and checks the intended map is an isomorphism. Returns the
/// two models and whether the check passed.
pub fn check_powerset_union(a: &Model, b: &Model, moduli: &BTreeSet<usize>) -> Result<(Model, Model, bool)> {
    use super::powerset::{default_generators, powerset_with};
    let union = model_disjoint_union(&[a.clone(), b.clone()])?;
    let (gu, ga, gb) = (
        default_generators(&union.vocabulary()),
        default_generators(&a.vocabulary()),
        default_generators(&b.vocabulary()),
    );
    let lhs = powerset_with(&union, &gu, moduli)?;
    let pa = powerset_with(a, &ga, moduli)?;
    let pb = powerset_with(b, &gb, moduli)?;
    let product = model_product(&[pa, pb])?;
    let g = powerset_union_interpretation(&a.vocabulary(), &b.vocabulary(), &gu, &ga, &gb, moduli)?;
    let rhs = qf_interpret(&product, &g)?;
    let ok = lhs.is_isomorphism(&rhs, &powerset_union_map(a.size(), b.size()));
    Ok((lhs, rhs, ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mso::types::equiv_r;

    fn edge_model() -> Model {
        let mut m = Model::new(2);
        m.insert("E", vec![0, 1]).unwrap();
        m.set_constant("c", 1).unwrap();
        m
    }

    #[test]
    fn union_with_empty() {
        let a = edge_model();
        let mut e = Model::new(0);
        e.declare("E", 2).unwrap();
        let u = model_disjoint_union(&[a.clone(), e]).unwrap();
        assert_eq!(u.size(), 2);
        assert_eq!(u.relation("0.E").unwrap().sorted(), vec![&vec![0, 1]]);
        assert_eq!(u.constant("0.c"), Some(1));
    }

    #[test]
    fn product_is_coordinatewise() {
        let a = edge_model();
        let p = model_product(&[a.clone(), a.clone()]).unwrap();
        assert_eq!(p.size(), 4);
        // (0, y) -> (1, y') for all y, y'.
        assert_eq!(p.relation("0.E").unwrap().tuples.len(), 4);
        assert!(p.holds("1.E", &[0, 3]));
        assert!(!p.holds("1.E", &[1, 0]));
        assert_eq!(p.constant("c|c"), Some(3));
    }

    #[test]
    fn restriction() {
        let a = edge_model();
        let (same, kept) = qf_restrict(&a, "x", &Formula::True).unwrap();
        assert_eq!(same, a);
        assert_eq!(kept, vec![0, 1]);
        let phi = Formula::parse_with_vars("(= x c)", &["x"], &[]).unwrap();
        let (one, _) = qf_restrict(&a, "x", &phi).unwrap();
        assert_eq!(one.size(), 1);
        let bad = Formula::parse_with_vars("(not (= x c))", &["x"], &[]).unwrap();
        assert!(matches!(qf_restrict(&a, "x", &bad), Err(Error::ConstantViolatesRestriction(_))));
    }

    #[test]
    fn interpretation() {
        let a = edge_model();
        let f = Interpretation::default()
            .relation("F", &["x", "y"], Formula::parse_with_vars("(E y x)", &["x", "y"], &[]).unwrap())
            .relation("L", &["x"], Formula::parse_with_vars("(E x x)", &["x"], &[]).unwrap())
            .constant("d", "c");
        let b = qf_interpret(&a, &f).unwrap();
        assert_eq!(b.relation("F").unwrap().sorted(), vec![&vec![1, 0]]);
        assert!(b.relation("L").unwrap().tuples.is_empty());
        assert_eq!(b.constant("d"), Some(1));
        assert!(equiv_r(&b, &b, 2).unwrap());
    }

    #[test]
    fn powerset_turns_union_into_product() {
        let mut b = Model::new(1);
        b.declare("P", 1).unwrap();
        let (_, _, ok) = check_powerset_union(&edge_model(), &b, &[2, 3].into()).unwrap();
        assert!(ok);
        let (_, _, ok) = check_powerset_union(&edge_model(), &edge_model(), &[2].into()).unwrap();
        assert!(ok);
    }
}
