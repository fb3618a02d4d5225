//! Random models and formulas for property tests.

use super::formula::{Formula, SetTerm, Term};
use super::model::{Model, Vocabulary};
use rand::seq::SliceRandom;
use rand::Rng;

/// A model over `vocab` with `size` elements; each tuple is put in each
/// relation with probability `density`, constants are uniform. With
/// constants and `size = 0` the model cannot exist, so one element is used.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R, vocab: &Vocabulary, size: usize, density: f64) -> Model {
    let size = if vocab.constants.is_empty() { size } else { size.max(1) };
    let mut m = Model::new(size);
    for (name, &n) in &vocab.relations {
        m.declare(name, n).expect("fresh relation");
        if size == 0 && n > 0 {
            continue;
        }
        let mut t = vec![0usize; n];
        'tuples: loop {
            if rng.gen_bool(density) {
                m.insert(name, t.clone()).expect("tuple in range");
            }
            for i in 0..n {
                t[i] += 1;
                if t[i] < size {
                    continue 'tuples;
                }
                t[i] = 0;
            }
            break;
        }
    }
    for c in &vocab.constants {
        m.set_constant(c, rng.gen_range(0..size)).expect("constant in range");
    }
    m
}

/// Generates formulas over a vocabulary. Counting atoms use `moduli`; set
/// quantifiers and set atoms appear only when `monadic` is set.
pub struct FormulaSampler<'a> {
    pub vocab: &'a Vocabulary,
    pub moduli: Vec<usize>,
    pub monadic: bool,
    /// Maximal connective depth.
    pub depth: usize,
}

impl FormulaSampler<'_> {
    /// A sentence of quantifier rank at most `rank`.
    pub fn sentence<R: Rng + ?Sized>(&self, rng: &mut R, rank: usize) -> Formula {
        let mut fo = Vec::new();
        let mut so = Vec::new();
        self.formula(rng, rank, self.depth, &mut fo, &mut so)
    }

    /// A quantifier-free formula in the given free variables.
    pub fn quantifier_free<R: Rng + ?Sized>(&self, rng: &mut R, vars: &[&str]) -> Formula {
        let mut fo: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        let mut so = Vec::new();
        let sampler = FormulaSampler {
            vocab: self.vocab,
            moduli: Vec::new(),
            monadic: false,
            depth: self.depth,
        };
        sampler.formula(rng, 0, self.depth, &mut fo, &mut so)
    }

    fn formula<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        rank: usize,
        depth: usize,
        fo: &mut Vec<String>,
        so: &mut Vec<String>,
    ) -> Formula {
        if depth == 0 || rng.gen_bool(0.25) {
            return self.atom(rng, fo, so);
        }
        let choice = rng.gen_range(0..if rank > 0 { 5 } else { 3 });
        match choice {
            0 => Formula::not(self.formula(rng, rank, depth - 1, fo, so)),
            1 | 2 => {
                let parts = vec![
                    self.formula(rng, rank, depth - 1, fo, so),
                    self.formula(rng, rank, depth - 1, fo, so),
                ];
                if choice == 1 {
                    Formula::And(parts)
                } else {
                    Formula::Or(parts)
                }
            }
            _ => {
                let set = self.monadic && rng.gen_bool(0.5);
                let existential = rng.gen_bool(0.5);
                if set {
                    let x = format!("X{}", so.len());
                    so.push(x.clone());
                    let body = self.formula(rng, rank - 1, depth - 1, fo, so);
                    so.pop();
                    if existential {
                        Formula::exists_set(&x, body)
                    } else {
                        Formula::forall_set(&x, body)
                    }
                } else {
                    let x = format!("x{}", fo.len());
                    fo.push(x.clone());
                    let body = self.formula(rng, rank - 1, depth - 1, fo, so);
                    fo.pop();
                    if existential {
                        Formula::exists(&x, body)
                    } else {
                        Formula::forall(&x, body)
                    }
                }
            }
        }
    }

    fn term<R: Rng + ?Sized>(&self, rng: &mut R, fo: &[String]) -> Option<Term> {
        let n = fo.len() + self.vocab.constants.len();
        if n == 0 {
            return None;
        }
        let i = rng.gen_range(0..n);
        Some(match fo.get(i) {
            Some(x) => Term::Var(x.clone()),
            None => Term::Const(self.vocab.constants.iter().nth(i - fo.len()).expect("in range").clone()),
        })
    }

    fn set<R: Rng + ?Sized>(&self, rng: &mut R, so: &[String]) -> SetTerm {
        if !so.is_empty() && rng.gen_bool(0.6) {
            return SetTerm::Var(so.choose(rng).expect("nonempty").clone());
        }
        let inner = FormulaSampler {
            vocab: self.vocab,
            moduli: Vec::new(),
            monadic: false,
            depth: 2,
        };
        SetTerm::filter("z", inner.quantifier_free(rng, &["z"]))
    }

    fn atom<R: Rng + ?Sized>(&self, rng: &mut R, fo: &[String], so: &[String]) -> Formula {
        for _ in 0..16 {
            match rng.gen_range(0..if self.monadic { 8 } else { 4 }) {
                0 => {
                    return if rng.gen_bool(0.5) { Formula::True } else { Formula::False };
                }
                1 | 2 => {
                    let rels: Vec<(&String, &usize)> = self.vocab.relations.iter().collect();
                    let Some(&(r, &n)) = rels.choose(rng) else { continue };
                    let terms: Option<Vec<Term>> = (0..n).map(|_| self.term(rng, fo)).collect();
                    if let Some(ts) = terms {
                        return Formula::Rel(r.clone(), ts);
                    }
                }
                3 => {
                    if let (Some(a), Some(b)) = (self.term(rng, fo), self.term(rng, fo)) {
                        return Formula::Eq(a, b);
                    }
                }
                4 => {
                    if let Some(t) = self.term(rng, fo) {
                        return Formula::In(t, self.set(rng, so));
                    }
                }
                5 => return Formula::Subset(self.set(rng, so), self.set(rng, so)),
                6 => return Formula::Singleton(self.set(rng, so)),
                _ => {
                    if let Some(&m) = self.moduli.choose(rng) {
                        return Formula::Mod(self.set(rng, so), rng.gen_range(0..m), m);
                    }
                }
            }
        }
        Formula::True
    }
}
