//! Syntactic quotients, aperiodicity and the star-free profile test.

use super::{
    add_source, check_arity, drop_last, elements, forget_all, oplus, swap, Elem, FiniteAlgebra, Homomorphism,
    Language, QuotientAlgebra, Recogniser,
};
use crate::error::{Error, Result};
use crate::ranked::Ranked;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

pub struct SyntacticQuotient {
    pub algebra: Arc<QuotientAlgebra>,
    pub language: Language,
    /// Universe sizes of the input algebra, arities `0..=bound`.
    pub base_sizes: Vec<usize>,
    pub sizes: Vec<usize>,
}

/// Merges elements of each arity up to `bound` that no parallel context
/// separates: `a ∼ b` iff for every `c` of the same arity, `a ⊕ c` and
/// `b ⊕ c` with all sources forgotten are both accepted or both rejected.
///
/// The partition is then checked against the generating operations
/// (`⊕ c`, adding a source, swapping adjacent sources, dropping the last
/// source) at every arity up to `bound`; a failure is reported as
/// [`Error::NotACongruence`].
pub fn syntactic_quotient(lang: &Language, bound: usize) -> Result<SyntacticQuotient> {
    let r = lang.recogniser()?;
    let alg = r.algebra();
    check_arity(&**alg, bound)?;
    let mut class_of: Vec<Vec<usize>> = Vec::new();
    for n in 0..=bound {
        let elems = elements(&**alg, n);
        let mut signatures: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut classes = Vec::with_capacity(elems.len());
        for &a in &elems {
            let mut sig = Vec::with_capacity(elems.len() + 1);
            if n == 0 {
                sig.push(r.accepts_element(a));
            }
            for &c in &elems {
                sig.push(r.accepts_element(forget_all(&**alg, oplus(&**alg, a, c)?)?));
            }
            let next = signatures.len();
            classes.push(*signatures.entry(sig).or_insert(next));
        }
        class_of.push(classes);
    }
    verify_congruence(&**alg, &class_of, bound)?;
    let quotient = Arc::new(QuotientAlgebra::new(alg.clone(), class_of)?);
    let mut images = BTreeMap::new();
    for (name, &img) in r.hom.images() {
        check_arity(&*quotient, img.arity)?;
        images.insert(name.clone(), quotient.class_of(img));
    }
    let hom = Homomorphism::new(r.hom.alphabet().clone(), quotient.clone(), images)?;
    let accepting: Vec<usize> = r.accepting.iter().map(|&i| quotient.class_of(Elem::new(0, i)).index).collect();
    let recogniser = Recogniser::new(hom, accepting)?;
    let base_sizes = (0..=bound).map(|n| alg.size(n)).collect();
    let sizes = (0..=bound).map(|n| quotient.size(n)).collect();
    Ok(SyntacticQuotient {
        algebra: quotient,
        language: Language {
            name: format!("{} (syntactic)", lang.name),
            alphabet: lang.alphabet.clone(),
            predicate: lang.predicate.clone(),
            recogniser: Some(recogniser),
        },
        base_sizes,
        sizes,
    })
}

fn verify_congruence(alg: &dyn FiniteAlgebra, class_of: &[Vec<usize>], bound: usize) -> Result<()> {
    let class = |e: Elem| class_of[e.arity][e.index];
    for n in 0..=bound {
        let elems = elements(alg, n);
        let mut first: HashMap<usize, Elem> = HashMap::new();
        for &a in &elems {
            let Some(&rep) = first.get(&class(a)) else {
                first.insert(class(a), a);
                continue;
            };
            let mut ops: Vec<(String, Box<dyn Fn(Elem) -> Result<Elem> + '_>)> = Vec::new();
            for &c in &elems {
                ops.push((format!("⊕ {}", alg.describe(c)), Box::new(move |x| oplus(alg, x, c))));
            }
            if n < bound {
                ops.push(("adding a source".into(), Box::new(|x| add_source(alg, x))));
            }
            for i in 0..n.saturating_sub(1) {
                ops.push((format!("swapping sources {} and {}", i + 1, i + 2), Box::new(move |x| swap(alg, x, i))));
            }
            if n > 0 {
                ops.push(("dropping the last source".into(), Box::new(|x| drop_last(alg, x))));
            }
            for (what, op) in &ops {
                if class(op(a)?) != class(op(rep)?) {
                    return Err(Error::NotACongruence(format!(
                        "{} and {} (arity {n}) are merged but differ after {what}",
                        alg.describe(rep),
                        alg.describe(a)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// `s^k` under `⊕`, for `k ≥ 1`.
pub fn power(alg: &dyn FiniteAlgebra, s: Elem, k: usize) -> Result<Elem> {
    if k == 0 {
        return Err(Error::RangeError("powers start at 1".into()));
    }
    let mut x = s;
    for _ in 1..k {
        x = oplus(alg, x, s)?;
    }
    Ok(x)
}

/// `s^exponent = s^(exponent + 1)`.
#[derive(Clone, Debug, Serialize)]
pub struct PowerCertificate {
    pub element: Elem,
    pub exponent: usize,
}

/// `s^start = s^(start + period)` while `s^start ≠ s^(start + 1)`: the
/// powers of `s` cycle with period at least two and never stabilise.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodWitness {
    pub element: Elem,
    pub description: String,
    pub start: usize,
    pub period: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AperiodicReport {
    pub aperiodic: bool,
    pub bound: usize,
    pub certificates: Vec<PowerCertificate>,
    pub witness: Option<PeriodWitness>,
}

/// Checks `s^k = s^(k+1)` for some `k ≤ |A_n|`, for every element of every
/// arity up to `bound`. Stops at the first element that fails.
pub fn is_aperiodic(alg: &dyn FiniteAlgebra, bound: usize) -> Result<AperiodicReport> {
    check_arity(alg, bound)?;
    let mut certificates = Vec::new();
    for n in 0..=bound {
        for s in elements(alg, n) {
            let mut seen: HashMap<Elem, usize> = HashMap::new();
            let mut x = s;
            let mut k = 1;
            let (start, period) = loop {
                if let Some(&j) = seen.get(&x) {
                    break (j, k - j);
                }
                seen.insert(x, k);
                x = oplus(alg, x, s)?;
                k += 1;
            };
            if period == 1 {
                certificates.push(PowerCertificate {
                    element: s,
                    exponent: start,
                });
            } else {
                return Ok(AperiodicReport {
                    aperiodic: false,
                    bound,
                    certificates,
                    witness: Some(PeriodWitness {
                        element: s,
                        description: alg.describe(s),
                        start,
                        period,
                    }),
                });
            }
        }
    }
    Ok(AperiodicReport {
        aperiodic: true,
        bound,
        certificates,
        witness: None,
    })
}

/// Rechecks a report from scratch: a positive report must certify every
/// element up to its bound, a negative one must carry a valid witness.
pub fn verify_aperiodic_report(alg: &dyn FiniteAlgebra, report: &AperiodicReport) -> Result<bool> {
    if report.aperiodic {
        let mut covered: HashMap<Elem, usize> = HashMap::new();
        for c in &report.certificates {
            covered.insert(c.element, c.exponent);
        }
        for n in 0..=report.bound {
            for s in elements(alg, n) {
                let Some(&k) = covered.get(&s) else { return Ok(false) };
                if k == 0 || power(alg, s, k)? != power(alg, s, k + 1)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    } else {
        let Some(w) = &report.witness else { return Ok(false) };
        if w.start == 0 || w.period < 2 || w.element.arity() > report.bound {
            return Ok(false);
        }
        let x = power(alg, w.element, w.start)?;
        Ok(x == power(alg, w.element, w.start + w.period)? && x != power(alg, w.element, w.start + 1)?)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StarFreeReport {
    pub star_free: bool,
    pub base_sizes: Vec<usize>,
    pub quotient_sizes: Vec<usize>,
    pub aperiodicity: AperiodicReport,
}

/// Syntactic quotient up to arity `n0`, then aperiodicity up to `n0`.
pub fn decide_star_free_profile(lang: &Language, n0: usize) -> Result<StarFreeReport> {
    let q = syntactic_quotient(lang, n0)?;
    let aperiodicity = is_aperiodic(&*q.algebra, n0)?;
    Ok(StarFreeReport {
        star_free: aperiodicity.aperiodic,
        base_sizes: q.base_sizes,
        quotient_sizes: q.sizes,
        aperiodicity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{divisibility_language, threshold_language, DivisibilityAlgebra, ThresholdAlgebra, TrivialAlgebra};
    use crate::ranked::{RankedAlphabet, Symbol};

    fn alphabet() -> (RankedAlphabet, Symbol) {
        let a = RankedAlphabet::new([("a", 0), ("b", 1)]).unwrap();
        let s = a.get("a").unwrap().clone();
        (a, s)
    }

    #[test]
    fn mod2_is_periodic() {
        let alg = DivisibilityAlgebra { modulus: 2, cap: 1 };
        let r = is_aperiodic(&alg, 0).unwrap();
        assert!(!r.aperiodic);
        let w = r.witness.as_ref().unwrap();
        assert_eq!(w.element, Elem::new(0, 1));
        assert_eq!(w.period, 2);
        assert!(verify_aperiodic_report(&alg, &r).unwrap());
    }

    #[test]
    fn saturating_counter_is_aperiodic() {
        let alg = ThresholdAlgebra { limit: 3, cap: 2 };
        let r = is_aperiodic(&alg, 2).unwrap();
        assert!(r.aperiodic);
        assert!(verify_aperiodic_report(&alg, &r).unwrap());
        assert!(is_aperiodic(&TrivialAlgebra { cap: 2 }, 2).unwrap().aperiodic);
    }

    #[test]
    fn quotient_of_mod2() {
        let (alph, a) = alphabet();
        let lang = divisibility_language(&a, 2, &alph, 1).unwrap();
        let q = syntactic_quotient(&lang, 1).unwrap();
        assert_eq!(q.sizes, vec![2, 2]);
        assert!(!decide_star_free_profile(&lang, 1).unwrap().star_free);
        let t = threshold_language(&a, 2, &alph, 1).unwrap();
        assert!(decide_star_free_profile(&t, 1).unwrap().star_free);
    }
}
