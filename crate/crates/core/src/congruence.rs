//! Finitely presented congruences on the tropical rational function
//! semifield.
//!
//! A congruence is represented by its generating pairs. Every congruence
//! axiom preserves the locus where both sides agree pointwise, so the
//! variety of a presentation equals the variety of the congruence it
//! generates.

use crate::error::{Error, Result};
use crate::ratfn::RatFn;
use crate::scalar::{ExtRational, Rational};

pub type Pair = (RatFn, RatFn);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruencePresentation {
    n_vars: usize,
    gens: Vec<Pair>,
}

impl CongruencePresentation {
    pub fn new(n_vars: usize, gens: Vec<Pair>) -> Result<Self> {
        for (a, b) in &gens {
            for side in [a, b] {
                if side.n_vars() != n_vars {
                    return Err(Error::DimensionMismatch { expected: n_vars, got: side.n_vars() });
                }
            }
        }
        Ok(CongruencePresentation { n_vars, gens })
    }

    /// The trivial congruence Δ (no generators).
    pub fn trivial(n_vars: usize) -> Self {
        CongruencePresentation { n_vars, gens: Vec::new() }
    }

    /// A presentation of the improper congruence: `(0, -inf)` generates
    /// every pair.
    pub fn improper(n_vars: usize) -> Self {
        CongruencePresentation {
            n_vars,
            gens: vec![(RatFn::constant(n_vars, Rational::from_integer(0.into())), RatFn::bottom(n_vars))],
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn gens(&self) -> &[Pair] {
        &self.gens
    }

    /// The congruence generated by both presentations.
    pub fn join(&self, other: &CongruencePresentation) -> CongruencePresentation {
        assert_eq!(self.n_vars, other.n_vars);
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        CongruencePresentation { n_vars: self.n_vars, gens }
    }
}

/// `(f1, f2) ⋊ (g1, g2) = (f1⊙g1 ⊕ f2⊙g2, f1⊙g2 ⊕ f2⊙g1)`.
pub fn twisted_pair(a: &Pair, b: &Pair) -> Pair {
    let (f1, f2) = a;
    let (g1, g2) = b;
    (f1.mul(g1).add(&f2.mul(g2)), f1.mul(g2).add(&f2.mul(g1)))
}

/// Presentation of `E ⋊ F`: all pairwise twisted products of generators.
pub fn twisted_product(e: &CongruencePresentation, f: &CongruencePresentation) -> CongruencePresentation {
    twisted_product_with(e, f, twisted_pair)
}

/// Twisted product built with a caller-supplied pair operation.
pub fn twisted_product_with(
    e: &CongruencePresentation,
    f: &CongruencePresentation,
    twist: impl Fn(&Pair, &Pair) -> Pair,
) -> CongruencePresentation {
    assert_eq!(e.n_vars, f.n_vars);
    let gens = e.gens.iter().flat_map(|a| f.gens.iter().map(move |b| (a, b))).map(|(a, b)| twist(a, b)).collect();
    CongruencePresentation { n_vars: e.n_vars, gens }
}

/// Finds a generator `(f, f ⊙ t)` with `f ≠ -inf` and finite `t ≠ 0`; such a
/// generator forces an empty variety.
pub fn detect_scaling_pair(e: &CongruencePresentation) -> Option<(usize, ExtRational)> {
    e.gens.iter().enumerate().find_map(|(i, (f1, f2))| {
        if f1.is_bottom() || f2.is_bottom() {
            return None;
        }
        let quotient = f2.div(f1).ok()?;
        match quotient.as_constant()? {
            ExtRational::Finite(t) if t != Rational::from_integer(0.into()) => Some((i, ExtRational::Finite(t))),
            _ => None,
        }
    })
}

/// Finds a generator with exactly one side equal to `-inf`: the quotient is
/// then not a semifield and the variety is empty.
pub fn detect_bottom_pair(e: &CongruencePresentation) -> Option<usize> {
    e.gens.iter().position(|(a, b)| a.is_bottom() != b.is_bottom())
}

pub fn pair_equal(p: &Pair, q: &Pair) -> bool {
    !p.0.differs_on_probe(&q.0) && !p.1.differs_on_probe(&q.1) && p.0.is_equal(&q.0) && p.1.is_equal(&q.1)
}

fn push_unique(out: &mut Vec<Pair>, p: Pair) {
    if !out.iter().any(|q| pair_equal(q, &p)) {
        out.push(p);
    }
}

/// One round of congruence axioms applied to `pairs`: the pairs themselves,
/// their reversals, transitive composites, and pairwise ⊕ and ⊙
/// combinations. The result is deduplicated up to functional equality.
pub fn closure_step(pairs: &[Pair]) -> Vec<Pair> {
    let mut out = Vec::new();
    let mut both: Vec<Pair> = Vec::with_capacity(2 * pairs.len());
    for p in pairs {
        both.push(p.clone());
        both.push((p.1.clone(), p.0.clone()));
    }
    for p in &both {
        push_unique(&mut out, p.clone());
    }
    for p in &both {
        for q in &both {
            if !p.1.differs_on_probe(&q.0) && p.1.is_equal(&q.0) {
                push_unique(&mut out, (p.0.clone(), q.1.clone()));
            }
        }
    }
    for (i, a) in pairs.iter().enumerate() {
        for b in &pairs[i..] {
            push_unique(&mut out, (a.0.add(&b.0), a.1.add(&b.1)));
            push_unique(&mut out, (a.0.mul(&b.0), a.1.mul(&b.1)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qi, Finite};

    fn x(i: usize) -> RatFn {
        RatFn::var(2, i)
    }

    fn k(c: i64) -> RatFn {
        RatFn::constant(2, qi(c))
    }

    fn pres(gens: Vec<Pair>) -> CongruencePresentation {
        CongruencePresentation::new(2, gens).unwrap()
    }

    #[test]
    fn twisted_pair_examples() {
        let (l, r) = twisted_pair(&(x(0), k(0)), &(x(1), k(0)));
        assert!(l.is_equal(&x(0).mul(&x(1)).add(&k(0))));
        assert!(r.is_equal(&x(0).add(&x(1))));

        let f = x(0).add(&k(1));
        let (g1, g2) = (x(1), x(0).mul(&x(1)));
        let (l, r) = twisted_pair(&(f.clone(), f.clone()), &(g1.clone(), g2.clone()));
        let both = f.mul(&g1.add(&g2));
        assert!(l.is_equal(&both) && r.is_equal(&both));

        let (l, r) = twisted_pair(&(k(0), k(0)), &(g1.clone(), g2.clone()));
        assert!(l.is_equal(&r) && l.is_equal(&g1.add(&g2)));
    }

    #[test]
    fn twisted_product_examples() {
        let e = pres(vec![(x(0), k(0))]);
        let f = pres(vec![(x(1), k(0))]);
        let p = twisted_product(&e, &f);
        assert_eq!(p.gens().len(), 1);
        assert!(p.gens()[0].0.is_equal(&x(0).mul(&x(1)).add(&k(0))));

        assert!(twisted_product(&CongruencePresentation::trivial(2), &f).gens().is_empty());

        // (0 ⊙ 0 ⊕ 1 ⊙ 1, 0 ⊙ 1 ⊕ 1 ⊙ 0) = (2, 1)
        let c = pres(vec![(k(0), k(1))]);
        let p = twisted_product(&c, &c);
        assert!(p.gens()[0].0.is_equal(&k(2)));
        assert!(p.gens()[0].1.is_equal(&k(1)));
    }

    #[test]
    fn twisted_pair_is_symmetric() {
        let a = (x(0).add(&k(2)), x(1));
        let b = (k(-1), x(0).mul(&x(1)));
        let (l1, r1) = twisted_pair(&a, &b);
        let (l2, r2) = twisted_pair(&b, &a);
        assert!(l1.is_equal(&l2) && r1.is_equal(&r2));
    }

    #[test]
    fn scaling_detection() {
        assert_eq!(detect_scaling_pair(&pres(vec![(k(0), k(1))])), Some((0, Finite(qi(1)))));
        let f = x(0).add(&k(0));
        assert_eq!(
            detect_scaling_pair(&pres(vec![(x(1), x(0)), (f.clone(), f.shift(&qi(3)))])),
            Some((1, Finite(qi(3))))
        );
        assert_eq!(detect_scaling_pair(&pres(vec![(x(0), x(1))])), None);
        assert_eq!(detect_scaling_pair(&pres(vec![(f.clone(), f.clone())])), None);
    }

    #[test]
    fn bottom_detection() {
        let bot = RatFn::bottom(2);
        assert_eq!(detect_bottom_pair(&pres(vec![(x(0), bot.clone())])), Some(0));
        assert_eq!(detect_bottom_pair(&pres(vec![(x(0), x(1))])), None);
        assert_eq!(detect_bottom_pair(&pres(vec![(bot.clone(), bot)])), None);
        assert_eq!(detect_bottom_pair(&CongruencePresentation::improper(2)), Some(0));
    }

    #[test]
    fn closure_step_examples() {
        let out = closure_step(&[(x(0), k(0))]);
        assert!(out.iter().any(|p| pair_equal(p, &(x(0).mul(&x(0)), k(0)))));
        assert!(out.iter().any(|p| pair_equal(p, &(x(0), k(0)))));
        assert!(out.iter().any(|p| pair_equal(p, &(k(0), x(0)))));

        let out = closure_step(&[(k(1), k(2)), (k(2), k(3))]);
        assert!(out.iter().any(|p| pair_equal(p, &(k(1), k(3)))));

        let out = closure_step(&[(x(0), x(0)), (x(1).add(&k(1)), x(1).add(&k(1)))]);
        assert!(out.iter().all(|(a, b)| a.is_equal(b)));
    }
}
