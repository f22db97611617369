//! Tropical polynomials read as functions on `Q^n`.
//!
//! Two polynomials define the same function exactly when their canonical
//! forms (essential terms only) coincide, so the canonical form is the
//! representative of a class in the polynomial function semiring.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::linear::{feasible_point, AffineForm, Constraint};
use crate::scalar::{ExtRational, Rational};

/// Exponent vector of a monomial.
pub type Exponent = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropPoly {
    n_vars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

/// Outcome of an exact functional-equality test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EqualityVerdict {
    Equal,
    /// A point where the two functions take different values.
    Witness(Vec<Rational>),
}

impl EqualityVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, EqualityVerdict::Equal)
    }
}

impl TropPoly {
    /// The `-inf` polynomial (no terms).
    pub fn bottom(n_vars: usize) -> Self {
        TropPoly { n_vars, terms: BTreeMap::new() }
    }

    pub fn constant(n_vars: usize, c: Rational) -> Self {
        Self::monomial(vec![0; n_vars], c)
    }

    pub fn monomial(exp: Exponent, coef: Rational) -> Self {
        let n_vars = exp.len();
        TropPoly { n_vars, terms: BTreeMap::from([(exp, coef)]) }
    }

    /// The variable `X_i` (0-based `i`).
    pub fn var(n_vars: usize, i: usize) -> Self {
        let mut exp = vec![0; n_vars];
        exp[i] = 1;
        Self::monomial(exp, Rational::zero())
    }

    /// Collects terms; a repeated exponent keeps its largest coefficient.
    pub fn from_terms(n_vars: usize, terms: impl IntoIterator<Item = (Exponent, Rational)>) -> Self {
        let mut p = TropPoly::bottom(n_vars);
        for (e, c) in terms {
            assert_eq!(e.len(), n_vars, "exponent length must equal n_vars");
            p.insert_max(e, c);
        }
        p
    }

    fn insert_max(&mut self, e: Exponent, c: Rational) {
        match self.terms.get_mut(&e) {
            Some(old) if *old >= c => {}
            Some(old) => *old = c,
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Rational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_bottom(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_bottom()
    }

    /// The constant value when the polynomial is a single constant term.
    pub fn as_constant(&self) -> Option<&Rational> {
        match self.terms.iter().next() {
            Some((e, c)) if self.terms.len() == 1 && e.iter().all(|&k| k == 0) => Some(c),
            _ => None,
        }
    }

    /// `max_e (c_e + e·x)`, or `-inf` for the empty polynomial.
    pub fn eval(&self, x: &[Rational]) -> ExtRational {
        assert_eq!(x.len(), self.n_vars, "point dimension");
        self.terms.iter().map(|(e, c)| term_value(e, c, x)).max().map_or(ExtRational::NegInf, ExtRational::Finite)
    }

    /// Tropical sum, canonicalized.
    pub fn add(&self, other: &TropPoly) -> TropPoly {
        self.add_raw(other).canonicalize()
    }

    /// Tropical product, canonicalized.
    pub fn mul(&self, other: &TropPoly) -> TropPoly {
        self.mul_raw(other).canonicalize()
    }

    pub(crate) fn add_raw(&self, other: &TropPoly) -> TropPoly {
        assert_eq!(self.n_vars, other.n_vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_max(e.clone(), c.clone());
        }
        out
    }

    pub(crate) fn mul_raw(&self, other: &TropPoly) -> TropPoly {
        assert_eq!(self.n_vars, other.n_vars);
        let mut out = TropPoly::bottom(self.n_vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert_max(e, c1 + c2);
            }
        }
        out
    }

    /// Tropical power `self^{⊙k}` by repeated squaring.
    pub fn pow(&self, k: u32) -> TropPoly {
        let mut result = TropPoly::constant(self.n_vars, Rational::zero());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Adds `t` to every coefficient (multiplication by the constant `t`).
    pub fn shift(&self, t: &Rational) -> TropPoly {
        TropPoly { n_vars: self.n_vars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c + t)).collect() }
    }

    /// Decides whether the term with exponent `e` strictly dominates every
    /// other term somewhere in `Q^n`, returning such a point.
    ///
    /// Only constraints from terms that beat the candidate at the current
    /// trial point are added, so systems stay small; an infeasible subset
    /// already proves the full strict system infeasible.
    pub fn essential_witness(&self, e: &[u32]) -> Option<Vec<Rational>> {
        let c = self.terms.get(e).expect("exponent must be a term of the polynomial");
        let others: Vec<(&Exponent, &Rational)> = self.terms.iter().filter(|(e2, _)| e2.as_slice() != e).collect();
        let mut active: Vec<Constraint> = Vec::new();
        loop {
            let x = feasible_point(self.n_vars, &active)?;
            let target = term_value(e, c, &x);
            let rival = others
                .iter()
                .map(|(e2, c2)| (term_value(e2, c2, &x), *e2, *c2))
                .filter(|(v, _, _)| *v >= target)
                .max_by(|a, b| a.0.cmp(&b.0));
            match rival {
                None => return Some(x),
                Some((_, e2, c2)) => active.push(Constraint::gt(dominance_form(e, c, e2, c2))),
            }
        }
    }

    pub fn is_essential(&self, e: &[u32]) -> bool {
        self.essential_witness(e).is_some()
    }

    /// Sub-polynomial of essential terms; same function, idempotent.
    pub fn canonicalize(&self) -> TropPoly {
        if self.terms.len() <= 1 {
            return self.clone();
        }
        TropPoly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| self.is_essential(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.terms.keys().all(|e| self.is_essential(e))
    }

    /// Exact functional equality on `Q^n` with a witness point on failure.
    pub fn fn_equal(&self, other: &TropPoly) -> EqualityVerdict {
        assert_eq!(self.n_vars, other.n_vars);
        let f = self.canonicalize();
        let g = other.canonicalize();
        if f.terms == g.terms {
            return EqualityVerdict::Equal;
        }
        if f.is_bottom() || g.is_bottom() {
            return EqualityVerdict::Witness(vec![Rational::zero(); self.n_vars]);
        }
        let w = separating_point(&g, &f)
            .or_else(|| separating_point(&f, &g))
            .expect("distinct canonical forms differ as functions");
        EqualityVerdict::Witness(w)
    }
}

fn term_value(e: &[u32], c: &Rational, x: &[Rational]) -> Rational {
    e.iter()
        .zip(x)
        .filter(|(k, _)| **k != 0)
        .fold(c.clone(), |acc, (k, xi)| acc + xi * Rational::from_integer((*k).into()))
}

/// `(c1 + e1·x) - (c2 + e2·x)` as an affine form.
fn dominance_form(e1: &[u32], c1: &Rational, e2: &[u32], c2: &Rational) -> AffineForm {
    AffineForm::new(
        c1 - c2,
        e1.iter().zip(e2).map(|(a, b)| Rational::from_integer((i64::from(*a) - i64::from(*b)).into())).collect(),
    )
}

/// A point where `g` and `f` differ, searched inside the open region where
/// some term of `g` absent from `f` is strictly dominant.
fn separating_point(g: &TropPoly, f: &TropPoly) -> Option<Vec<Rational>> {
    let n = g.n_vars;
    for (e, c) in &g.terms {
        if f.terms.get(e) == Some(c) {
            continue;
        }
        let region: Vec<Constraint> = g
            .terms
            .iter()
            .filter(|(e2, _)| *e2 != e)
            .map(|(e2, c2)| Constraint::gt(dominance_form(e, c, e2, c2)))
            .collect();
        // g > f there: the term beats every term of f.
        let mut below = region.clone();
        below.extend(f.terms.iter().map(|(e2, c2)| Constraint::gt(dominance_form(e, c, e2, c2))));
        if let Some(x) = feasible_point(n, &below) {
            return Some(x);
        }
        // f > g there: some term of f beats it.
        for (e2, c2) in &f.terms {
            let mut above = region.clone();
            above.push(Constraint::gt(dominance_form(e2, c2, e, c)));
            if let Some(x) = feasible_point(n, &above) {
                return Some(x);
            }
        }
    }
    None
}

impl fmt::Display for TropPoly {
    /// Prints in the expression grammar, highest exponents first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<String> = self.terms.iter().rev().map(|(e, c)| render_term(e, c)).collect();
        match rendered.len() {
            0 => f.write_str("-inf"),
            1 => f.write_str(&rendered[0]),
            _ => write!(f, "max({})", rendered.join(", ")),
        }
    }
}

fn render_term(e: &[u32], c: &Rational) -> String {
    let mut parts = Vec::new();
    if !c.is_zero() || e.iter().all(|&k| k == 0) {
        parts.push(c.to_string());
    }
    for (i, &k) in e.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(format!("x{}", i + 1)),
            k => parts.push(format!("{k}*x{}", i + 1)),
        }
    }
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi, Finite, NegInf};

    fn uni(terms: &[(u32, Rational)]) -> TropPoly {
        TropPoly::from_terms(1, terms.iter().map(|(e, c)| (vec![*e], c.clone())))
    }

    /// Grid oracle: does term `e` strictly beat all others at some grid point
    /// of {-10, ..., 10} with step 1/4?
    fn grid_essential(p: &TropPoly, e: u32) -> Option<Rational> {
        let c = &p.terms()[&vec![e]];
        (-40..=40).map(|i| q(i, 4)).find(|x| {
            let v = c + x * qi(e as i64);
            p.terms().iter().filter(|(e2, _)| e2[0] != e).all(|(e2, c2)| c2 + x * qi(e2[0] as i64) < v)
        })
    }

    #[test]
    fn eval_examples() {
        let p = uni(&[(3, qi(0)), (2, qi(0)), (1, qi(0)), (0, qi(0))]);
        assert_eq!(p.eval(&[qi(1)]), Finite(qi(3)));
        assert_eq!(p.eval(&[qi(-1)]), Finite(qi(0)));
        assert_eq!(TropPoly::bottom(1).eval(&[qi(5)]), NegInf);
    }

    #[test]
    fn non_cancellative_products() {
        let x_plus_0 = uni(&[(1, qi(0)), (0, qi(0))]);
        let a = uni(&[(2, qi(0)), (1, qi(-2)), (0, qi(0))]);
        let b = uni(&[(2, qi(0)), (1, qi(-1)), (0, qi(0))]);
        let expanded = uni(&[(3, qi(0)), (2, qi(0)), (1, qi(0)), (0, qi(0))]);
        let pa = x_plus_0.mul_raw(&a);
        let pb = x_plus_0.mul_raw(&b);
        // Raw expansions match the hand-expanded four-term form.
        assert_eq!(pa, expanded);
        assert_eq!(pb, expanded);
        assert!(pa.fn_equal(&expanded).is_equal());
        assert!(x_plus_0.mul(&a).fn_equal(&x_plus_0.mul(&b)).is_equal());
        // The cofactors are distinct formal polynomials but, with their
        // middle terms inessential, the same function X^2 ⊕ 0.
        assert_ne!(a, b);
        assert_eq!(a.canonicalize(), b.canonicalize());
    }

    #[test]
    fn add_with_bottom() {
        let f = uni(&[(2, qi(1)), (0, qi(-3))]);
        assert_eq!(f.add(&TropPoly::bottom(1)), f.canonicalize());
    }

    #[test]
    fn essential_examples() {
        let p = uni(&[(2, qi(0)), (1, qi(-2)), (0, qi(0))]);
        assert_eq!(p.essential_witness(&[1]), None);
        assert_eq!(grid_essential(&p, 1), None);

        let p = uni(&[(2, qi(0)), (1, qi(1)), (0, qi(0))]);
        assert_eq!(p.essential_witness(&[1]), Some(vec![qi(0)]));
        // The grid oracle agrees: 1 + x beats max(2x, 0) on (-1, 1).
        assert!(grid_essential(&p, 1).is_some());

        let single = uni(&[(3, qi(0))]);
        assert!(single.is_essential(&[3]));
    }

    #[test]
    fn canonicalize_examples() {
        let p = uni(&[(3, qi(0)), (2, qi(0)), (1, qi(0)), (0, qi(0))]);
        let c = p.canonicalize();
        assert_eq!(c, uni(&[(3, qi(0)), (0, qi(0))]));
        for i in -40..=40 {
            let x = [q(i, 4)];
            assert_eq!(p.eval(&x), c.eval(&x));
        }
        let p = uni(&[(2, qi(0)), (1, qi(1)), (0, qi(0))]);
        assert_eq!(p.canonicalize(), p);
        assert_eq!(TropPoly::bottom(2).canonicalize(), TropPoly::bottom(2));
    }

    #[test]
    fn fn_equal_witness() {
        let f = uni(&[(2, qi(0)), (0, qi(0))]);
        let g = uni(&[(2, qi(0)), (1, qi(1)), (0, qi(0))]);
        match f.fn_equal(&g) {
            EqualityVerdict::Witness(x) => {
                assert_eq!(x, vec![qi(0)]);
                assert_eq!(f.eval(&x), Finite(qi(0)));
                assert_eq!(g.eval(&x), Finite(qi(1)));
            }
            EqualityVerdict::Equal => panic!("expected a witness"),
        }
        assert!(g.fn_equal(&g).is_equal());
    }

    #[test]
    fn witness_when_coefficients_differ() {
        // Same exponent sets, one coefficient changed.
        let f = TropPoly::from_terms(2, [(vec![1, 0], qi(0)), (vec![0, 1], qi(0)), (vec![0, 0], qi(0))]);
        let g = TropPoly::from_terms(2, [(vec![1, 0], qi(0)), (vec![0, 1], qi(1)), (vec![0, 0], qi(0))]);
        let EqualityVerdict::Witness(x) = f.fn_equal(&g) else { panic!() };
        assert_ne!(f.eval(&x), g.eval(&x));
    }

    #[test]
    fn display_uses_expression_grammar() {
        let p = TropPoly::from_terms(2, [(vec![2, 1], q(-3, 2)), (vec![0, 0], qi(0))]);
        assert_eq!(p.to_string(), "max(-3/2 + 2*x1 + x2, 0)");
        assert_eq!(TropPoly::bottom(1).to_string(), "-inf");
    }
}
