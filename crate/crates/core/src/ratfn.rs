//! The tropical rational function semifield: fractions of canonical
//! polynomials compared by cross-multiplication.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{EqualityVerdict, TropPoly};
use crate::scalar::{qi, ExtRational, Rational};

/// `num ⊘ den`, both canonical, `den` never the `-inf` polynomial.
///
/// The `-inf` element is stored as `-inf ⊘ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: TropPoly,
    den: TropPoly,
}

impl RatFn {
    pub fn new(num: TropPoly, den: TropPoly) -> Result<Self> {
        if num.n_vars() != den.n_vars() {
            return Err(Error::DimensionMismatch { expected: num.n_vars(), got: den.n_vars() });
        }
        if den.is_bottom() {
            return Err(Error::BottomInverse);
        }
        Ok(Self::from_parts(num.canonicalize(), den.canonicalize()))
    }

    fn from_parts(num: TropPoly, den: TropPoly) -> Self {
        if num.is_bottom() {
            return RatFn::bottom(num.n_vars());
        }
        RatFn { num, den }
    }

    pub fn bottom(n_vars: usize) -> Self {
        RatFn { num: TropPoly::bottom(n_vars), den: TropPoly::constant(n_vars, Rational::zero()) }
    }

    pub fn constant(n_vars: usize, c: Rational) -> Self {
        RatFn::from_poly(TropPoly::constant(n_vars, c))
    }

    pub fn from_ext(n_vars: usize, c: &ExtRational) -> Self {
        match c {
            ExtRational::NegInf => RatFn::bottom(n_vars),
            ExtRational::Finite(c) => RatFn::constant(n_vars, c.clone()),
        }
    }

    pub fn var(n_vars: usize, i: usize) -> Self {
        RatFn::from_poly(TropPoly::var(n_vars, i))
    }

    pub fn from_poly(p: TropPoly) -> Self {
        let n = p.n_vars();
        RatFn::from_parts(p.canonicalize(), TropPoly::constant(n, Rational::zero()))
    }

    pub fn n_vars(&self) -> usize {
        self.num.n_vars()
    }

    pub fn num(&self) -> &TropPoly {
        &self.num
    }

    pub fn den(&self) -> &TropPoly {
        &self.den
    }

    pub fn is_bottom(&self) -> bool {
        self.num.is_bottom()
    }

    /// `num(x) - den(x)`; `-inf` exactly for the bottom element.
    pub fn eval(&self, x: &[Rational]) -> ExtRational {
        match (self.num.eval(x), self.den.eval(x)) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a - b),
            (ExtRational::NegInf, _) => ExtRational::NegInf,
            (_, ExtRational::NegInf) => unreachable!("denominator is finite on Q^n"),
        }
    }

    /// `(f_n ⊙ g_d ⊕ g_n ⊙ f_d) ⊘ (f_d ⊙ g_d)`
    pub fn add(&self, other: &RatFn) -> RatFn {
        assert_eq!(self.n_vars(), other.n_vars());
        if self.is_bottom() {
            return other.clone();
        }
        if other.is_bottom() {
            return self.clone();
        }
        if self.den == other.den {
            return RatFn::from_parts(self.num.add(&other.num), self.den.clone());
        }
        let num = self.num.mul_raw(&other.den).add_raw(&other.num.mul_raw(&self.den));
        RatFn::from_parts(num.canonicalize(), self.den.mul(&other.den))
    }

    pub fn mul(&self, other: &RatFn) -> RatFn {
        assert_eq!(self.n_vars(), other.n_vars());
        if self.is_bottom() || other.is_bottom() {
            return RatFn::bottom(self.n_vars());
        }
        RatFn::from_parts(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Result<RatFn> {
        if self.is_bottom() {
            return Err(Error::BottomInverse);
        }
        Ok(RatFn { num: self.den.clone(), den: self.num.clone() })
    }

    pub fn div(&self, other: &RatFn) -> Result<RatFn> {
        Ok(self.mul(&other.inv()?))
    }

    /// Tropical power with an integer exponent; negative powers invert.
    pub fn pow(&self, k: i64) -> Result<RatFn> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let k = u32::try_from(k.unsigned_abs()).expect("exponent fits in u32");
        if k == 0 {
            return Ok(RatFn::constant(self.n_vars(), Rational::zero()));
        }
        if base.is_bottom() {
            return Ok(base);
        }
        Ok(RatFn::from_parts(base.num.pow(k), base.den.pow(k)))
    }

    /// Adds the constant `t` (multiplication by `t` in the semifield).
    pub fn shift(&self, t: &Rational) -> RatFn {
        if self.is_bottom() {
            return self.clone();
        }
        RatFn { num: self.num.shift(t), den: self.den.clone() }
    }

    /// Exact equality: `f_n ⊙ g_d` versus `g_n ⊙ f_d`.
    ///
    /// A witness of the cross products is a witness for the fractions since
    /// denominators are finite on `Q^n`.
    pub fn equal(&self, other: &RatFn) -> EqualityVerdict {
        assert_eq!(self.n_vars(), other.n_vars());
        if self == other {
            return EqualityVerdict::Equal;
        }
        let lhs = self.num.mul_raw(&other.den);
        let rhs = other.num.mul_raw(&self.den);
        lhs.fn_equal(&rhs)
    }

    pub fn is_equal(&self, other: &RatFn) -> bool {
        self.equal(other).is_equal()
    }

    /// The constant value `t` if this function is constant.
    pub fn as_constant(&self) -> Option<ExtRational> {
        if self.is_bottom() {
            return Some(ExtRational::NegInf);
        }
        let n = self.n_vars();
        let t = match self.eval(&vec![Rational::zero(); n]) {
            ExtRational::Finite(t) => t,
            ExtRational::NegInf => unreachable!(),
        };
        RatFn::constant(n, t.clone()).is_equal(self).then_some(ExtRational::Finite(t))
    }

    /// Composition `f(g_1, ..., g_n)` where `self = f` is over `n` variables
    /// and each `g_i` is over `m` variables.
    ///
    /// Fails only when the substituted denominator collapses to `-inf`.
    pub fn substitute(&self, g: &[RatFn]) -> Result<RatFn> {
        if g.len() != self.n_vars() {
            return Err(Error::DimensionMismatch { expected: self.n_vars(), got: g.len() });
        }
        let m = match g.first() {
            Some(gi) => gi.n_vars(),
            None => return Err(Error::DimensionMismatch { expected: 1, got: 0 }),
        };
        if let Some(bad) = g.iter().find(|gi| gi.n_vars() != m) {
            return Err(Error::DimensionMismatch { expected: m, got: bad.n_vars() });
        }
        let num = substitute_poly(&self.num, g, m)?;
        let den = substitute_poly(&self.den, g, m)?;
        num.div(&den)
    }

    /// Cheap inequality test at a few fixed probe points; `true` means the
    /// two functions certainly differ.
    pub(crate) fn differs_on_probe(&self, other: &RatFn) -> bool {
        let n = self.n_vars();
        const PROBES: [i64; 5] = [0, 3, -5, 7, -2];
        (0..4).any(|k| {
            let x: Vec<Rational> = (0..n).map(|i| qi(PROBES[(i * 3 + k) % 5] + k as i64)).collect();
            self.eval(&x) != other.eval(&x)
        })
    }
}

fn substitute_poly(p: &TropPoly, g: &[RatFn], m: usize) -> Result<RatFn> {
    let mut acc = RatFn::bottom(m);
    for (e, c) in p.terms() {
        let mut term = RatFn::constant(m, c.clone());
        for (gi, &k) in g.iter().zip(e) {
            if k > 0 {
                term = term.mul(&gi.pow(i64::from(k))?);
            }
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some_and(Zero::is_zero) {
            return write!(f, "{}", self.num);
        }
        let den = self.den.to_string();
        if self.den.len() == 1 && den.contains(' ') {
            write!(f, "{} - ({den})", self.num)
        } else {
            write!(f, "{} - {den}", self.num)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Finite, NegInf};

    fn x(n: usize, i: usize) -> RatFn {
        RatFn::var(n, i)
    }

    #[test]
    fn eval_examples() {
        // (X1 ⊕ X2) ⊘ X2 at (1, -3)
        let f = x(2, 0).add(&x(2, 1)).div(&x(2, 1)).unwrap();
        assert_eq!(f.eval(&[qi(1), qi(-3)]), Finite(qi(4)));
        assert_eq!(RatFn::constant(2, qi(0)).eval(&[qi(9), q(1, 3)]), Finite(qi(0)));
        assert_eq!(RatFn::bottom(2).eval(&[qi(9), q(1, 3)]), NegInf);
    }

    #[test]
    fn arithmetic_examples() {
        let f = x(1, 0).add(&RatFn::constant(1, qi(2)));
        let one = f.mul(&f.inv().unwrap());
        assert!(one.is_equal(&RatFn::constant(1, qi(0))));
        assert_eq!(f.add(&RatFn::bottom(1)), f);
        let sum = x(2, 0).add(&x(2, 1));
        let expected = RatFn::from_poly(TropPoly::var(2, 0).add(&TropPoly::var(2, 1)));
        assert_eq!(sum, expected);
        assert_eq!(RatFn::bottom(1).inv(), Err(Error::BottomInverse));
    }

    #[test]
    fn equality_examples() {
        let a = x(2, 0);
        let b = x(2, 0).mul(&x(2, 1)).div(&x(2, 1)).unwrap();
        assert!(a.is_equal(&b));
        match x(2, 0).equal(&x(2, 1)) {
            EqualityVerdict::Witness(w) => assert_ne!(w[0], w[1]),
            EqualityVerdict::Equal => panic!("X1 and X2 differ"),
        }
        assert!(RatFn::bottom(2).is_equal(&RatFn::bottom(2)));
        assert!(!RatFn::bottom(2).is_equal(&a));
    }

    #[test]
    fn substitution_examples() {
        // X1 with X1 := Y^2
        let y2 = x(1, 0).pow(2).unwrap();
        assert_eq!(x(1, 0).substitute(std::slice::from_ref(&y2)).unwrap(), y2);
        // X1 ⊕ 0 with X1 := Y1 ⊙ Y2
        let f = x(1, 0).add(&RatFn::constant(1, qi(0)));
        let y1y2 = x(2, 0).mul(&x(2, 1));
        let got = f.substitute(std::slice::from_ref(&y1y2)).unwrap();
        assert!(got.is_equal(&y1y2.add(&RatFn::constant(2, qi(0)))));
        // X1 ⊘ X2 with (Y ⊕ 0, Y)
        let f = x(2, 0).div(&x(2, 1)).unwrap();
        let y = x(1, 0);
        let g = [y.add(&RatFn::constant(1, qi(0))), y.clone()];
        let h = f.substitute(&g).unwrap();
        assert_eq!(h.eval(&[qi(-1)]), Finite(qi(1)));
        for i in -50..50 {
            let p = [q(i, 7)];
            let inner: Vec<Rational> = g.iter().map(|gi| gi.eval(&p).finite().unwrap().clone()).collect();
            assert_eq!(h.eval(&p), f.eval(&inner));
        }
    }

    #[test]
    fn substitution_into_bottom_denominator_fails() {
        let f = x(1, 0).inv().unwrap();
        assert_eq!(f.substitute(&[RatFn::bottom(1)]), Err(Error::BottomInverse));
    }

    #[test]
    fn constants_are_detected() {
        let f = x(1, 0).shift(&qi(3)).div(&x(1, 0)).unwrap();
        assert_eq!(f.as_constant(), Some(Finite(qi(3))));
        assert_eq!(x(1, 0).as_constant(), None);
    }
}
