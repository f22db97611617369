//! Exact scalars of the tropical semifield `T = Q ∪ {-inf}` with
//! `a ⊕ b = max(a, b)` and `a ⊙ b = a + b`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Builds the rational `n / d`. Panics when `d == 0`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"-p"` or `"p/q"` (q > 0).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Format(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num).map_err(|_| bad())?;
    let d = BigInt::from_str(den).map_err(|_| bad())?;
    if !d.is_positive() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Lossless text form: `"p/q"`, or `"p"` when the denominator is one.
pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

/// An element of the tropical semifield: a rational or the bottom `-inf`.
///
/// Ordered with `NegInf` below every finite value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRational {
    NegInf,
    Finite(Rational),
}

pub use ExtRational::{Finite, NegInf};

impl ExtRational {
    /// The ⊙-identity `0`.
    pub fn one() -> Self {
        Finite(Rational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Finite(qi(n))
    }

    pub fn is_neg_inf(&self) -> bool {
        matches!(self, NegInf)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Finite(r) => Some(r),
            NegInf => None,
        }
    }

    /// Membership in the boolean semifield `B = {0, -inf}`.
    pub fn is_boolean(&self) -> bool {
        match self {
            NegInf => true,
            Finite(r) => r.is_zero(),
        }
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (NegInf, NegInf) => Ordering::Equal,
            (NegInf, Finite(_)) => Ordering::Less,
            (Finite(_), NegInf) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl From<Rational> for ExtRational {
    fn from(r: Rational) -> Self {
        Finite(r)
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegInf => f.write_str("-inf"),
            Finite(r) => write!(f, "{r}"),
        }
    }
}

impl FromStr for ExtRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "-inf" {
            Ok(NegInf)
        } else {
            parse_rational(s).map(Finite)
        }
    }
}

/// Tropical addition `a ⊕ b = max(a, b)`.
pub fn t_add(a: &ExtRational, b: &ExtRational) -> ExtRational {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Tropical multiplication `a ⊙ b = a + b`; `-inf` is absorbing.
pub fn t_mul(a: &ExtRational, b: &ExtRational) -> ExtRational {
    match (a, b) {
        (Finite(x), Finite(y)) => Finite(x + y),
        _ => NegInf,
    }
}

/// Tropical inverse `-a`.
pub fn t_inv(a: &ExtRational) -> Result<ExtRational> {
    match a {
        Finite(x) => Ok(Finite(-x)),
        NegInf => Err(Error::InversionOfBottom),
    }
}

/// Greatest common divisor of the absolute values; `gcd() == 0` for an
/// all-zero slice.
pub fn gcd_all(values: &[i64]) -> u64 {
    values.iter().fold(0u64, |g, &v| num_integer::gcd(g, v.unsigned_abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: i64, d: i64) -> ExtRational {
        Finite(q(n, d))
    }

    #[test]
    fn add_examples() {
        assert_eq!(t_add(&f(3, 1), &NegInf), f(3, 1));
        assert_eq!(t_add(&NegInf, &f(3, 1)), f(3, 1));
        assert_eq!(t_add(&f(2, 1), &f(5, 1)), f(5, 1));
        assert_eq!(t_add(&NegInf, &NegInf), NegInf);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(t_mul(&f(2, 1), &f(3, 1)), f(5, 1));
        assert_eq!(t_mul(&f(7, 1), &NegInf), NegInf);
        assert_eq!(t_mul(&NegInf, &f(7, 1)), NegInf);
        assert_eq!(t_mul(&f(-1, 2), &f(1, 2)), ExtRational::one());
    }

    #[test]
    fn inv_examples() {
        assert_eq!(t_inv(&f(3, 1)).unwrap(), f(-3, 1));
        assert_eq!(t_inv(&f(0, 1)).unwrap(), f(0, 1));
        assert_eq!(t_inv(&NegInf), Err(Error::InversionOfBottom));
        let a = f(-7, 3);
        assert_eq!(t_mul(&a, &t_inv(&a).unwrap()), ExtRational::one());
    }

    #[test]
    fn boolean_semifield_is_closed() {
        let b = [NegInf, ExtRational::one()];
        for x in &b {
            for y in &b {
                assert!(t_add(x, y).is_boolean());
                assert!(t_mul(x, y).is_boolean());
            }
        }
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-3", "7/2", "-5/12"] {
            assert_eq!(fmt_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("4/2").unwrap(), qi(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!("-inf".parse::<ExtRational>().unwrap(), NegInf);
    }

    #[test]
    fn gcd_of_slopes() {
        assert_eq!(gcd_all(&[0, 1]), 1);
        assert_eq!(gcd_all(&[2, -4]), 2);
        assert_eq!(gcd_all(&[0, 0]), 0);
    }
}
