//! Exact computations in the tropical rational function semifield, its
//! finitely presented congruences and their varieties, and rational
//! functions on tropical curves.

pub mod congruence;
pub mod curve;
pub mod embed;
pub mod error;
pub mod expr;
pub mod io;
pub mod linear;
pub mod poly;
pub mod random;
pub mod ratfn;
pub mod scalar;
pub mod variety;
pub mod verify;

pub use error::{Error, Result};
pub use expr::{Expr, Node};
pub use poly::{EqualityVerdict, Exponent, TropPoly};
pub use ratfn::RatFn;
pub use scalar::{ExtRational, Rational};
