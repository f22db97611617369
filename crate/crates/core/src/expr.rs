//! Text front-end for elements of the tropical rational function semifield.
//!
//! ```text
//! expr   := sum ;
//! sum    := prod (("+"|"-") prod)* ;
//! prod   := INT "*" atom | atom ;
//! atom   := RATIONAL | "-inf" | VAR | "max" "(" expr ("," expr)+ ")"
//!         | "min" "(" expr ("," expr)+ ")" | "(" expr ")" ;
//! VAR    := "x" POSINT ;  RATIONAL := ["-"] INT ["/" POSINT] ;
//! ```
//!
//! `+` is tropical multiplication and `-` its inverse; `k*a` is the k-th
//! tropical power and `min(a, b)` is `-max(-a, -b)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::TropPoly;
use crate::ratfn::RatFn;
use crate::scalar::{t_add, t_inv, t_mul, ExtRational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Const(ExtRational),
    /// 1-based variable index.
    Var(usize),
    Max(Vec<Node>),
    Sum(Vec<Node>),
    /// The ⊙-inverse of the child.
    Neg(Box<Node>),
}

/// A parsed expression over `n_vars` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub n_vars: usize,
    pub root: Node,
}

impl Expr {
    pub fn new(n_vars: usize, root: Node) -> Result<Self> {
        check_vars(&root, n_vars)?;
        Ok(Expr { n_vars, root })
    }

    pub fn parse(text: &str, n_vars: usize) -> Result<Self> {
        let mut p = Parser { src: text.as_bytes(), pos: 0, n_vars };
        let root = p.sum()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(Expr { n_vars, root })
    }

    pub fn eval(&self, x: &[Rational]) -> Result<ExtRational> {
        if x.len() != self.n_vars {
            return Err(Error::DimensionMismatch { expected: self.n_vars, got: x.len() });
        }
        eval_node(&self.root, x)
    }

    /// Lowers to a fraction of polynomials with the same pointwise values.
    pub fn to_ratfn(&self) -> Result<RatFn> {
        lower_node(&self.root, self.n_vars)
    }

    /// Lowers an expression without `Neg` nodes to a polynomial.
    pub fn to_poly(&self) -> Result<TropPoly> {
        poly_node(&self.root, self.n_vars)
    }
}

fn check_vars(node: &Node, n_vars: usize) -> Result<()> {
    match node {
        Node::Const(_) => Ok(()),
        Node::Var(i) if (1..=n_vars).contains(i) => Ok(()),
        Node::Var(i) => Err(Error::VarOutOfRange { index: *i, n_vars }),
        Node::Max(ch) | Node::Sum(ch) => ch.iter().try_for_each(|c| check_vars(c, n_vars)),
        Node::Neg(c) => check_vars(c, n_vars),
    }
}

fn eval_node(node: &Node, x: &[Rational]) -> Result<ExtRational> {
    Ok(match node {
        Node::Const(c) => c.clone(),
        Node::Var(i) => ExtRational::Finite(x[i - 1].clone()),
        Node::Max(ch) => {
            let mut acc = ExtRational::NegInf;
            for c in ch {
                acc = t_add(&acc, &eval_node(c, x)?);
            }
            acc
        }
        Node::Sum(ch) => {
            let mut acc = ExtRational::one();
            for c in ch {
                acc = t_mul(&acc, &eval_node(c, x)?);
            }
            acc
        }
        Node::Neg(c) => t_inv(&eval_node(c, x)?)?,
    })
}

fn lower_node(node: &Node, n: usize) -> Result<RatFn> {
    Ok(match node {
        Node::Const(c) => RatFn::from_ext(n, c),
        Node::Var(i) => RatFn::var(n, i - 1),
        Node::Max(ch) => {
            let mut acc = RatFn::bottom(n);
            for c in ch {
                acc = acc.add(&lower_node(c, n)?);
            }
            acc
        }
        Node::Sum(ch) => {
            let mut acc = RatFn::constant(n, Rational::zero());
            for c in ch {
                acc = acc.mul(&lower_node(c, n)?);
            }
            acc
        }
        Node::Neg(c) => lower_node(c, n)?.inv()?,
    })
}

fn poly_node(node: &Node, n: usize) -> Result<TropPoly> {
    Ok(match node {
        Node::Const(ExtRational::NegInf) => TropPoly::bottom(n),
        Node::Const(ExtRational::Finite(c)) => TropPoly::constant(n, c.clone()),
        Node::Var(i) => TropPoly::var(n, i - 1),
        Node::Max(ch) => {
            let mut acc = TropPoly::bottom(n);
            for c in ch {
                acc = acc.add_raw(&poly_node(c, n)?);
            }
            acc.canonicalize()
        }
        Node::Sum(ch) => {
            let mut acc = TropPoly::constant(n, Rational::zero());
            for c in ch {
                acc = acc.mul(&poly_node(c, n)?);
            }
            acc
        }
        Node::Neg(_) => return Err(Error::NotPolynomial("'-' and min() are not allowed in a polynomial".into())),
    })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n_vars: usize,
}

impl Parser<'_> {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let hit = rest.starts_with(kw.as_bytes())
            && !rest.get(kw.len()).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_');
        if hit {
            self.pos += kw.len();
        }
        hit
    }

    fn sum(&mut self) -> Result<Node> {
        let mut items = vec![self.prod()?];
        loop {
            if self.eat(b'+') {
                items.push(self.prod()?);
            } else if self.eat(b'-') {
                items.push(Node::Neg(Box::new(self.prod()?)));
            } else {
                break;
            }
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Node::Sum(items) })
    }

    fn prod(&mut self) -> Result<Node> {
        self.skip_ws();
        let start = self.pos;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let k = self.digits()?;
            if self.eat(b'*') {
                let atom = self.atom()?;
                let k = k
                    .to_usize()
                    .filter(|&k| k <= 1 << 16)
                    .ok_or_else(|| Error::Syntax { pos: start, msg: "power too large".into() })?;
                return Ok(match k {
                    0 => Node::Const(ExtRational::one()),
                    1 => atom,
                    k => Node::Sum(vec![atom; k]),
                });
            }
            self.pos = start;
        }
        self.atom()
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<Node> {
        let Some(c) = self.peek() else {
            return Err(self.error("unexpected end of input"));
        };
        match c {
            b'(' => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(b')')?;
                Ok(e)
            }
            b'-' => {
                self.pos += 1;
                if self.keyword("inf") {
                    return Ok(Node::Const(ExtRational::NegInf));
                }
                if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    return Err(self.error("expected a number or 'inf' after '-'"));
                }
                Ok(Node::Const(ExtRational::Finite(-self.rational()?)))
            }
            b'0'..=b'9' => Ok(Node::Const(ExtRational::Finite(self.rational()?))),
            b'x' => {
                let start = self.pos;
                self.pos += 1;
                if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos = start;
                    return Err(self.error("expected a variable index after 'x'"));
                }
                let idx = self.digits()?;
                let idx = idx.to_usize().unwrap_or(usize::MAX);
                if idx == 0 {
                    return Err(Error::Syntax { pos: start, msg: "variables are numbered from x1".into() });
                }
                if idx > self.n_vars {
                    return Err(Error::VarOutOfRange { index: idx, n_vars: self.n_vars });
                }
                Ok(Node::Var(idx))
            }
            _ if self.keyword("max") => Ok(Node::Max(self.args()?)),
            _ if self.keyword("min") => {
                let args = self.args()?;
                Ok(Node::Neg(Box::new(Node::Max(args.into_iter().map(|a| Node::Neg(Box::new(a))).collect()))))
            }
            _ => Err(self.error(format!("unexpected character '{}'", c as char))),
        }
    }

    fn rational(&mut self) -> Result<Rational> {
        let n = self.digits()?;
        // "/" directly after the integer, whitespace allowed.
        if self.eat(b'/') {
            let d = self.digits()?;
            if d.is_zero() {
                return Err(self.error("zero denominator"));
            }
            Ok(Rational::new(n, d))
        } else {
            Ok(Rational::from_integer(n))
        }
    }

    fn args(&mut self) -> Result<Vec<Node>> {
        self.expect(b'(')?;
        let mut args = vec![self.sum()?];
        while self.eat(b',') {
            args.push(self.sum()?);
        }
        self.expect(b')')?;
        if args.len() < 2 {
            return Err(self.error("max/min need at least two arguments"));
        }
        Ok(args)
    }
}

/// Matches the `min` desugaring `Neg(Max(Neg a, Neg b, ...))`.
fn as_min(node: &Node) -> Option<Vec<&Node>> {
    let Node::Neg(inner) = node else { return None };
    let Node::Max(ch) = inner.as_ref() else { return None };
    if ch.len() < 2 {
        return None;
    }
    ch.iter()
        .map(|c| match c {
            Node::Neg(a) => Some(a.as_ref()),
            _ => None,
        })
        .collect()
}

fn write_atom(f: &mut fmt::Formatter<'_>, node: &Node) -> fmt::Result {
    match node {
        Node::Sum(_) => {
            f.write_str("(")?;
            write_node(f, node)?;
            f.write_str(")")
        }
        Node::Neg(_) if as_min(node).is_none() => {
            f.write_str("(")?;
            write_node(f, node)?;
            f.write_str(")")
        }
        _ => write_node(f, node),
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, name: &str, items: &[&Node]) -> fmt::Result {
    write!(f, "{name}(")?;
    for (i, c) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write_node(f, c)?;
    }
    f.write_str(")")
}

fn write_node(f: &mut fmt::Formatter<'_>, node: &Node) -> fmt::Result {
    if let Some(args) = as_min(node) {
        return write_list(f, "min", &args);
    }
    match node {
        Node::Const(c) => write!(f, "{c}"),
        Node::Var(i) => write!(f, "x{i}"),
        Node::Max(ch) => {
            let items: Vec<&Node> = ch.iter().collect();
            if items.len() == 1 {
                write_list(f, "max", &[items[0], items[0]])
            } else {
                write_list(f, "max", &items)
            }
        }
        Node::Sum(ch) => {
            for (i, c) in ch.iter().enumerate() {
                match c {
                    Node::Neg(inner) if as_min(c).is_none() && i > 0 => {
                        f.write_str(" - ")?;
                        write_atom(f, inner)?;
                    }
                    _ => {
                        if i > 0 {
                            f.write_str(" + ")?;
                        }
                        write_atom(f, c)?;
                    }
                }
            }
            Ok(())
        }
        // Only reachable for trees not produced by the parser.
        Node::Neg(inner) => {
            f.write_str("0 - ")?;
            write_atom(f, inner)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, &self.root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi, Finite, NegInf};

    fn c(n: i64) -> Node {
        Node::Const(Finite(qi(n)))
    }

    fn v(i: usize) -> Node {
        Node::Var(i)
    }

    fn neg(n: Node) -> Node {
        Node::Neg(Box::new(n))
    }

    #[test]
    fn parse_examples() {
        let e = Expr::parse("max(x1 + x2, 0) - x1", 2).unwrap();
        assert_eq!(e.root, Node::Sum(vec![Node::Max(vec![Node::Sum(vec![v(1), v(2)]), c(0)]), neg(v(1))]));
        let e = Expr::parse("min(x1, 0)", 1).unwrap();
        assert_eq!(e.root, neg(Node::Max(vec![neg(v(1)), neg(c(0))])));
        assert_eq!(Expr::parse("x3", 2), Err(Error::VarOutOfRange { index: 3, n_vars: 2 }));
    }

    #[test]
    fn parse_powers_and_constants() {
        let e = Expr::parse("3*x1", 1).unwrap();
        assert_eq!(e.root, Node::Sum(vec![v(1), v(1), v(1)]));
        assert_eq!(Expr::parse("1*x1", 1).unwrap().root, v(1));
        assert_eq!(Expr::parse("0*x1", 1).unwrap().root, c(0));
        assert_eq!(Expr::parse("-3/4", 1).unwrap().root, Node::Const(Finite(q(-3, 4))));
        assert_eq!(Expr::parse(" -inf ", 1).unwrap().root, Node::Const(NegInf));
        assert_eq!(Expr::parse("x1 -2", 1).unwrap().root, Node::Sum(vec![v(1), neg(c(2))]));
        assert_eq!(Expr::parse("x1 + -2", 1).unwrap().root, Node::Sum(vec![v(1), c(-2)]));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        for (text, pos) in [("max(x1)", 7), ("x1 +", 4), ("(x1", 3), ("x1 x2", 3), ("1/0", 3), ("-x1", 1)] {
            match Expr::parse(text, 2) {
                Err(Error::Syntax { pos: p, .. }) => assert_eq!(p, pos, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn eval_examples() {
        let e = Expr::parse("max(x1+x2, 0)", 2).unwrap();
        assert_eq!(e.eval(&[qi(1), qi(-3)]).unwrap(), Finite(qi(0)));
        let e = Expr::parse("x1 - x2", 2).unwrap();
        assert_eq!(e.eval(&[qi(5), qi(2)]).unwrap(), Finite(qi(3)));
        let e = Expr::parse("-inf", 2).unwrap();
        assert_eq!(e.eval(&[qi(5), qi(2)]).unwrap(), NegInf);
        let e = Expr::parse("0 - -inf", 1).unwrap();
        assert_eq!(e.eval(&[qi(0)]), Err(Error::InversionOfBottom));
    }

    #[test]
    fn lowering_examples() {
        let f = Expr::parse("x1 - x2", 2).unwrap().to_ratfn().unwrap();
        assert_eq!(f.num(), &TropPoly::var(2, 0));
        assert_eq!(f.den(), &TropPoly::var(2, 1));

        let e = Expr::parse("max(x1 - x2, 0)", 2).unwrap();
        let f = e.to_ratfn().unwrap();
        assert_eq!(f.num(), &TropPoly::var(2, 0).add(&TropPoly::var(2, 1)));
        assert_eq!(f.den(), &TropPoly::var(2, 1));
        for i in -10..=10 {
            for j in -10..=10 {
                let x = [q(i, 2), q(j, 3)];
                assert_eq!(e.eval(&x).unwrap(), f.eval(&x));
            }
        }

        let f = Expr::parse("0", 1).unwrap().to_ratfn().unwrap();
        assert_eq!(f.num(), &TropPoly::constant(1, qi(0)));
        assert_eq!(f.den(), &TropPoly::constant(1, qi(0)));

        assert_eq!(Expr::parse("x1 - -inf", 1).unwrap().to_ratfn(), Err(Error::BottomInverse));
    }

    #[test]
    fn polynomial_lowering_rejects_inverse() {
        assert!(Expr::parse("max(2*x1, x1 + 1, 0)", 1).unwrap().to_poly().is_ok());
        assert!(matches!(Expr::parse("x1 - 1", 1).unwrap().to_poly(), Err(Error::NotPolynomial(_))));
    }

    #[test]
    fn print_round_trip() {
        for text in [
            "max(x1 + x2, 0) - x1",
            "min(x1, 0) + 3/2",
            "x1 - (x2 + 1) - min(x1, x2, -inf)",
            "2*max(x1, -1) + 0*x2",
            "x1 + -2 - -3",
        ] {
            let a = Expr::parse(text, 2).unwrap();
            let b = Expr::parse(&a.to_string(), 2).unwrap();
            assert_eq!(a, b, "{text} -> {a}");
        }
    }
}
