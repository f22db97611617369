//! Rational functions on a tropical curve: continuous piecewise affine
//! functions with integer slopes, or the constant `-inf`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use super::graph::{CurvePoint, End, Length, MetricGraph, Pos};
use crate::error::{Error, Result};
use crate::scalar::{qi, ExtRational, Rational};

/// A value of a curve function: `±inf` occur only at points at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveValue {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl CurveValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            CurveValue::Finite(r) => Some(r),
            _ => None,
        }
    }
}

impl From<ExtRational> for CurveValue {
    fn from(v: ExtRational) -> Self {
        match v {
            ExtRational::NegInf => CurveValue::NegInf,
            ExtRational::Finite(r) => CurveValue::Finite(r),
        }
    }
}

impl fmt::Display for CurveValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveValue::NegInf => f.write_str("-inf"),
            CurveValue::Finite(r) => write!(f, "{r}"),
            CurveValue::PosInf => f.write_str("inf"),
        }
    }
}

/// The restriction of a function to one edge: values at increasing offsets
/// starting at 0, affine in between. A finite edge ends at its length; an
/// infinite edge continues past the last offset with slope `tail`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeFn {
    breaks: Vec<(Rational, Rational)>,
    tail: Option<i64>,
}

fn slope(a: &(Rational, Rational), b: &(Rational, Rational)) -> Rational {
    (&b.1 - &a.1) / (&b.0 - &a.0)
}

fn int_slope(a: &(Rational, Rational), b: &(Rational, Rational)) -> i64 {
    slope(a, b).to_integer().to_i64().expect("slope fits in i64")
}

fn union_offsets(a: &EdgeFn, b: &EdgeFn) -> Vec<Rational> {
    let set: BTreeSet<&Rational> = a.breaks.iter().chain(&b.breaks).map(|(t, _)| t).collect();
    set.into_iter().cloned().collect()
}

impl EdgeFn {
    /// Builds and validates the restriction to an edge of length `len`.
    pub fn new(len: &Length, breaks: Vec<(Rational, Rational)>, tail: Option<i64>) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidFunction(m.to_string()));
        if breaks.is_empty() || !breaks[0].0.is_zero() {
            return bad("breakpoints must start at offset 0");
        }
        if breaks.windows(2).any(|w| w[0].0 >= w[1].0) {
            return bad("breakpoint offsets must increase strictly");
        }
        if breaks.windows(2).any(|w| !slope(&w[0], &w[1]).is_integer()) {
            return bad("slopes must be integers");
        }
        let last = &breaks[breaks.len() - 1].0;
        match len {
            Length::Finite(l) => {
                if last != l {
                    return bad("breakpoints on a finite edge must end at its length");
                }
                if tail.is_some() {
                    return bad("a finite edge has no tail slope");
                }
            }
            Length::Infinite => {
                if tail.is_none() {
                    return bad("an infinite edge needs a tail slope");
                }
            }
        }
        if breaks.windows(2).any(|w| slope(&w[0], &w[1]).to_integer().to_i64().is_none()) {
            return bad("slope out of range");
        }
        Ok(EdgeFn { breaks, tail }.simplified())
    }

    /// The affine function `c + s·t` on an edge.
    pub fn affine(len: &Length, c: Rational, s: i64) -> Self {
        match len {
            Length::Finite(l) => {
                let end = &c + qi(s) * l;
                EdgeFn { breaks: vec![(Rational::zero(), c), (l.clone(), end)], tail: None }
            }
            Length::Infinite => EdgeFn { breaks: vec![(Rational::zero(), c)], tail: Some(s) },
        }
    }

    pub fn constant(len: &Length, c: Rational) -> Self {
        Self::affine(len, c, 0)
    }

    /// Values at increasing offsets, including offset 0 and, on finite
    /// edges, the edge length.
    pub fn breaks(&self) -> &[(Rational, Rational)] {
        &self.breaks
    }

    /// Slope towards the point at infinity on infinite edges.
    pub fn tail(&self) -> Option<i64> {
        self.tail
    }

    fn last(&self) -> &(Rational, Rational) {
        &self.breaks[self.breaks.len() - 1]
    }

    /// Value at a finite offset on the edge.
    pub fn eval_at(&self, t: &Rational) -> Rational {
        let idx = self.breaks.partition_point(|(o, _)| o <= t);
        if idx == self.breaks.len() {
            let (o, v) = self.last();
            if o == t {
                return v.clone();
            }
            let s = self.tail.expect("offset beyond a finite edge");
            return v + qi(s) * (t - o);
        }
        let (a, b) = (&self.breaks[idx - 1], &self.breaks[idx]);
        &a.1 + (&b.1 - &a.1) * (t - &a.0) / (&b.0 - &a.0)
    }

    pub fn start_value(&self) -> &Rational {
        &self.breaks[0].1
    }

    /// Value at the far end: the edge length, or the point at infinity.
    pub fn end_value(&self) -> CurveValue {
        match self.tail {
            None => CurveValue::Finite(self.last().1.clone()),
            Some(s) if s > 0 => CurveValue::PosInf,
            Some(s) if s < 0 => CurveValue::NegInf,
            Some(_) => CurveValue::Finite(self.last().1.clone()),
        }
    }

    /// Slope leaving offset 0 towards the far end.
    pub fn initial_slope(&self) -> i64 {
        match self.breaks.get(1) {
            Some(b) => int_slope(&self.breaks[0], b),
            None => self.tail.expect("edge functions have a piece"),
        }
    }

    /// Slope arriving at the far end of a finite edge, measured from offset 0.
    pub fn final_slope(&self) -> i64 {
        let n = self.breaks.len();
        match self.tail {
            Some(s) => s,
            None => int_slope(&self.breaks[n - 2], &self.breaks[n - 1]),
        }
    }

    /// Breakpoints strictly inside the edge with the slope change there.
    pub fn interior_breaks(&self) -> Vec<(Rational, i64)> {
        let n = self.breaks.len();
        let mut out = Vec::new();
        for i in 1..n {
            let before = int_slope(&self.breaks[i - 1], &self.breaks[i]);
            let after = if i + 1 < n {
                int_slope(&self.breaks[i], &self.breaks[i + 1])
            } else if let Some(s) = self.tail {
                s
            } else {
                continue;
            };
            out.push((self.breaks[i].0.clone(), after - before));
        }
        out
    }

    /// Largest offset carrying a breakpoint.
    pub fn last_offset(&self) -> &Rational {
        &self.last().0
    }

    fn simplified(mut self) -> Self {
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(self.breaks.len());
        for p in self.breaks.drain(..) {
            if out.last().is_some_and(|l| l.0 == p.0) {
                continue;
            }
            if out.len() >= 2 {
                let k = out.len();
                if slope(&out[k - 2], &out[k - 1]) == slope(&out[k - 1], &p) {
                    out.pop();
                }
            }
            out.push(p);
        }
        if let Some(s) = self.tail {
            while out.len() >= 2 {
                let k = out.len();
                if slope(&out[k - 2], &out[k - 1]) == qi(s) {
                    out.pop();
                } else {
                    break;
                }
            }
        }
        EdgeFn { breaks: out, tail: self.tail }
    }

    pub fn max(&self, other: &EdgeFn) -> EdgeFn {
        let offs = union_offsets(self, other);
        let mut pts: Vec<(Rational, Rational)> = Vec::with_capacity(2 * offs.len());
        let mut prev: Option<(Rational, Rational)> = None;
        for t in offs {
            let (x, y) = (self.eval_at(&t), other.eval_at(&t));
            let d = &x - &y;
            if let Some((t0, d0)) = &prev {
                if d0.signum() * d.signum() < Rational::zero() {
                    let tc = t0 + d0 * (&t - t0) / (d0 - &d);
                    let vc = self.eval_at(&tc);
                    pts.push((tc, vc));
                }
            }
            pts.push((t.clone(), if d.is_negative() { y } else { x }));
            prev = Some((t, d));
        }
        let tail = match (self.tail, other.tail) {
            (None, None) => None,
            (Some(s1), Some(s2)) => {
                let (t0, d0) = prev.expect("edge functions have breakpoints");
                let ds = s1 - s2;
                let crossing = (d0.is_negative() && ds > 0) || (d0.is_positive() && ds < 0);
                if crossing {
                    let tc = &t0 + -&d0 / qi(ds);
                    let vc = self.eval_at(&tc);
                    pts.push((tc, vc));
                }
                Some(if d0.is_positive() {
                    if crossing {
                        s2
                    } else {
                        s1
                    }
                } else if d0.is_negative() {
                    if crossing {
                        s1
                    } else {
                        s2
                    }
                } else {
                    s1.max(s2)
                })
            }
            _ => panic!("edge functions on different edge types"),
        };
        EdgeFn { breaks: pts, tail }.simplified()
    }

    pub fn add(&self, other: &EdgeFn) -> EdgeFn {
        let breaks = union_offsets(self, other)
            .into_iter()
            .map(|t| {
                let v = self.eval_at(&t) + other.eval_at(&t);
                (t, v)
            })
            .collect();
        let tail = match (self.tail, other.tail) {
            (None, None) => None,
            (Some(a), Some(b)) => Some(a + b),
            _ => panic!("edge functions on different edge types"),
        };
        EdgeFn { breaks, tail }.simplified()
    }

    pub fn scale(&self, k: i64) -> EdgeFn {
        let k_q = qi(k);
        let breaks = self.breaks.iter().map(|(t, v)| (t.clone(), v * &k_q)).collect();
        EdgeFn { breaks, tail: self.tail.map(|s| s * k) }.simplified()
    }

    pub fn shift(&self, c: &Rational) -> EdgeFn {
        let breaks = self.breaks.iter().map(|(t, v)| (t.clone(), v + c)).collect();
        EdgeFn { breaks, tail: self.tail }
    }
}

/// Breakpoints `(offset, value)` and optional tail slope of one edge.
pub type RawEdge = (Vec<(Rational, Rational)>, Option<i64>);

/// An element of `Rat(Γ)` for a fixed curve.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PLFunction {
    /// The constant `-inf`.
    Bottom,
    /// One restriction per edge of the curve.
    Pieces(Vec<EdgeFn>),
}

impl PLFunction {
    /// Validates per-edge data against the curve, including continuity at
    /// vertices.
    pub fn from_edges(g: &MetricGraph, edges: Vec<EdgeFn>) -> Result<Self> {
        if edges.len() != g.edges().len() {
            return Err(Error::InvalidFunction(format!("expected {} edges, got {}", g.edges().len(), edges.len())));
        }
        for (i, (f, e)) in edges.iter().zip(g.edges()).enumerate() {
            let rebuilt = EdgeFn::new(&e.len, f.breaks.clone(), f.tail)
                .map_err(|err| Error::InvalidFunction(format!("edge {i}: {err}")))?;
            if &rebuilt != f {
                return Err(Error::InvalidFunction(format!("edge {i} is not in reduced form")));
            }
        }
        let f = PLFunction::Pieces(edges);
        f.check_continuity(g)?;
        Ok(f)
    }

    /// Like [`PLFunction::from_edges`] but accepts redundant breakpoints.
    pub fn from_raw_edges(g: &MetricGraph, edges: Vec<RawEdge>) -> Result<Self> {
        if edges.len() != g.edges().len() {
            return Err(Error::InvalidFunction(format!("expected {} edges, got {}", g.edges().len(), edges.len())));
        }
        let pieces = edges
            .into_iter()
            .zip(g.edges())
            .enumerate()
            .map(|(i, ((b, t), e))| {
                EdgeFn::new(&e.len, b, t).map_err(|err| Error::InvalidFunction(format!("edge {i}: {err}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let f = PLFunction::Pieces(pieces);
        f.check_continuity(g)?;
        Ok(f)
    }

    fn check_continuity(&self, g: &MetricGraph) -> Result<()> {
        let PLFunction::Pieces(edges) = self else { return Ok(()) };
        for (v, vert) in g.vertices().iter().enumerate() {
            if vert.infinite {
                continue;
            }
            let mut values = g.incidence(v).iter().map(|&(e, end)| match end {
                End::Start => CurveValue::Finite(edges[e].start_value().clone()),
                End::Stop => edges[e].end_value(),
            });
            let first = values.next().expect("vertices have incident edges");
            if values.any(|x| x != first) {
                return Err(Error::InvalidFunction(format!("values disagree at vertex {}", vert.id)));
            }
        }
        Ok(())
    }

    pub fn bottom() -> Self {
        PLFunction::Bottom
    }

    pub fn constant(g: &MetricGraph, c: Rational) -> Self {
        PLFunction::Pieces(g.edges().iter().map(|e| EdgeFn::constant(&e.len, c.clone())).collect())
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, PLFunction::Bottom)
    }

    pub fn edges(&self) -> Option<&[EdgeFn]> {
        match self {
            PLFunction::Bottom => None,
            PLFunction::Pieces(e) => Some(e),
        }
    }

    /// Value at a point of the curve the function was built on.
    pub fn eval(&self, p: &CurvePoint) -> CurveValue {
        let PLFunction::Pieces(edges) = self else { return CurveValue::NegInf };
        let f = &edges[p.edge];
        match &p.pos {
            Pos::At(t) => CurveValue::Finite(f.eval_at(t)),
            Pos::InfEnd => f.end_value(),
        }
    }

    /// Interior edge points where the slope changes, in vertex-normal form.
    pub fn breakpoints(&self, g: &MetricGraph) -> BTreeSet<CurvePoint> {
        let mut out = BTreeSet::new();
        if let PLFunction::Pieces(edges) = self {
            for (e, f) in edges.iter().enumerate() {
                for (t, _) in f.interior_breaks() {
                    out.insert(g.normalize(&CurvePoint::at(e, t)));
                }
            }
        }
        out
    }

    /// Offset past which every infinite edge is governed by its tail slope:
    /// twice the largest breakpoint offset on an infinite edge, plus one.
    pub fn horizon(&self, g: &MetricGraph) -> Rational {
        let mut m = Rational::zero();
        if let PLFunction::Pieces(edges) = self {
            for (f, e) in edges.iter().zip(g.edges()) {
                if e.len.is_infinite() && *f.last_offset() > m {
                    m = f.last_offset().clone();
                }
            }
        }
        m * qi(2) + qi(1)
    }
}

/// `f ⊕ g`, the pointwise maximum.
pub fn pl_max(f: &PLFunction, g: &PLFunction) -> PLFunction {
    match (f, g) {
        (PLFunction::Bottom, h) | (h, PLFunction::Bottom) => h.clone(),
        (PLFunction::Pieces(a), PLFunction::Pieces(b)) => {
            PLFunction::Pieces(a.iter().zip(b).map(|(x, y)| x.max(y)).collect())
        }
    }
}

/// `f ⊙ g`, the pointwise sum.
pub fn pl_add(f: &PLFunction, g: &PLFunction) -> PLFunction {
    match (f, g) {
        (PLFunction::Bottom, _) | (_, PLFunction::Bottom) => PLFunction::Bottom,
        (PLFunction::Pieces(a), PLFunction::Pieces(b)) => {
            PLFunction::Pieces(a.iter().zip(b).map(|(x, y)| x.add(y)).collect())
        }
    }
}

/// The ⊙-inverse `-f`.
pub fn pl_neg(f: &PLFunction) -> Result<PLFunction> {
    pl_scale(f, -1).map_err(|_| Error::BottomNegation)
}

/// `f^{⊙k}`, that is `k·f`. Fails for the bottom function when `k ≤ 0`.
pub fn pl_scale(f: &PLFunction, k: i64) -> Result<PLFunction> {
    match f {
        PLFunction::Bottom if k > 0 => Ok(PLFunction::Bottom),
        PLFunction::Bottom => Err(Error::BottomNegation),
        PLFunction::Pieces(a) => Ok(PLFunction::Pieces(a.iter().map(|x| x.scale(k)).collect())),
    }
}

/// `c ⊙ f`.
pub fn pl_shift(f: &PLFunction, c: &Rational) -> PLFunction {
    match f {
        PLFunction::Bottom => PLFunction::Bottom,
        PLFunction::Pieces(a) => PLFunction::Pieces(a.iter().map(|x| x.shift(c)).collect()),
    }
}

pub fn pl_const(g: &MetricGraph, t: &ExtRational) -> PLFunction {
    match t {
        ExtRational::NegInf => PLFunction::Bottom,
        ExtRational::Finite(c) => PLFunction::constant(g, c.clone()),
    }
}

/// Zeros (positive orders) and poles (negative orders) of a function.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Divisor {
    orders: BTreeMap<CurvePoint, i64>,
}

impl Divisor {
    pub fn orders(&self) -> &BTreeMap<CurvePoint, i64> {
        &self.orders
    }

    pub fn order(&self, p: &CurvePoint) -> i64 {
        self.orders.get(p).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.orders.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    fn bump(&mut self, p: CurvePoint, k: i64) {
        *self.orders.entry(p).or_insert(0) += k;
    }
}

/// Order at each point: the sum of outgoing slopes, and minus the slope
/// towards infinity at a point at infinity.
pub fn divisor(g: &MetricGraph, f: &PLFunction) -> Result<Divisor> {
    let PLFunction::Pieces(edges) = f else { return Err(Error::BottomDivisor) };
    let mut d = Divisor::default();
    for (v, vert) in g.vertices().iter().enumerate() {
        let p = g.vertex_point(v);
        let order = if vert.infinite {
            let (e, _) = g.incidence(v)[0];
            -edges[e].tail().expect("infinite edge")
        } else {
            g.incidence(v)
                .iter()
                .map(|&(e, end)| match end {
                    End::Start => edges[e].initial_slope(),
                    End::Stop => -edges[e].final_slope(),
                })
                .sum()
        };
        d.bump(p, order);
    }
    for (e, fe) in edges.iter().enumerate() {
        for (t, k) in fe.interior_breaks() {
            d.bump(g.normalize(&CurvePoint::at(e, t)), k);
        }
    }
    d.orders.retain(|_, k| *k != 0);
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn fin(n: i64) -> Length {
        Length::Finite(qi(n))
    }

    /// `[-2, 2]` as two edges of length 2 leaving the middle vertex.
    fn sym_segment() -> MetricGraph {
        MetricGraph::from_ids(&[(0, false), (1, false), (2, false)], &[(0, 1, fin(2)), (0, 2, fin(2))]).unwrap()
    }

    /// Point with coordinate x on `[-2, 2]`.
    fn pt(x: Rational) -> CurvePoint {
        if x.is_negative() {
            CurvePoint::at(1, -x)
        } else {
            CurvePoint::at(0, x)
        }
    }

    /// `-min(|x|, l)` on `[-2, 2]`.
    fn cf_like(g: &MetricGraph, l: Rational) -> PLFunction {
        let arm = vec![(qi(0), qi(0)), (l.clone(), -l.clone()), (qi(2), -l)];
        PLFunction::from_raw_edges(g, vec![(arm.clone(), None), (arm, None)]).unwrap()
    }

    #[test]
    fn rejects_bad_functions() {
        let g = sym_segment();
        let half_slope = vec![(qi(0), qi(0)), (qi(2), qi(1))];
        let ok = vec![(qi(0), qi(0)), (qi(2), qi(2))];
        assert!(PLFunction::from_raw_edges(&g, vec![(half_slope, None), (ok.clone(), None)]).is_err());
        let jump = vec![(qi(0), qi(1)), (qi(2), qi(1))];
        assert!(PLFunction::from_raw_edges(&g, vec![(jump, None), (ok.clone(), None)]).is_err());
        let short = vec![(qi(0), qi(0)), (qi(1), qi(1))];
        assert!(PLFunction::from_raw_edges(&g, vec![(short, None), (ok.clone(), None)]).is_err());
        assert!(PLFunction::from_raw_edges(&g, vec![(ok.clone(), Some(1)), (ok, None)]).is_err());
    }

    #[test]
    fn max_with_constant_inserts_crossings() {
        let g = sym_segment();
        let f = cf_like(&g, qi(1));
        let h = pl_max(&f, &PLFunction::constant(&g, q(-1, 2)));
        assert_eq!(h, cf_like(&g, q(1, 2)));
        for x in [q(0, 1), q(1, 4), q(-1, 4), q(1, 2), q(-1, 2), qi(1), qi(-1), qi(2), qi(-2)] {
            let want = -(x.abs().min(q(1, 2)));
            assert_eq!(h.eval(&pt(x)), CurveValue::Finite(want));
        }
    }

    #[test]
    fn add_negation_and_bottom() {
        let g = sym_segment();
        let f = cf_like(&g, qi(1));
        assert_eq!(pl_add(&f, &pl_neg(&f).unwrap()), PLFunction::constant(&g, qi(0)));
        assert_eq!(pl_max(&f, &PLFunction::Bottom), f);
        assert_eq!(pl_max(&PLFunction::Bottom, &f), f);
        assert_eq!(pl_add(&f, &PLFunction::Bottom), PLFunction::Bottom);
        assert_eq!(pl_neg(&PLFunction::Bottom), Err(Error::BottomNegation));
    }

    #[test]
    fn divisors() {
        let g = sym_segment();
        let d = divisor(&g, &cf_like(&g, qi(1))).unwrap();
        assert_eq!(d.order(&pt(qi(0))), -2);
        assert_eq!(d.order(&pt(qi(1))), 1);
        assert_eq!(d.order(&pt(qi(-1))), 1);
        assert_eq!(d.orders().len(), 3);
        assert_eq!(d.degree(), 0);

        assert!(divisor(&g, &PLFunction::constant(&g, qi(5))).unwrap().is_empty());
        assert_eq!(divisor(&g, &PLFunction::Bottom), Err(Error::BottomDivisor));

        let seg = MetricGraph::from_ids(&[(0, false), (1, false)], &[(0, 1, fin(3))]).unwrap();
        let id = PLFunction::from_raw_edges(&seg, vec![(vec![(qi(0), qi(0)), (qi(3), qi(3))], None)]).unwrap();
        let d = divisor(&seg, &id).unwrap();
        assert_eq!(d.order(&CurvePoint::at(0, qi(0))), 1);
        assert_eq!(d.order(&CurvePoint::at(0, qi(3))), -1);
    }

    fn line() -> MetricGraph {
        // Edge 0 runs from the middle towards -inf, edge 1 towards +inf.
        MetricGraph::from_ids(
            &[(0, true), (1, false), (2, true)],
            &[(1, 0, Length::Infinite), (1, 2, Length::Infinite)],
        )
        .unwrap()
    }

    #[test]
    fn tails_and_points_at_infinity() {
        let g = line();
        // f(x) = x on the real line.
        let f = PLFunction::from_raw_edges(&g, vec![(vec![(qi(0), qi(0))], Some(-1)), (vec![(qi(0), qi(0))], Some(1))])
            .unwrap();
        assert_eq!(f.eval(&CurvePoint::inf_end(0)), CurveValue::NegInf);
        assert_eq!(f.eval(&CurvePoint::inf_end(1)), CurveValue::PosInf);
        let d = divisor(&g, &f).unwrap();
        assert_eq!(d.order(&CurvePoint::inf_end(0)), 1);
        assert_eq!(d.order(&CurvePoint::inf_end(1)), -1);
        assert_eq!(d.degree(), 0);

        // max(x, 3 - x) crosses at 3/2 on the positive ray.
        let h = PLFunction::from_raw_edges(&g, vec![(vec![(qi(0), qi(3))], Some(1)), (vec![(qi(0), qi(3))], Some(-1))])
            .unwrap();
        let m = pl_max(&f, &h);
        assert_eq!(m.breakpoints(&g), [CurvePoint::at(1, q(3, 2))].into_iter().collect());
        assert_eq!(m.eval(&CurvePoint::at(1, qi(5))), CurveValue::Finite(qi(5)));
        assert_eq!(m.eval(&CurvePoint::at(0, qi(5))), CurveValue::Finite(qi(8)));
        assert_eq!(m.eval(&CurvePoint::inf_end(0)), CurveValue::PosInf);
        assert_eq!(m.horizon(&g), qi(4));
        let d = divisor(&g, &m).unwrap();
        assert_eq!(d.order(&CurvePoint::at(1, q(3, 2))), 2);
        assert_eq!(d.degree(), 0);
    }

    #[test]
    fn scaling_and_shifting() {
        let g = sym_segment();
        let f = cf_like(&g, qi(1));
        let f2 = pl_scale(&f, 2).unwrap();
        assert_eq!(f2.eval(&pt(q(1, 2))), CurveValue::Finite(qi(-1)));
        assert_eq!(pl_shift(&f, &qi(3)).eval(&pt(qi(2))), CurveValue::Finite(qi(2)));
        assert_eq!(pl_scale(&f, 0).unwrap(), PLFunction::constant(&g, qi(0)));
    }
}
