//! The map `θ = (f₁, …, fₙ)` from a tropical curve to `Q^n`, the
//! substitution homomorphism `ψ: Xᵢ ↦ fᵢ`, and pullbacks along coordinate
//! tuples of rational functions.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::curve::{pl_add, pl_max, pl_neg, pl_scale, CurvePoint, CurveValue, Length, MetricGraph, PLFunction, Pos};
use crate::error::{Error, Result};
use crate::linear::{feasible_point, AffineForm, Constraint};
use crate::poly::TropPoly;
use crate::ratfn::RatFn;
use crate::scalar::{gcd_all, qi, ExtRational, Rational};

/// Generators `f₁, …, fₙ ∈ Rat(Γ) \ {-inf}` on a common curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorTuple {
    curve: MetricGraph,
    fns: Vec<PLFunction>,
}

impl GeneratorTuple {
    pub fn new(curve: MetricGraph, fns: Vec<PLFunction>) -> Result<Self> {
        if fns.is_empty() {
            return Err(Error::InvalidFunction("at least one generator is required".into()));
        }
        for (i, f) in fns.iter().enumerate() {
            match f.edges() {
                None => return Err(Error::InvalidFunction(format!("generator {} is -inf", i + 1))),
                Some(e) if e.len() != curve.edges().len() => {
                    return Err(Error::InvalidFunction(format!("generator {} lives on another curve", i + 1)))
                }
                Some(_) => {}
            }
        }
        Ok(GeneratorTuple { curve, fns })
    }

    pub fn curve(&self) -> &MetricGraph {
        &self.curve
    }

    pub fn fns(&self) -> &[PLFunction] {
        &self.fns
    }

    pub fn n(&self) -> usize {
        self.fns.len()
    }
}

/// `θ(x) = (f₁(x), …, fₙ(x))` at a finite point.
pub fn theta_point(g: &GeneratorTuple, x: &CurvePoint) -> Result<Vec<Rational>> {
    if x.is_infinite() {
        return Err(Error::InfinitePoint);
    }
    g.curve.check_point(x)?;
    Ok(g.fns
        .iter()
        .map(|f| match f.eval(x) {
            CurveValue::Finite(v) => v,
            _ => unreachable!("generators are finite at finite points"),
        })
        .collect())
}

/// A piece of an edge on which every generator is affine, with the integer
/// slope vector of `θ` along increasing offsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub edge: usize,
    pub from: Rational,
    /// A finite offset, or the point at infinity for the last piece of an
    /// infinite edge.
    pub to: Pos,
    pub slopes: Vec<i64>,
    pub gcd: u64,
}

impl Segment {
    /// Nonzero slope vector with coprime entries: `θ` has unit speed for the
    /// lattice length on this piece.
    pub fn is_unimodular(&self) -> bool {
        self.gcd == 1
    }

    fn start(&self) -> CurvePoint {
        CurvePoint::at(self.edge, self.from.clone())
    }

    /// Curve point at offset `t` of this piece.
    fn point(&self, t: Rational) -> CurvePoint {
        CurvePoint::at(self.edge, t)
    }
}

/// The image of a segment under `θ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ImagePiece {
    Point(Vec<Rational>),
    Segment(Vec<Rational>, Vec<Rational>),
    /// A ray from a point in an integer direction.
    Ray(Vec<Rational>, Vec<i64>),
}

/// Outcome of the injectivity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Injectivity {
    Injective,
    /// Distinct points with the same image.
    Witness(CurvePoint, CurvePoint),
}

impl Injectivity {
    pub fn is_injective(&self) -> bool {
        matches!(self, Injectivity::Injective)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub segments: Vec<Segment>,
    pub isometry_ok: bool,
    pub injective: Injectivity,
    pub image: Vec<ImagePiece>,
}

/// Common refinement of the generators' breakpoints on every edge.
pub fn refine(g: &GeneratorTuple) -> Vec<Segment> {
    let mut out = Vec::new();
    for (e, edge) in g.curve.edges().iter().enumerate() {
        let mut offs: BTreeSet<Rational> = BTreeSet::new();
        offs.insert(Rational::zero());
        if let Length::Finite(l) = &edge.len {
            offs.insert(l.clone());
        }
        for f in &g.fns {
            let fe = &f.edges().expect("generators are finite")[e];
            offs.extend(fe.breaks().iter().map(|(t, _)| t.clone()));
        }
        let offs: Vec<Rational> = offs.into_iter().collect();
        for w in offs.windows(2) {
            let slopes: Vec<i64> = g
                .fns
                .iter()
                .map(|f| {
                    let fe = &f.edges().unwrap()[e];
                    let s = (fe.eval_at(&w[1]) - fe.eval_at(&w[0])) / (&w[1] - &w[0]);
                    num_traits::ToPrimitive::to_i64(&s.to_integer()).expect("integer slope")
                })
                .collect();
            out.push(Segment { edge: e, from: w[0].clone(), to: Pos::At(w[1].clone()), gcd: gcd_all(&slopes), slopes });
        }
        if edge.len.is_infinite() {
            let slopes: Vec<i64> = g.fns.iter().map(|f| f.edges().unwrap()[e].tail().unwrap()).collect();
            let from = offs.last().unwrap().clone();
            out.push(Segment { edge: e, from, to: Pos::InfEnd, gcd: gcd_all(&slopes), slopes });
        }
    }
    out
}

fn image_of(g: &GeneratorTuple, s: &Segment) -> ImagePiece {
    let a = theta_point(g, &s.start()).expect("finite start");
    if s.gcd == 0 {
        return ImagePiece::Point(a);
    }
    match &s.to {
        Pos::At(t) => ImagePiece::Segment(a, theta_point(g, &s.point(t.clone())).expect("finite end")),
        Pos::InfEnd => ImagePiece::Ray(a, s.slopes.clone()),
    }
}

/// Images of the refined segments: segments, rays, or points where `θ` is
/// constant.
pub fn image_segments(g: &GeneratorTuple) -> Vec<ImagePiece> {
    refine(g).iter().map(|s| image_of(g, s)).collect()
}

/// Per-segment slope vectors and gcds; ok iff every gcd is one.
pub fn check_local_isometry(g: &GeneratorTuple) -> (Vec<Segment>, bool) {
    let segs = refine(g);
    let ok = segs.iter().all(Segment::is_unimodular);
    (segs, ok)
}

/// Parameter pairs `(t, u)` at which the two segments meet as curve points.
fn shared_points(g: &MetricGraph, a: &Segment, b: &Segment) -> Vec<(Rational, Rational)> {
    let ends = |s: &Segment| {
        let mut v = vec![(s.from.clone(), g.normalize(&s.start()))];
        if let Pos::At(t) = &s.to {
            v.push((t.clone(), g.normalize(&s.point(t.clone()))));
        }
        v
    };
    let mut out = Vec::new();
    for (t, p) in ends(a) {
        for (u, q) in ends(b) {
            if p == q {
                out.push((t.clone(), u));
            }
        }
    }
    out
}

/// Constraints on `(t, u)` for `θ` along `a` at `t` to equal `θ` along `b`
/// at `u`.
fn meet_system(ga: &[Rational], gb: &[Rational], a: &Segment, b: &Segment) -> Vec<Constraint> {
    let mut cs = Vec::new();
    for k in 0..ga.len() {
        let (sa, sb) = (qi(a.slopes[k]), qi(b.slopes[k]));
        let constant = &ga[k] - &sa * &a.from - &gb[k] + &sb * &b.from;
        cs.push(Constraint::eq(AffineForm::new(constant, vec![sa, -sb])));
    }
    for (idx, s) in [a, b].into_iter().enumerate() {
        let mut unit = vec![Rational::zero(); 2];
        unit[idx] = Rational::one();
        cs.push(Constraint::ge(AffineForm::new(-s.from.clone(), unit.clone())));
        if let Pos::At(to) = &s.to {
            let neg: Vec<Rational> = unit.iter().map(|c| -c).collect();
            cs.push(Constraint::ge(AffineForm::new(to.clone(), neg)));
        }
    }
    cs
}

fn with(cs: &[Constraint], extra: Constraint) -> Vec<Constraint> {
    let mut v = cs.to_vec();
    v.push(extra);
    v
}

/// Searches the meeting set of two segments for a pair of distinct curve
/// points.
fn pair_witness(g: &GeneratorTuple, a: &Segment, b: &Segment) -> Option<(CurvePoint, CurvePoint)> {
    let ga = theta_point(g, &a.start()).expect("finite");
    let gb = theta_point(g, &b.start()).expect("finite");
    let cs = meet_system(&ga, &gb, a, b);
    let p = feasible_point(2, &cs)?;
    let shared = shared_points(&g.curve, a, b);
    let is_shared = |x: &[Rational]| shared.iter().any(|(t, u)| t == &x[0] && u == &x[1]);
    let witness = |x: &[Rational]| (a.point(x[0].clone()), b.point(x[1].clone()));
    if !is_shared(&p) {
        return Some(witness(&p));
    }
    // The meeting set is convex and the shared pairs are corners of the
    // parameter box, so any second point or a midpoint is a witness.
    for idx in 0..2 {
        for sign in [1, -1] {
            let mut coeffs = vec![Rational::zero(); 2];
            coeffs[idx] = qi(sign);
            let strict = Constraint::gt(AffineForm::new(-qi(sign) * &p[idx], coeffs));
            if let Some(q) = feasible_point(2, &with(&cs, strict)) {
                if !is_shared(&q) {
                    return Some(witness(&q));
                }
                let mid: Vec<Rational> = p.iter().zip(&q).map(|(x, y)| (x + y) / qi(2)).collect();
                return Some(witness(&mid));
            }
        }
    }
    None
}

/// Exact injectivity of `θ` on the finite part of the curve.
pub fn check_injectivity(g: &GeneratorTuple) -> Injectivity {
    injectivity_of(g, &refine(g))
}

fn injectivity_of(g: &GeneratorTuple, segs: &[Segment]) -> Injectivity {
    for s in segs {
        if s.gcd == 0 {
            let far = match &s.to {
                Pos::At(t) => (&s.from + t) / qi(2),
                Pos::InfEnd => &s.from + Rational::one(),
            };
            return Injectivity::Witness(s.start(), s.point(far));
        }
    }
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            if let Some((x, y)) = pair_witness(g, &segs[i], &segs[j]) {
                debug_assert!(!g.curve.same_point(&x, &y));
                return Injectivity::Witness(x, y);
            }
        }
    }
    Injectivity::Injective
}

pub fn embedding_report(g: &GeneratorTuple) -> EmbeddingReport {
    let segments = refine(g);
    let isometry_ok = segments.iter().all(Segment::is_unimodular);
    let injective = injectivity_of(g, &segments);
    let image = segments.iter().map(|s| image_of(g, s)).collect();
    EmbeddingReport { segments, isometry_ok, injective, image }
}

fn poly_to_pl(p: &TropPoly, g: &GeneratorTuple) -> PLFunction {
    let mut acc = PLFunction::Bottom;
    for (exp, c) in p.terms() {
        let mut term = PLFunction::constant(&g.curve, c.clone());
        for (f, &k) in g.fns.iter().zip(exp) {
            if k > 0 {
                term = pl_add(&term, &pl_scale(f, i64::from(k)).expect("generators are finite"));
            }
        }
        acc = pl_max(&acc, &term);
    }
    acc
}

/// `ψ(f) = f(f₁, …, fₙ)` as a function on the curve.
pub fn psi_apply(f: &RatFn, g: &GeneratorTuple) -> Result<PLFunction> {
    if f.n_vars() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: f.n_vars() });
    }
    if f.is_bottom() {
        return Ok(PLFunction::Bottom);
    }
    let num = poly_to_pl(f.num(), g);
    let den = poly_to_pl(f.den(), g);
    Ok(pl_add(&num, &pl_neg(&den)?))
}

/// Checks `ψ(f)(x) = f(θ(x))` at each finite point.
pub fn verify_compat(f: &RatFn, g: &GeneratorTuple, pts: &[CurvePoint]) -> Result<bool> {
    let pf = psi_apply(f, g)?;
    for x in pts {
        let lhs = pf.eval(x);
        let rhs = CurveValue::from(f.eval(&theta_point(g, x)?));
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `θ*(f) = f(θ₁, …, θₙ)` for coordinates `θᵢ` over `m` variables.
pub fn pullback(theta_coords: &[RatFn], f: &RatFn) -> Result<RatFn> {
    f.substitute(theta_coords)
}

/// The point map of a coordinate tuple; `None` when a coordinate is `-inf`.
pub fn theta_map(coords: &[RatFn], y: &[Rational]) -> Option<Vec<Rational>> {
    coords.iter().map(|c| c.eval(y).finite().cloned()).collect()
}

/// Coordinates of the composite homomorphism: `Xᵢ ↦ gᵢ(h₁, …, h_m)`.
pub fn compose(g: &[RatFn], h: &[RatFn]) -> Result<Vec<RatFn>> {
    g.iter().map(|gi| gi.substitute(h)).collect()
}

/// Sampled extrema of `f` on `V` and of its pullback on `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupInfReport {
    pub sup_v: ExtRational,
    pub sup_w: ExtRational,
    pub inf_v: ExtRational,
    pub inf_w: ExtRational,
}

impl SupInfReport {
    /// `sup_V f ≥ sup_W θ*(f)` and `inf_V f ≤ inf_W θ*(f)`.
    pub fn holds(&self) -> bool {
        self.sup_v >= self.sup_w && self.inf_v <= self.inf_w
    }
}

pub fn sup_inf_report(
    f: &RatFn,
    v_samples: &[Vec<Rational>],
    w_samples: &[Vec<Rational>],
    theta_coords: &[RatFn],
) -> Result<SupInfReport> {
    if v_samples.is_empty() || w_samples.is_empty() {
        return Err(Error::Format("sample sets must be nonempty".into()));
    }
    let pb = pullback(theta_coords, f)?;
    let extrema = |h: &RatFn, pts: &[Vec<Rational>]| {
        let vals: Vec<ExtRational> = pts.iter().map(|x| h.eval(x)).collect();
        let max = vals.iter().max().cloned().unwrap();
        let min = vals.into_iter().min().unwrap();
        (max, min)
    };
    let (sup_v, inf_v) = extrema(f, v_samples);
    let (sup_w, inf_w) = extrema(&pb, w_samples);
    Ok(SupInfReport { sup_v, sup_w, inf_v, inf_w })
}

/// The generators of the example on `[-inf, inf]` with breakpoints at 0
/// and 1, continuous past 1: `f₁ = 0, t, 1` and `f₂ = t, 0, 1 - t` on
/// `t ≤ 0`, `0 ≤ t ≤ 1`, `t ≥ 1`.
///
/// Edge 0 runs from 0 towards `-inf` (offset `-t`), edge 1 from 0 to 1,
/// edge 2 from 1 towards `+inf` (offset `t - 1`).
pub fn line_example() -> GeneratorTuple {
    use crate::scalar::qi as z;
    let curve = MetricGraph::from_ids(
        &[(0, true), (1, false), (2, false), (3, true)],
        &[(1, 0, Length::Infinite), (1, 2, Length::Finite(z(1))), (2, 3, Length::Infinite)],
    )
    .expect("valid curve");
    let f1 = PLFunction::from_raw_edges(
        &curve,
        vec![(vec![(z(0), z(0))], Some(0)), (vec![(z(0), z(0)), (z(1), z(1))], None), (vec![(z(0), z(1))], Some(0))],
    )
    .expect("valid function");
    let f2 = PLFunction::from_raw_edges(
        &curve,
        vec![(vec![(z(0), z(0))], Some(-1)), (vec![(z(0), z(0)), (z(1), z(0))], None), (vec![(z(0), z(0))], Some(-1))],
    )
    .expect("valid function");
    GeneratorTuple::new(curve, vec![f1, f2]).expect("valid generators")
}

/// Curve point of the real line model of [`line_example`] at coordinate `t`.
pub fn line_point(t: &Rational) -> CurvePoint {
    if *t <= Rational::zero() {
        CurvePoint::at(0, -t)
    } else if *t <= Rational::one() {
        CurvePoint::at(1, t.clone())
    } else {
        CurvePoint::at(2, t - Rational::one())
    }
}
