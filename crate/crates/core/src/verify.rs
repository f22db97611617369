//! Seeded end-to-end checks of the algebraic laws and worked examples. Each
//! check compares the library against an independent oracle: integer
//! sampling for polynomial equality, grid membership for varieties,
//! Bellman–Ford on a subdivided graph for distances, and direct pointwise
//! evaluation for curve functions.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::congruence::{detect_scaling_pair, twisted_pair, twisted_product_with, CongruencePresentation, Pair};
use crate::curve::{chip_fire, divisor, CurvePoint, CurveValue, Length, MetricGraph, PLFunction, Pos, Subgraph};
use crate::embed::{
    compose, embedding_report, line_example, line_point, psi_apply, pullback, sup_inf_report, theta_map, theta_point,
    verify_compat, GeneratorTuple, ImagePiece, Injectivity,
};
use crate::error::Result;
use crate::poly::{EqualityVerdict, Exponent, TropPoly};
use crate::random::{self, TestRng};
use crate::ratfn::RatFn;
use crate::scalar::{q, qi, Rational};
use crate::variety::{member, variety_cells, HCell};

/// Result of one check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    fn new(id: u8, name: &'static str, r: std::result::Result<String, String>) -> Self {
        match r {
            Ok(detail) => Outcome { id, name, passed: true, detail },
            Err(detail) => Outcome { id, name, passed: false, detail },
        }
    }
}

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("library error: {e}"))
}

pub const NAMES: [&str; 12] = [
    "non-cancellative products",
    "canonical form soundness",
    "variety union and intersection laws",
    "scaling pairs give empty varieties",
    "chip firing formula",
    "divisor degree zero",
    "line example embedding",
    "substitution compatibility",
    "functoriality of point maps",
    "doubling obstruction",
    "sup and inf inequalities",
    "cells are closed",
];

/// Runs every check with the given seed.
pub fn run_all(seed: u64) -> Vec<Outcome> {
    (1..=12).map(|id| run(id, seed)).collect()
}

/// Runs check `id` (1 to 12).
pub fn run(id: u8, seed: u64) -> Outcome {
    let s = seed.wrapping_mul(1000).wrapping_add(u64::from(id));
    let name = NAMES[usize::from(id) - 1];
    let r = match id {
        1 => non_cancellative(),
        2 => canonical_soundness(s),
        3 => variety_laws(s, twisted_pair).map(|(d, _)| d),
        4 => scaling_emptiness(s).map(|(d, _)| d),
        5 => chip_firing(s),
        6 => degree_zero(s),
        7 => line_embedding(),
        8 => compatibility(s),
        9 => functoriality(s),
        10 => doubling_obstruction(s),
        11 => sup_inf(s),
        12 => closedness(seed.wrapping_mul(1000).wrapping_add(3), seed.wrapping_mul(1000).wrapping_add(4)),
        _ => Err(format!("no check {id}")),
    };
    Outcome::new(id, name, r)
}

/// The union law with a caller-supplied twisted pair, for mutation tests.
pub fn run_variety_laws_with(seed: u64, twist: impl Fn(&Pair, &Pair) -> Pair) -> Outcome {
    let s = seed.wrapping_mul(1000).wrapping_add(3);
    Outcome::new(3, NAMES[2], variety_laws(s, twist).map(|(d, _)| d))
}

fn x1() -> TropPoly {
    TropPoly::var(1, 0)
}

fn c1(c: Rational) -> TropPoly {
    TropPoly::constant(1, c)
}

fn non_cancellative() -> Check {
    let lin = x1().add_raw(&c1(qi(0)));
    let cof = |a: i64| x1().pow(2).add_raw(&x1().mul_raw(&c1(qi(a)))).add_raw(&c1(qi(0)));
    let p = lin.mul_raw(&cof(-2));
    let r = lin.mul_raw(&cof(-1));
    let cube = x1().pow(3).add_raw(&x1().pow(2)).add_raw(&x1()).add_raw(&c1(qi(0)));
    ensure(p.fn_equal(&r).is_equal(), || "the two products differ as functions".into())?;
    ensure(p.fn_equal(&cube).is_equal(), || "the products differ from X^3 + X^2 + X + 0".into())?;
    let two = TropPoly::from_terms(1, [(vec![3], qi(0)), (vec![0], qi(0))]);
    ensure(p.canonicalize() == two && r.canonicalize() == two, || {
        format!("canonical forms {} and {} are not max(3*x1, 0)", p.canonicalize(), r.canonicalize())
    })?;
    ensure(cof(-2) != cof(-1), || "the cofactors coincide formally".into())?;
    Ok(format!("(x1 + 0) times distinct cofactors gives {p} twice, reducing to {two}"))
}

/// Integer-scaled evaluation of polynomials with small denominators.
struct IntOracle {
    /// Common denominator of coefficients and sample coordinates.
    scale: i128,
    den: i128,
}

impl IntOracle {
    fn new(polys: &[&TropPoly], den: i128) -> Self {
        let mut l = den;
        for p in polys {
            for c in p.terms().values() {
                l = l.lcm(&c.denom().to_i128().expect("small denominator"));
            }
        }
        IntOracle { scale: l, den }
    }

    /// `scale · p(k / den)`.
    fn eval(&self, p: &TropPoly, k: &[i128]) -> i128 {
        let unit = self.scale / self.den;
        p.terms()
            .iter()
            .map(|(e, c)| {
                let c = (c * Rational::from_integer(self.scale.into())).to_integer().to_i128().unwrap();
                c + e.iter().zip(k).map(|(&ei, &ki)| i128::from(ei) * ki * unit).sum::<i128>()
            })
            .max()
            .expect("nonempty polynomial")
    }
}

/// Grid point `k / den` with every coordinate within a radius drawn from
/// `{2, 10, 50, 200}`, so that far-away unbounded regions are also hit.
fn random_grid_point(rng: &mut TestRng, n: usize, den: i128) -> Vec<i128> {
    let r = [2, 10, 50, 200][rng.random_range(0..4)] * den;
    (0..n).map(|_| rng.random_range(-r..=r)).collect()
}

fn canonical_soundness(seed: u64) -> Check {
    const DEN: i128 = 12;
    let mut rng = random::rng(seed);
    let (mut equal, mut witness) = (0, 0);
    for case in 0..500 {
        let n = rng.random_range(1..=3);
        let p = random::poly(&mut rng, n, 8, 3);
        let canon = p.canonicalize();
        let oracle = IntOracle::new(&[&p, &canon], DEN);
        for _ in 0..100 {
            let k = random_grid_point(&mut rng, n, DEN);
            ensure(oracle.eval(&p, &k) == oracle.eval(&canon, &k), || {
                format!("case {case}: canonical form {canon} of {p} changes a value")
            })?;
        }
        let kind = case % 4;
        let other = match kind {
            0 => canon.clone(),
            1 => with_midpoint_term(&mut rng, &p),
            2 => raise_a_term(&mut rng, &p),
            _ => random::poly(&mut rng, n, 8, 3),
        };
        let verdict = p.fn_equal(&other);
        let oracle = IntOracle::new(&[&p, &other], DEN);
        let sampled_diff = (0..10_000).any(|_| {
            let k = random_grid_point(&mut rng, n, DEN);
            oracle.eval(&p, &k) != oracle.eval(&other, &k)
        });
        match &verdict {
            EqualityVerdict::Equal => {
                equal += 1;
                ensure(!sampled_diff, || format!("case {case}: {p} and {other} reported equal but differ"))?;
            }
            EqualityVerdict::Witness(x) => {
                witness += 1;
                ensure(p.eval(x) != other.eval(x), || format!("case {case}: witness {x:?} does not separate"))?;
                ensure(sampled_diff, || {
                    format!("case {case}: exact witness {x:?} for {p} vs {other} missed by sampling")
                })?;
            }
        }
        if kind < 2 {
            ensure(verdict.is_equal(), || format!("case {case}: equal-by-construction pair {p}, {other} separated"))?;
        }
    }
    Ok(format!("500 polynomials; {equal} equal and {witness} separated pairs"))
}

/// Adds a term at the midpoint of two exponents with coefficient below the
/// average; it never dominates strictly, so the function is unchanged.
fn with_midpoint_term(rng: &mut TestRng, p: &TropPoly) -> TropPoly {
    let terms: Vec<(&Exponent, &Rational)> = p.terms().iter().collect();
    let (ea, ca) = terms[rng.random_range(0..terms.len())];
    let (eb, cb) = terms[rng.random_range(0..terms.len())];
    let mid: Option<Exponent> = ea.iter().zip(eb).map(|(a, b)| ((a + b) % 2 == 0).then_some((a + b) / 2)).collect();
    let coef = (ca + cb) / qi(2) - q(1, rng.random_range(1..=4));
    match mid {
        Some(e) => p.add_raw(&TropPoly::monomial(e, coef)),
        None => p.add_raw(&TropPoly::monomial(ea.clone(), ca - qi(1))),
    }
}

fn raise_a_term(rng: &mut TestRng, p: &TropPoly) -> TropPoly {
    let terms: Vec<(Exponent, Rational)> = p.terms().iter().map(|(e, c)| (e.clone(), c.clone())).collect();
    let i = rng.random_range(0..terms.len());
    let bump = [q(1, 2), qi(1), qi(2)][rng.random_range(0..3)].clone();
    let raised = terms.into_iter().enumerate().map(|(j, (e, c))| if j == i { (e, c + &bump) } else { (e, c) });
    TropPoly::from_terms(p.n_vars(), raised)
}

/// A presentation whose pairs mostly cut out full-dimensional regions
/// `f ≤ g` via `(f ⊕ g, g)`.
fn region_presentation(rng: &mut TestRng, n: usize) -> CongruencePresentation {
    let k = rng.random_range(1..=2);
    let gens = (0..k)
        .map(|_| {
            let f = random::small_ratfn(rng, n);
            let g = random::small_ratfn(rng, n);
            if rng.random_bool(0.8) {
                (f.add(&g), g)
            } else {
                (f, g)
            }
        })
        .collect();
    CongruencePresentation::new(n, gens).expect("dimensions agree")
}

fn grid41() -> Vec<Vec<Rational>> {
    let axis: Vec<Rational> = (-20..=20).map(|k| q(k, 2)).collect();
    let mut out = Vec::with_capacity(41 * 41);
    for a in &axis {
        for b in &axis {
            out.push(vec![a.clone(), b.clone()]);
        }
    }
    out
}

fn variety_laws(seed: u64, twist: impl Fn(&Pair, &Pair) -> Pair) -> std::result::Result<(String, Vec<HCell>), String> {
    law_instances(seed, twist, true)
}

/// Draws the 50 presentation pairs; with `laws` unset only the cells of the
/// first five are computed.
fn law_instances(
    seed: u64,
    twist: impl Fn(&Pair, &Pair) -> Pair,
    laws: bool,
) -> std::result::Result<(String, Vec<HCell>), String> {
    let mut rng = random::rng(seed);
    let grid = grid41();
    let mut cells = Vec::new();
    let (mut in_union, mut in_meet) = (0usize, 0usize);
    for case in 0..50 {
        let e = region_presentation(&mut rng, 2);
        let f = region_presentation(&mut rng, 2);
        let tw = twisted_product_with(&e, &f, &twist);
        let meet = e.join(&f);
        for x in grid.iter().filter(|_| laws) {
            let (a, b) = (member(&e, x), member(&f, x));
            ensure(member(&tw, x) == (a || b), || {
                format!("case {case}: union law fails at {} (E: {a}, F: {b})", show(x))
            })?;
            ensure(member(&meet, x) == (a && b), || format!("case {case}: intersection law fails at {}", show(x)))?;
            in_union += usize::from(a || b);
            in_meet += usize::from(a && b);
        }
        if case < 5 {
            for pres in [&e, &f] {
                let complex = lib(variety_cells(pres))?;
                for x in grid.iter().step_by(7) {
                    ensure(complex.contains(x) == member(pres, x), || {
                        format!("case {case}: cells disagree with membership at {}", show(x))
                    })?;
                }
                cells.extend(complex.cells);
            }
        }
    }
    Ok((format!("50 pairs on the 41x41 grid; {in_union} union and {in_meet} intersection hits"), cells))
}

fn show(x: &[Rational]) -> String {
    format!("({})", x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "))
}

fn scaling_emptiness(seed: u64) -> std::result::Result<(String, Vec<HCell>), String> {
    let mut rng = random::rng(seed);
    let ts = [qi(1), qi(-1), q(1, 2), qi(3)];
    let mut cells = Vec::new();
    for case in 0..20 {
        let n = rng.random_range(1..=2);
        let f = random::small_ratfn(&mut rng, n);
        let t = ts[case % 4].clone();
        let e = CongruencePresentation::new(n, vec![(f.clone(), f.shift(&t))]).expect("dimensions agree");
        let complex = lib(variety_cells(&e))?;
        ensure(complex.is_empty(), || format!("case {case}: V(f, f + {t}) has cells for f = {f}"))?;
        ensure(detect_scaling_pair(&e).is_some(), || format!("case {case}: scaling pair not detected for f = {f}"))?;
        cells.extend(complex.cells);
        // A non-scaling companion pair keeps cells flowing into the closedness check.
        let g = random::small_ratfn(&mut rng, n);
        let other = CongruencePresentation::new(n, vec![(f.add(&g), g)]).expect("dimensions agree");
        cells.extend(lib(variety_cells(&other))?.cells);
    }
    Ok(("20 scaled pairs are empty and detected".into(), cells))
}

fn closedness(seed3: u64, seed4: u64) -> Check {
    let (_, mut cells) = law_instances(seed3, twisted_pair, false)?;
    cells.extend(scaling_emptiness(seed4)?.1);
    let open = cells.iter().filter(|c| !c.is_closed()).count();
    ensure(open == 0, || format!("{open} cells use strict relations"))?;
    Ok(format!("{} cells, all defined by equalities and non-strict inequalities", cells.len()))
}

/// Exact distances by Bellman–Ford on the curve subdivided at the given
/// extra points; vertices at infinity are dropped.
struct Subdivided {
    nodes: usize,
    arcs: Vec<(usize, usize, Rational)>,
    /// Node index of each `(edge, offset)` key.
    index: Vec<(usize, Rational, usize)>,
}

impl Subdivided {
    fn new(g: &MetricGraph, extra: &[(usize, Rational)]) -> Self {
        let mut nodes = g.vertices().len();
        let mut arcs = Vec::new();
        let mut index = Vec::new();
        for (e, edge) in g.edges().iter().enumerate() {
            let mut offs: BTreeSet<Rational> = extra.iter().filter(|(k, _)| *k == e).map(|(_, t)| t.clone()).collect();
            offs.insert(Rational::zero());
            if let Length::Finite(l) = &edge.len {
                offs.insert(l.clone());
            }
            let mut prev: Option<(Rational, usize)> = None;
            for t in offs {
                let node = if t.is_zero() {
                    edge.u
                } else if edge.len.finite() == Some(&t) {
                    edge.v
                } else {
                    nodes += 1;
                    nodes - 1
                };
                index.push((e, t.clone(), node));
                if let Some((t0, n0)) = prev {
                    arcs.push((n0, node, &t - &t0));
                }
                prev = Some((t, node));
            }
        }
        Subdivided { nodes, arcs, index }
    }

    fn node(&self, e: usize, t: &Rational) -> usize {
        self.index.iter().find(|(k, s, _)| *k == e && s == t).map(|x| x.2).expect("subdivision point")
    }

    fn distances(&self, from: usize) -> Vec<Option<Rational>> {
        let mut d: Vec<Option<Rational>> = vec![None; self.nodes];
        d[from] = Some(Rational::zero());
        loop {
            let mut changed = false;
            for (a, b, w) in &self.arcs {
                for (s, t) in [(a, b), (b, a)] {
                    if let Some(ds) = d[*s].clone() {
                        let nd = ds + w;
                        if d[*t].as_ref().is_none_or(|old| nd < *old) {
                            d[*t] = Some(nd);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return d;
            }
        }
    }
}

/// Whether the finite point `(e, t)` lies in `S`, checking every edge end
/// that represents the same vertex.
fn in_subgraph(g: &MetricGraph, s: &Subgraph, e: usize, t: &Rational) -> bool {
    let covers = |edge: usize, at: &Rational| {
        s.pieces().iter().any(|p| {
            p.edge == edge
                && p.from <= *at
                && match &p.to {
                    Pos::At(b) => at <= b,
                    Pos::InfEnd => true,
                }
        })
    };
    if covers(e, t) {
        return true;
    }
    let edge = g.edge(e);
    let vertex = if t.is_zero() {
        Some(edge.u)
    } else if edge.len.finite() == Some(t) {
        Some(edge.v)
    } else {
        None
    };
    let Some(v) = vertex else { return false };
    g.edges().iter().enumerate().any(|(k, other)| {
        (other.u == v && covers(k, &Rational::zero()))
            || (other.v == v && other.len.finite().is_some_and(|l| covers(k, l)))
    })
}

fn chip_firing(seed: u64) -> Check {
    let mut rng = random::rng(seed);
    let mut checked = 0;
    for case in 0..50 {
        let g = random::curve(&mut rng, 8, true);
        let s = random::subgraph(&mut rng, &g);
        let l = random::firing_length(&mut rng);
        let f = lib(chip_fire(&g, &s, &l))?;
        let mut pts: Vec<CurvePoint> = Vec::new();
        for p in s.pieces() {
            pts.push(CurvePoint::at(p.edge, p.from.clone()));
            if let Pos::At(b) = &p.to {
                pts.push(CurvePoint::at(p.edge, b.clone()));
            }
        }
        let horizon = qi(12);
        while pts.len() < 100 {
            pts.push(random::any_point(&mut rng, &g, &horizon));
        }
        for x in &pts {
            let got = f.eval(x);
            let want = match &x.pos {
                Pos::InfEnd => {
                    let in_s = s.pieces().iter().any(|p| p.edge == x.edge && p.to == Pos::InfEnd);
                    if in_s {
                        CurveValue::Finite(Rational::zero())
                    } else {
                        match &l {
                            Length::Finite(l) => CurveValue::Finite(-l.clone()),
                            Length::Infinite => CurveValue::NegInf,
                        }
                    }
                }
                Pos::At(t) => {
                    let d = if in_subgraph(&g, &s, x.edge, t) {
                        Rational::zero()
                    } else {
                        let mut marks: Vec<(usize, Rational)> = vec![(x.edge, t.clone())];
                        for p in s.pieces() {
                            marks.push((p.edge, p.from.clone()));
                            if let Pos::At(b) = &p.to {
                                marks.push((p.edge, b.clone()));
                            }
                        }
                        let sub = Subdivided::new(&g, &marks);
                        let dist = sub.distances(sub.node(x.edge, t));
                        marks[1..]
                            .iter()
                            .filter_map(|(e, b)| dist[sub.node(*e, b)].clone())
                            .min()
                            .expect("pieces have finite points")
                    };
                    CurveValue::Finite(-match &l {
                        Length::Finite(l) => d.min(l.clone()),
                        Length::Infinite => d,
                    })
                }
            };
            ensure(got == want, || format!("case {case}: CF at {x} is {got}, expected {want}"))?;
            if let (CurveValue::Finite(v), Length::Finite(l)) = (&got, &l) {
                ensure(!v.is_positive() && *v >= -l.clone(), || format!("case {case}: value {v} outside [-l, 0]"))?;
            }
            let zero = got == CurveValue::Finite(Rational::zero());
            let member = match &x.pos {
                Pos::At(t) => in_subgraph(&g, &s, x.edge, t),
                Pos::InfEnd => s.pieces().iter().any(|p| p.edge == x.edge && p.to == Pos::InfEnd),
            };
            ensure(zero == member, || format!("case {case}: zero set differs from S at {x}"))?;
            checked += 1;
        }
    }
    Ok(format!("50 curves, {checked} points"))
}

fn degree_zero(seed: u64) -> Check {
    let mut rng = random::rng(seed);
    let mut points = 0;
    for case in 0..100 {
        let g = random::curve(&mut rng, 8, false);
        let f = random::plfn(&mut rng, &g);
        let d = lib(divisor(&g, &f))?;
        ensure(d.degree() == 0, || format!("case {case}: degree {}", d.degree()))?;
        points += d.orders().len();
    }
    Ok(format!("100 functions, {points} support points, all of degree 0"))
}

fn line_embedding() -> Check {
    let g = line_example();
    let r = embedding_report(&g);
    let v = |a: i64, b: i64| vec![qi(a), qi(b)];
    let expected = vec![
        ImagePiece::Ray(v(0, 0), vec![0, -1]),
        ImagePiece::Segment(v(0, 0), v(1, 0)),
        ImagePiece::Ray(v(1, 0), vec![0, -1]),
    ];
    ensure(r.image == expected, || format!("image {:?}", r.image))?;
    ensure(r.segments.iter().all(|s| s.gcd == 1) && r.isometry_ok, || "a slope vector is not primitive".into())?;
    ensure(r.injective == Injectivity::Injective, || format!("not injective: {:?}", r.injective))?;
    // The defining pieces, with f2 = 1 - t past t = 1.
    for k in -40..=40 {
        let t = q(k, 8);
        let want = if t <= Rational::zero() {
            v(0, 0).into_iter().zip([qi(0), t.clone()]).map(|(_, b)| b).collect::<Vec<_>>()
        } else if t <= qi(1) {
            vec![t.clone(), qi(0)]
        } else {
            vec![qi(1), qi(1) - &t]
        };
        let got = lib(theta_point(&g, &line_point(&t)))?;
        ensure(got == want, || format!("theta({t}) = {}", show(&got)))?;
    }
    Ok("down-ray at x1 = 0, unit segment, down-ray at x1 = 1; primitive slopes; injective".into())
}

fn compatibility(seed: u64) -> Check {
    let mut rng = random::rng(seed);
    for c in 0..5 {
        let g = random::curve(&mut rng, 6, true);
        let n = rng.random_range(1..=3);
        let gens = random::generator_tuple(&mut rng, &g, n);
        let horizon = gens.fns().iter().map(|f| f.horizon(&g)).max().expect("generators");
        let pts: Vec<CurvePoint> = (0..20).map(|_| random::finite_point(&mut rng, &g, &horizon)).collect();
        for k in 0..100 {
            let f = random::ratfn_or_bottom(&mut rng, n);
            ensure(lib(verify_compat(&f, &gens, &pts))?, || format!("curve {c}, function {k}: {f} fails"))?;
        }
    }
    Ok("5 curves x 100 functions x 20 points".into())
}

fn functoriality(seed: u64) -> Check {
    let mut rng = random::rng(seed);
    for case in 0..20 {
        let (n, m, k) = (rng.random_range(1..=2), rng.random_range(1..=2), rng.random_range(1..=2));
        let psi: Vec<RatFn> = (0..n).map(|_| random::small_ratfn(&mut rng, m)).collect();
        let phi: Vec<RatFn> = (0..m).map(|_| random::small_ratfn(&mut rng, k)).collect();
        let composite = lib(compose(&psi, &phi))?;
        for _ in 0..100 {
            let z = random::point(&mut rng, k, 10);
            let direct = theta_map(&composite, &z);
            let stepwise = theta_map(&phi, &z).and_then(|y| theta_map(&psi, &y));
            ensure(direct == stepwise, || format!("case {case}: maps differ at {}", show(&z)))?;
        }
    }
    Ok("20 coordinate tuple pairs x 100 points".into())
}

fn unit_segment_identity() -> GeneratorTuple {
    let curve = MetricGraph::from_ids(&[(0, false), (1, false)], &[(0, 1, Length::Finite(qi(1)))]).expect("curve");
    let id = PLFunction::from_raw_edges(&curve, vec![(vec![(qi(0), qi(0)), (qi(1), qi(1))], None)]).expect("id");
    GeneratorTuple::new(curve, vec![id]).expect("generators")
}

fn slopes_on(f: &PLFunction) -> Vec<Rational> {
    let e = &f.edges().expect("finite")[0];
    e.breaks().windows(2).map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0)).collect()
}

fn doubling_obstruction(seed: u64) -> Check {
    let mut rng = random::rng(seed);
    let y = RatFn::var(1, 0);
    let coords = [y.mul(&y)];
    let w = unit_segment_identity();
    for case in 0..50 {
        let f = random::ratfn(&mut rng, 1);
        let pb = lib(pullback(&coords, &f))?;
        let exps_even = [pb.num(), pb.den()].iter().all(|p| p.terms().keys().all(|e| e[0] % 2 == 0));
        ensure(exps_even, || format!("case {case}: pullback {pb} has an odd exponent"))?;
        let on_w = lib(psi_apply(&pb, &w))?;
        for s in slopes_on(&on_w) {
            ensure(s.is_integer() && s.to_integer().is_even(), || format!("case {case}: slope {s} on (0, 1)"))?;
        }
        for k in 0..=20 {
            let t = q(k, 20);
            ensure(pb.eval(std::slice::from_ref(&t)) == f.eval(&[&t * qi(2)]), || {
                format!("case {case}: pullback wrong at {t}")
            })?;
        }
    }
    let id_slopes = slopes_on(&lib(psi_apply(&y, &w))?);
    ensure(id_slopes == vec![qi(1)], || "identity slope is not 1".into())?;
    Ok("50 pullbacks have only even slopes on (0, 1); the identity has slope 1, so it is not a pullback".into())
}

fn sup_inf(seed: u64) -> Check {
    let tenths = |hi: i64| (0..=10 * hi).map(|k| vec![q(k, 10)]).collect::<Vec<_>>();
    let y = RatFn::var(1, 0);
    let r = lib(sup_inf_report(&RatFn::var(1, 0), &tenths(2), &tenths(1), &[y.mul(&y)]))?;
    ensure(r.holds(), || format!("doubling example: {r:?}"))?;
    ensure(r.sup_v == r.sup_w && r.inf_v == r.inf_w, || format!("doubling example extrema differ: {r:?}"))?;
    let mut rng = random::rng(seed);
    for case in 0..20 {
        let (n, m) = (rng.random_range(1..=2), rng.random_range(1..=2));
        let coords: Vec<RatFn> = (0..n).map(|_| random::small_ratfn(&mut rng, m)).collect();
        let w: Vec<Vec<Rational>> = (0..30).map(|_| random::point(&mut rng, m, 5)).collect();
        let mut v: Vec<Vec<Rational>> = w.iter().filter_map(|y| theta_map(&coords, y)).collect();
        v.extend((0..30).map(|_| random::point(&mut rng, n, 5)));
        let f = random::ratfn(&mut rng, n);
        let r = lib(sup_inf_report(&f, &v, &w, &coords))?;
        ensure(r.holds(), || format!("case {case}: {r:?}"))?;
    }
    Ok("doubling example attains equality; 20 random instances satisfy both inequalities".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subdivided_distances_match_point_dist() {
        let mut rng = random::rng(11);
        for _ in 0..30 {
            let g = random::curve(&mut rng, 6, true);
            let a = random::finite_point(&mut rng, &g, &qi(5));
            let b = random::finite_point(&mut rng, &g, &qi(5));
            let (ta, tb) = (a.offset().unwrap().clone(), b.offset().unwrap().clone());
            let sub = Subdivided::new(&g, &[(a.edge, ta.clone()), (b.edge, tb.clone())]);
            let d = sub.distances(sub.node(a.edge, &ta))[sub.node(b.edge, &tb)].clone().unwrap();
            assert_eq!(g.point_dist(&a, &b), Length::Finite(d));
        }
    }

    #[test]
    fn fast_checks_pass() {
        for id in [1, 6, 7, 10] {
            let o = run(id, 0);
            assert!(o.passed, "{}: {}", o.name, o.detail);
        }
    }
}
