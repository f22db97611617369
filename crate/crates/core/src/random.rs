//! Seeded generators of random instances for property checks and
//! benchmarks. Sizes are kept small so exact arithmetic stays cheap.

use std::collections::VecDeque;

use num_traits::Zero;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::congruence::CongruencePresentation;
use crate::curve::{CurvePoint, Edge, Length, MetricGraph, PLFunction, Piece, Pos, RawEdge, Subgraph, Vertex};
use crate::embed::GeneratorTuple;
use crate::expr::{Expr, Node};
use crate::poly::TropPoly;
use crate::ratfn::RatFn;
use crate::scalar::{q, qi, ExtRational, Rational};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational with numerator in `[-bound·d, bound·d]` and denominator
/// `d ∈ {1, 2, 3, 4}`.
pub fn rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    let d = rng.random_range(1..=4);
    q(rng.random_range(-bound * d..=bound * d), d)
}

/// A rational in the open interval `(0, hi)` with small denominator.
pub fn rational_in<R: Rng>(rng: &mut R, hi: &Rational) -> Rational {
    let d = rng.random_range(2..=8);
    let k = rng.random_range(1..d);
    hi * q(k, d)
}

/// A random point of `Q^n` with coordinates in `[-bound, bound]`.
pub fn point<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<Rational> {
    (0..n).map(|_| rational(rng, bound)).collect()
}

/// A polynomial with `1..=max_terms` terms of degree at most `max_deg` per
/// variable. No canonicalization is applied.
pub fn poly<R: Rng>(rng: &mut R, n: usize, max_terms: usize, max_deg: u32) -> TropPoly {
    let k = rng.random_range(1..=max_terms);
    let terms: Vec<_> = (0..k)
        .map(|_| {
            let e = (0..n).map(|_| rng.random_range(0..=max_deg)).collect();
            (e, rational(rng, 5))
        })
        .collect();
    TropPoly::from_terms(n, terms)
}

/// A non-bottom rational function with small numerator and denominator.
pub fn ratfn<R: Rng>(rng: &mut R, n: usize) -> RatFn {
    let num = poly(rng, n, 3, 2);
    let den = poly(rng, n, 2, 2);
    RatFn::new(num, den).expect("denominator is not bottom")
}

/// A non-bottom rational function with affine numerator terms and a
/// monomial or binomial denominator; cheap to substitute.
pub fn small_ratfn<R: Rng>(rng: &mut R, n: usize) -> RatFn {
    let num = poly(rng, n, 2, 1);
    let den = poly(rng, n, 2, 1);
    RatFn::new(num, den).expect("denominator is not bottom")
}

/// A rational function, bottom with small probability.
pub fn ratfn_or_bottom<R: Rng>(rng: &mut R, n: usize) -> RatFn {
    if rng.random_bool(0.05) {
        RatFn::bottom(n)
    } else {
        ratfn(rng, n)
    }
}

pub fn expr_node<R: Rng>(rng: &mut R, n: usize, depth: u32) -> Node {
    let leaf = depth == 0 || rng.random_bool(0.3);
    if leaf {
        return match rng.random_range(0..8) {
            0 => Node::Const(ExtRational::NegInf),
            1..=3 => Node::Const(ExtRational::Finite(rational(rng, 4))),
            _ => Node::Var(rng.random_range(1..=n)),
        };
    }
    match rng.random_range(0..3) {
        0 => Node::Max((0..rng.random_range(2..=3)).map(|_| expr_node(rng, n, depth - 1)).collect()),
        1 => Node::Sum((0..rng.random_range(2..=3)).map(|_| expr_node(rng, n, depth - 1)).collect()),
        _ => Node::Neg(Box::new(expr_node(rng, n, depth - 1))),
    }
}

pub fn expr<R: Rng>(rng: &mut R, n: usize, depth: u32) -> Expr {
    Expr::new(n, expr_node(rng, n, depth)).expect("variables are in range")
}

/// A presentation with `k` generating pairs.
pub fn presentation<R: Rng>(rng: &mut R, n: usize, k: usize) -> CongruencePresentation {
    let gens = (0..k).map(|_| (ratfn(rng, n), ratfn(rng, n))).collect();
    CongruencePresentation::new(n, gens).expect("dimensions agree")
}

/// A connected curve with at most `max_edges` edges, of which up to two are
/// infinite leaves when `infinite` is set.
pub fn curve<R: Rng>(rng: &mut R, max_edges: usize, infinite: bool) -> MetricGraph {
    let max_edges = max_edges.max(1);
    let n_inf = if infinite { rng.random_range(0..=2.min(max_edges - 1)) } else { 0 };
    let budget = max_edges - n_inf;
    let nf = rng.random_range(1..=budget + 1);
    let len = |rng: &mut R| {
        let d = rng.random_range(1..=3);
        Length::Finite(q(rng.random_range(1..=3 * d), d))
    };
    let mut edges = Vec::new();
    for v in 1..nf {
        let u = rng.random_range(0..v);
        edges.push(Edge { u, v, len: len(rng) });
    }
    let mut extra = rng.random_range(0..=budget - (nf - 1));
    if nf == 1 && n_inf == 0 {
        extra = extra.max(1);
    }
    for _ in 0..extra {
        let u = rng.random_range(0..nf);
        let v = rng.random_range(0..nf);
        edges.push(Edge { u, v, len: len(rng) });
    }
    let mut vertices: Vec<Vertex> = (0..nf).map(|i| Vertex { id: i as u64, infinite: false }).collect();
    for _ in 0..n_inf {
        let id = vertices.len();
        vertices.push(Vertex { id: id as u64, infinite: true });
        edges.push(Edge { u: rng.random_range(0..nf), v: id, len: Length::Infinite });
    }
    MetricGraph::new(vertices, edges).expect("generated curves are valid")
}

/// Appends increasing breakpoints on `(start, end)` with random integer
/// slopes, starting from `(start, v0)`; returns the value at `end`.
fn random_run<R: Rng>(
    rng: &mut R,
    pts: &mut Vec<(Rational, Rational)>,
    start: &Rational,
    end: &Rational,
    v0: Rational,
) -> Rational {
    let cuts = rng.random_range(0..=2);
    let mut offs: Vec<Rational> = (0..cuts).map(|_| start + rational_in(rng, &(end - start))).collect();
    offs.sort();
    offs.dedup();
    offs.push(end.clone());
    let mut at = start.clone();
    let mut v = v0;
    for o in offs {
        let s = qi(rng.random_range(-3..=3));
        v = &v + &s * (&o - &at);
        push_point(pts, o.clone(), v.clone());
        at = o;
    }
    v
}

fn push_point(pts: &mut Vec<(Rational, Rational)>, t: Rational, v: Rational) {
    if pts.last().is_none_or(|(o, _)| *o != t) {
        pts.push((t, v));
    }
}

/// A random element of `Rat(Γ) \ {-inf}`. Values at vertices come from a
/// spanning-tree potential; edges closing cycles end with a two-slope piece
/// that matches the potential at both ends.
pub fn plfn<R: Rng>(rng: &mut R, g: &MetricGraph) -> PLFunction {
    let nv = g.vertices().len();
    let mut pot: Vec<Option<Rational>> = vec![None; nv];
    let mut tree_edge = vec![false; g.edges().len()];
    pot[0] = Some(rational(rng, 3));
    let mut queue = VecDeque::from([0usize]);
    let mut per_edge: Vec<Option<RawEdge>> = vec![None; g.edges().len()];
    // Spanning tree over finite edges, assigning potentials along the way.
    while let Some(v) = queue.pop_front() {
        for &(e, _) in g.incidence(v) {
            let edge = g.edge(e);
            let Length::Finite(_) = edge.len else { continue };
            let w = g.other_end(e, v);
            if pot[w].is_none() {
                tree_edge[e] = true;
                queue.push_back(w);
                let data = draw_tree_edge(rng, g, e, v, pot[v].clone().unwrap());
                pot[w] = Some(data.1);
                per_edge[e] = Some((data.0, None));
            }
        }
    }
    for (e, edge) in g.edges().iter().enumerate() {
        if tree_edge[e] {
            continue;
        }
        let pu = pot[edge.u].clone().expect("finite vertices are reached");
        let mut pts = vec![(Rational::zero(), pu.clone())];
        match &edge.len {
            Length::Infinite => {
                let a = if rng.random_bool(0.5) { rational_in(rng, &qi(4)) } else { Rational::zero() };
                if !a.is_zero() {
                    random_run(rng, &mut pts, &Rational::zero(), &a, pu);
                }
                per_edge[e] = Some((pts, Some(rng.random_range(-2..=2))));
            }
            Length::Finite(l) => {
                let pv = pot[edge.v].clone().unwrap();
                let a = if rng.random_bool(0.5) { rational_in(rng, l) } else { Rational::zero() };
                let va = if a.is_zero() { pu } else { random_run(rng, &mut pts, &Rational::zero(), &a, pu) };
                let rest = l - &a;
                let m = (&pv - &va) / &rest;
                let lo = m.floor().to_integer() - rng.random_range(0..=1);
                let hi = m.ceil().to_integer() + rng.random_range(0..=1);
                if lo == hi {
                    push_point(&mut pts, l.clone(), pv);
                } else {
                    let (p, qq) = (Rational::from_integer(lo), Rational::from_integer(hi));
                    let s = (&pv - &va - &qq * &rest) / (&p - &qq);
                    let mid = &a + &s;
                    push_point(&mut pts, mid.clone(), &va + &p * &s);
                    push_point(&mut pts, l.clone(), pv);
                }
                per_edge[e] = Some((pts, None));
            }
        }
    }
    let edges = per_edge.into_iter().map(|x| x.expect("every edge is drawn")).collect();
    PLFunction::from_raw_edges(g, edges).expect("generated functions are continuous")
}

/// Draws a tree edge starting from the known end `from`; returns the
/// breakpoints in edge orientation and the value at the other end.
fn draw_tree_edge<R: Rng>(
    rng: &mut R,
    g: &MetricGraph,
    e: usize,
    from: usize,
    value: Rational,
) -> (Vec<(Rational, Rational)>, Rational) {
    let edge = g.edge(e);
    let l = edge.len.finite().expect("tree edges are finite").clone();
    let mut pts = vec![(Rational::zero(), value.clone())];
    let end = random_run(rng, &mut pts, &Rational::zero(), &l, value.clone());
    if edge.u == from {
        (pts, end)
    } else {
        // Reflect so that the known value sits at offset `len`.
        let pts: Vec<_> = pts.into_iter().rev().map(|(t, v)| (&l - t, v)).collect();
        (pts, end)
    }
}

/// A random finite point, at a vertex with probability about 1/5. Offsets
/// on infinite edges stay below `horizon`.
pub fn finite_point<R: Rng>(rng: &mut R, g: &MetricGraph, horizon: &Rational) -> CurvePoint {
    let e = rng.random_range(0..g.edges().len());
    let len = match &g.edge(e).len {
        Length::Finite(l) => l.clone(),
        Length::Infinite => horizon.clone(),
    };
    let t = match rng.random_range(0..10) {
        0 => Rational::zero(),
        1 if g.edge(e).len.finite().is_some() => len,
        _ => rational_in(rng, &len),
    };
    CurvePoint::at(e, t)
}

/// A random point, possibly a point at infinity.
pub fn any_point<R: Rng>(rng: &mut R, g: &MetricGraph, horizon: &Rational) -> CurvePoint {
    let inf: Vec<usize> = (0..g.edges().len()).filter(|&e| g.edge(e).len.is_infinite()).collect();
    if !inf.is_empty() && rng.random_bool(0.1) {
        return CurvePoint::inf_end(*inf.choose(rng).unwrap());
    }
    finite_point(rng, g, horizon)
}

/// A subgraph of one to three pieces.
pub fn subgraph<R: Rng>(rng: &mut R, g: &MetricGraph) -> Subgraph {
    let k = rng.random_range(1..=3);
    let pieces = (0..k)
        .map(|_| {
            let e = rng.random_range(0..g.edges().len());
            let span = g.edge(e).len.finite().cloned().unwrap_or_else(|| qi(3));
            match rng.random_range(0..4) {
                0 => Piece::whole_edge(g, e),
                1 => Piece::point(
                    e,
                    [Rational::zero(), span.clone(), rational_in(rng, &span)].choose(rng).unwrap().clone(),
                ),
                2 if g.edge(e).len.is_infinite() => Piece { edge: e, from: rational_in(rng, &span), to: Pos::InfEnd },
                _ => {
                    let a = rational_in(rng, &span);
                    let b = rational_in(rng, &span);
                    Piece::interval(e, a.clone().min(b.clone()), a.max(b))
                }
            }
        })
        .collect();
    Subgraph::new(g, pieces).expect("generated subgraphs are valid")
}

/// A firing length: infinite with probability 1/4.
pub fn firing_length<R: Rng>(rng: &mut R) -> Length {
    if rng.random_bool(0.25) {
        Length::Infinite
    } else {
        Length::Finite(rational_in(rng, &qi(4)))
    }
}

pub fn generator_tuple<R: Rng>(rng: &mut R, g: &MetricGraph, n: usize) -> GeneratorTuple {
    let fns = (0..n).map(|_| plfn(rng, g)).collect();
    GeneratorTuple::new(g.clone(), fns).expect("generators are finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{divisor, PLFunction};

    #[test]
    fn generated_curves_and_functions_are_valid() {
        let mut r = rng(7);
        for _ in 0..200 {
            let g = curve(&mut r, 8, true);
            assert!(g.edges().len() <= 8);
            let f = plfn(&mut r, &g);
            let edges = f.edges().unwrap().to_vec();
            assert!(PLFunction::from_edges(&g, edges).is_ok());
            let _ = subgraph(&mut r, &g);
            let h = f.horizon(&g);
            let p = any_point(&mut r, &g, &h);
            g.check_point(&p).unwrap();
            assert_eq!(divisor(&g, &f).unwrap().degree(), 0);
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = curve(&mut rng(3), 8, true);
        let b = curve(&mut rng(3), 8, true);
        assert_eq!(a, b);
        assert_eq!(plfn(&mut rng(4), &a), plfn(&mut rng(4), &b));
    }
}
