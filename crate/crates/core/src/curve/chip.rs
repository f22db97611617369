//! Distances to subgraphs and chip firing moves `x ↦ -min(dist(S, x), l)`.

use num_traits::{Signed, Zero};

use super::graph::{CurvePoint, Length, MetricGraph, Pos};
use super::plfn::{EdgeFn, PLFunction};
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// A closed interval `[from, to]` of one edge; `to` may be the point at
/// infinity of an infinite edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub edge: usize,
    pub from: Rational,
    pub to: Pos,
}

impl Piece {
    pub fn point(edge: usize, t: Rational) -> Self {
        Piece { edge, from: t.clone(), to: Pos::At(t) }
    }

    pub fn interval(edge: usize, from: Rational, to: Rational) -> Self {
        Piece { edge, from, to: Pos::At(to) }
    }

    pub fn whole_edge(g: &MetricGraph, edge: usize) -> Self {
        let to = match &g.edge(edge).len {
            Length::Finite(l) => Pos::At(l.clone()),
            Length::Infinite => Pos::InfEnd,
        };
        Piece { edge, from: Rational::zero(), to }
    }

    /// Distance along the edge from offset `t` to the piece.
    fn gap(&self, t: &Rational) -> Rational {
        if t < &self.from {
            &self.from - t
        } else {
            match &self.to {
                Pos::At(b) if t > b => t - b,
                _ => Rational::zero(),
            }
        }
    }

    /// `t ↦ gap(t)` as an edge function.
    fn gap_fn(&self, len: &Length) -> EdgeFn {
        let a = &self.from;
        let mut pts = vec![(Rational::zero(), a.clone()), (a.clone(), Rational::zero())];
        let tail = match (&self.to, len) {
            (Pos::At(b), Length::Finite(l)) => {
                pts.push((b.clone(), Rational::zero()));
                pts.push((l.clone(), l - b));
                None
            }
            (Pos::At(b), Length::Infinite) => {
                pts.push((b.clone(), Rational::zero()));
                Some(1)
            }
            (Pos::InfEnd, _) => Some(0),
        };
        pts.dedup_by(|x, y| x.0 == y.0);
        EdgeFn::new(len, pts, tail).expect("gap functions are valid")
    }
}

/// A nonempty closed subset of a curve given as a union of edge intervals,
/// with no component consisting only of a point at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph {
    pieces: Vec<Piece>,
}

impl Subgraph {
    pub fn new(g: &MetricGraph, pieces: Vec<Piece>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidSubgraph(m));
        if pieces.is_empty() {
            return bad("the subgraph is empty".into());
        }
        for (i, p) in pieces.iter().enumerate() {
            let Some(e) = g.edges().get(p.edge) else {
                return bad(format!("piece {i} references missing edge {}", p.edge));
            };
            if p.from.is_negative() {
                return bad(format!("piece {i} starts before its edge"));
            }
            match (&p.to, &e.len) {
                (Pos::At(b), len) => {
                    if b < &p.from || len.finite().is_some_and(|l| b > l) {
                        return bad(format!("piece {i} is not an interval of edge {}", p.edge));
                    }
                }
                (Pos::InfEnd, Length::Finite(_)) => {
                    return bad(format!("piece {i} reaches infinity on a finite edge"));
                }
                (Pos::InfEnd, Length::Infinite) => {}
            }
        }
        Ok(Subgraph { pieces })
    }

    pub fn whole(g: &MetricGraph) -> Self {
        Subgraph { pieces: (0..g.edges().len()).map(|e| Piece::whole_edge(g, e)).collect() }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    fn vertex_distances(&self, g: &MetricGraph) -> Vec<Option<Rational>> {
        let mut seeds = Vec::new();
        for p in &self.pieces {
            seeds.extend(g.anchors(&CurvePoint::at(p.edge, p.from.clone())));
            if let Pos::At(b) = &p.to {
                seeds.extend(g.anchors(&CurvePoint::at(p.edge, b.clone())));
            }
        }
        g.vertex_distances(&seeds)
    }

    pub fn contains(&self, g: &MetricGraph, x: &CurvePoint) -> bool {
        dist_to_subgraph(g, self, x) == Length::Finite(Rational::zero())
    }
}

/// `min` over `S` of the distance to `x`.
pub fn dist_to_subgraph(g: &MetricGraph, s: &Subgraph, x: &CurvePoint) -> Length {
    if x.is_infinite() {
        let x = g.normalize(x);
        let hit = s.pieces.iter().any(|p| p.to == Pos::InfEnd && g.same_point(&CurvePoint::inf_end(p.edge), &x));
        return if hit { Length::Finite(Rational::zero()) } else { Length::Infinite };
    }
    let dist = s.vertex_distances(g);
    let mut best = g.reach(&dist, x);
    let t = x.offset().expect("finite point");
    for p in s.pieces.iter().filter(|p| p.edge == x.edge) {
        let gap = p.gap(t);
        if best.as_ref().is_none_or(|b| gap < *b) {
            best = Some(gap);
        }
    }
    best.map_or(Length::Infinite, Length::Finite)
}

/// The chip firing move `CF(S, l)(x) = -min(dist(S, x), l)`; `l` is a
/// positive rational or infinite.
pub fn chip_fire(g: &MetricGraph, s: &Subgraph, l: &Length) -> Result<PLFunction> {
    if let Length::Finite(l) = l {
        if !l.is_positive() {
            return Err(Error::InvalidSubgraph("the firing length must be positive".into()));
        }
    }
    let dist = s.vertex_distances(g);
    let mut out = Vec::with_capacity(g.edges().len());
    for (i, e) in g.edges().iter().enumerate() {
        let mut candidates = Vec::new();
        if let Some(du) = &dist[e.u] {
            candidates.push(EdgeFn::affine(&e.len, du.clone(), 1));
        }
        if let (Length::Finite(len), Some(dv)) = (&e.len, &dist[e.v]) {
            candidates.push(EdgeFn::affine(&e.len, dv + len, -1));
        }
        for p in s.pieces.iter().filter(|p| p.edge == i) {
            candidates.push(p.gap_fn(&e.len));
        }
        if let Length::Finite(l) = l {
            candidates.push(EdgeFn::constant(&e.len, l.clone()));
        }
        let neg = candidates
            .iter()
            .map(|c| c.scale(-1))
            .reduce(|a, b| a.max(&b))
            .expect("a finite endpoint is always reachable");
        out.push(neg);
    }
    let f = PLFunction::Pieces(out);
    debug_assert!(PLFunction::from_edges(g, f.edges().unwrap().to_vec()).is_ok());
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::plfn::CurveValue;
    use crate::scalar::{q, qi};

    fn fin(n: i64) -> Length {
        Length::Finite(qi(n))
    }

    fn sym_segment() -> MetricGraph {
        MetricGraph::from_ids(&[(0, false), (1, false), (2, false)], &[(0, 1, fin(2)), (0, 2, fin(2))]).unwrap()
    }

    fn pt(x: Rational) -> CurvePoint {
        if x.is_negative() {
            CurvePoint::at(1, -x)
        } else {
            CurvePoint::at(0, x)
        }
    }

    fn val(n: i64, d: i64) -> CurveValue {
        CurveValue::Finite(q(n, d))
    }

    #[test]
    fn subgraph_distances() {
        let g = MetricGraph::from_ids(&[(0, false), (1, false)], &[(0, 1, fin(3))]).unwrap();
        let s = Subgraph::new(&g, vec![Piece::point(0, qi(0))]).unwrap();
        assert_eq!(dist_to_subgraph(&g, &s, &CurvePoint::at(0, qi(3))), fin(3));
        assert_eq!(dist_to_subgraph(&g, &s, &CurvePoint::at(0, qi(0))), fin(0));
        let whole = Subgraph::whole(&g);
        for t in [qi(0), q(1, 3), qi(3)] {
            assert_eq!(dist_to_subgraph(&g, &whole, &CurvePoint::at(0, t)), fin(0));
        }
        assert!(Subgraph::new(&g, vec![]).is_err());
        assert!(Subgraph::new(&g, vec![Piece::interval(0, qi(2), qi(1))]).is_err());
        assert!(Subgraph::new(&g, vec![Piece::interval(0, qi(0), qi(4))]).is_err());
        assert!(Subgraph::new(&g, vec![Piece { edge: 0, from: qi(0), to: Pos::InfEnd }]).is_err());
    }

    #[test]
    fn chip_fire_on_a_segment() {
        let g = sym_segment();
        let s = Subgraph::new(&g, vec![Piece::point(0, qi(0))]).unwrap();
        let f = chip_fire(&g, &s, &fin(1)).unwrap();
        for (x, want) in [(0, 0), (1, -1), (-1, -1), (2, -1), (-2, -1)] {
            assert_eq!(f.eval(&pt(qi(x))), val(want, 1));
        }
        assert_eq!(f.eval(&pt(q(1, 2))), val(-1, 2));

        let f = chip_fire(&g, &s, &Length::Infinite).unwrap();
        for x in [qi(0), q(3, 2), q(-1, 3), qi(-2)] {
            assert_eq!(f.eval(&pt(x.clone())), CurveValue::Finite(-x.abs()));
        }

        let f = chip_fire(&g, &Subgraph::whole(&g), &fin(1)).unwrap();
        assert_eq!(f, PLFunction::constant(&g, qi(0)));
    }

    #[test]
    fn chip_fire_around_a_cycle() {
        // A circle of length 4 with S a single point: distance peaks at the
        // antipode.
        let g = MetricGraph::from_ids(&[(0, false), (1, false)], &[(0, 1, fin(1)), (1, 0, fin(3))]).unwrap();
        let s = Subgraph::new(&g, vec![Piece::point(0, qi(0))]).unwrap();
        let f = chip_fire(&g, &s, &Length::Infinite).unwrap();
        assert_eq!(f.eval(&CurvePoint::at(1, qi(1))), val(-2, 1));
        assert_eq!(f.eval(&CurvePoint::at(1, q(1, 2))), val(-3, 2));
        assert_eq!(f.eval(&CurvePoint::at(0, qi(1))), val(-1, 1));
        let bps = f.breakpoints(&g);
        assert_eq!(bps.len(), 1);
    }

    #[test]
    fn chip_fire_on_an_infinite_leaf() {
        let g =
            MetricGraph::from_ids(&[(0, false), (1, false), (2, true)], &[(0, 1, fin(1)), (1, 2, Length::Infinite)])
                .unwrap();
        let s = Subgraph::new(&g, vec![Piece::whole_edge(&g, 0)]).unwrap();
        let f = chip_fire(&g, &s, &fin(2)).unwrap();
        assert_eq!(f.eval(&CurvePoint::at(1, qi(1))), val(-1, 1));
        assert_eq!(f.eval(&CurvePoint::at(1, qi(7))), val(-2, 1));
        assert_eq!(f.eval(&CurvePoint::inf_end(1)), val(-2, 1));
        assert_eq!(dist_to_subgraph(&g, &s, &CurvePoint::inf_end(1)), Length::Infinite);

        let tail = Subgraph::new(&g, vec![Piece { edge: 1, from: qi(3), to: Pos::InfEnd }]).unwrap();
        assert_eq!(dist_to_subgraph(&g, &tail, &CurvePoint::inf_end(1)), fin(0));
        let f = chip_fire(&g, &tail, &Length::Infinite).unwrap();
        assert_eq!(f.eval(&CurvePoint::at(0, qi(0))), val(-4, 1));
        assert_eq!(f.eval(&CurvePoint::at(1, qi(10))), val(0, 1));
    }
}
