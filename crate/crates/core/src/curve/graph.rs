//! Tropical curves given by a model: a connected graph whose edges are
//! identified with closed intervals `[0, len]`, where `len = ∞` is allowed
//! only on leaf edges whose leaf end is a point at infinity.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// An edge length or a distance: a nonnegative rational or `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Length {
    Finite(Rational),
    Infinite,
}

impl Length {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Length::Finite(r) => Some(r),
            Length::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Length::Infinite)
    }
}

impl PartialOrd for Length {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Length {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Length::Finite(a), Length::Finite(b)) => a.cmp(b),
            (Length::Finite(_), Length::Infinite) => Ordering::Less,
            (Length::Infinite, Length::Finite(_)) => Ordering::Greater,
            (Length::Infinite, Length::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(r) => write!(f, "{r}"),
            Length::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: u64,
    pub infinite: bool,
}

/// An edge from `u` to `v`; offsets are measured from `u`. On an infinite
/// edge `v` is the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub len: Length,
}

/// Position along an edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pos {
    At(Rational),
    /// The far end of an infinite edge.
    InfEnd,
}

/// A point of the curve as `(edge, position)`. Use
/// [`MetricGraph::normalize`] before comparing points that may sit on
/// vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurvePoint {
    pub edge: usize,
    pub pos: Pos,
}

impl CurvePoint {
    pub fn at(edge: usize, offset: Rational) -> Self {
        CurvePoint { edge, pos: Pos::At(offset) }
    }

    pub fn inf_end(edge: usize) -> Self {
        CurvePoint { edge, pos: Pos::InfEnd }
    }

    pub fn is_infinite(&self) -> bool {
        self.pos == Pos::InfEnd
    }

    pub fn offset(&self) -> Option<&Rational> {
        match &self.pos {
            Pos::At(t) => Some(t),
            Pos::InfEnd => None,
        }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.pos {
            Pos::At(t) => write!(f, "e{}@{t}", self.edge),
            Pos::InfEnd => write!(f, "e{}@inf", self.edge),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    /// Offset 0 of the edge.
    Start,
    /// Offset `len` of the edge.
    Stop,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    incidence: Vec<Vec<(usize, End)>>,
}

/// A model with the valence-2 vertices smoothed away.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalModel {
    /// Indices into the curve's vertex list.
    pub vertices: Vec<usize>,
    pub edges: Vec<ModelEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelEdge {
    pub u: usize,
    pub v: usize,
    pub len: Length,
    /// Original edges traversed from `u` to `v`.
    pub chain: Vec<usize>,
}

impl MetricGraph {
    /// Validates the model. Infinite edges are reoriented so that `v` is the
    /// point at infinity.
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidCurve(m));
        if vertices.is_empty() || edges.is_empty() {
            return bad("a curve needs at least one vertex and one edge".into());
        }
        let nv = vertices.len();
        let mut edges = edges;
        for (i, e) in edges.iter_mut().enumerate() {
            if e.u >= nv || e.v >= nv {
                return bad(format!("edge {i} references a missing vertex"));
            }
            match &e.len {
                Length::Finite(l) if !l.is_positive() => {
                    return bad(format!("edge {i} has nonpositive length"));
                }
                Length::Finite(_) => {
                    if vertices[e.u].infinite || vertices[e.v].infinite {
                        return bad(format!("edge {i} has finite length but reaches a point at infinity"));
                    }
                }
                Length::Infinite => {
                    if e.u == e.v {
                        return bad(format!("edge {i} is an infinite loop"));
                    }
                    if vertices[e.u].infinite {
                        std::mem::swap(&mut e.u, &mut e.v);
                    }
                    if !vertices[e.v].infinite || vertices[e.u].infinite {
                        return bad(format!("infinite edge {i} must join a finite vertex to a point at infinity"));
                    }
                }
            }
        }
        let mut incidence = vec![Vec::new(); nv];
        for (i, e) in edges.iter().enumerate() {
            incidence[e.u].push((i, End::Start));
            incidence[e.v].push((i, End::Stop));
        }
        for (i, v) in vertices.iter().enumerate() {
            if v.infinite && incidence[i].len() != 1 {
                return bad(format!("point at infinity {} must have valence 1", v.id));
            }
        }
        let mut ids = BTreeSet::new();
        if !vertices.iter().all(|v| ids.insert(v.id)) {
            return bad("duplicate vertex ids".into());
        }
        let g = MetricGraph { vertices, edges, incidence };
        if !g.is_connected() {
            return bad("the graph is not connected".into());
        }
        Ok(g)
    }

    /// Builds from `(id, infinite)` vertices and `(u_id, v_id, len)` edges.
    pub fn from_ids(vertices: &[(u64, bool)], edges: &[(u64, u64, Length)]) -> Result<Self> {
        let index: HashMap<u64, usize> = vertices.iter().enumerate().map(|(i, (id, _))| (*id, i)).collect();
        let lookup =
            |id: u64| index.get(&id).copied().ok_or_else(|| Error::InvalidCurve(format!("unknown vertex id {id}")));
        let edges = edges
            .iter()
            .map(|(u, v, len)| Ok(Edge { u: lookup(*u)?, v: lookup(*v)?, len: len.clone() }))
            .collect::<Result<Vec<_>>>()?;
        let vertices = vertices.iter().map(|&(id, infinite)| Vertex { id, infinite }).collect();
        MetricGraph::new(vertices, edges)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(e, _) in &self.incidence[v] {
                let w = self.other_end(e, v);
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn incidence(&self, v: usize) -> &[(usize, End)] {
        &self.incidence[v]
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let edge = &self.edges[e];
        if edge.u == v {
            edge.v
        } else {
            edge.u
        }
    }

    pub fn has_infinite_edges(&self) -> bool {
        self.edges.iter().any(|e| e.len.is_infinite())
    }

    /// Number of edge ends at a vertex (a loop counts twice).
    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    /// Checks that the point lies on the curve.
    pub fn check_point(&self, p: &CurvePoint) -> Result<()> {
        let edge = self.edges.get(p.edge).ok_or_else(|| Error::InvalidPoint(format!("no edge {}", p.edge)))?;
        match (&p.pos, &edge.len) {
            (Pos::InfEnd, Length::Infinite) => Ok(()),
            (Pos::InfEnd, Length::Finite(_)) => {
                Err(Error::InvalidPoint(format!("edge {} has no point at infinity", p.edge)))
            }
            (Pos::At(t), len) => {
                if t.is_negative() || len.finite().is_some_and(|l| t > l) {
                    Err(Error::InvalidPoint(format!("offset {t} outside edge {}", p.edge)))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Canonical representative of a vertex as a curve point.
    pub fn vertex_point(&self, v: usize) -> CurvePoint {
        let &(e, end) = self.incidence[v]
            .iter()
            .min_by_key(|(e, end)| (*e, *end == End::Stop))
            .expect("vertices have incident edges");
        match (end, &self.edges[e].len) {
            (End::Start, _) => CurvePoint::at(e, Rational::zero()),
            (End::Stop, Length::Finite(l)) => CurvePoint::at(e, l.clone()),
            (End::Stop, Length::Infinite) => CurvePoint::inf_end(e),
        }
    }

    /// The vertex a point sits on, if any.
    pub fn vertex_of(&self, p: &CurvePoint) -> Option<usize> {
        let edge = &self.edges[p.edge];
        match &p.pos {
            Pos::InfEnd => Some(edge.v),
            Pos::At(t) if t.is_zero() => Some(edge.u),
            Pos::At(t) if edge.len.finite() == Some(t) => Some(edge.v),
            Pos::At(_) => None,
        }
    }

    pub fn normalize(&self, p: &CurvePoint) -> CurvePoint {
        match self.vertex_of(p) {
            Some(v) => self.vertex_point(v),
            None => p.clone(),
        }
    }

    pub fn same_point(&self, a: &CurvePoint, b: &CurvePoint) -> bool {
        self.normalize(a) == self.normalize(b)
    }

    /// Number of local directions at a finite point; 1 at infinity.
    pub fn valence(&self, p: &CurvePoint) -> usize {
        match self.vertex_of(p) {
            Some(v) if self.vertices[v].infinite => 1,
            Some(v) => self.degree(v),
            None => 2,
        }
    }

    /// Shortest distances from seeded vertices along finite edges.
    pub(crate) fn vertex_distances(&self, seeds: &[(usize, Rational)]) -> Vec<Option<Rational>> {
        let mut dist: Vec<Option<Rational>> = vec![None; self.vertices.len()];
        let mut heap = BinaryHeap::new();
        for (v, d) in seeds {
            if dist[*v].as_ref().is_none_or(|old| d < old) {
                dist[*v] = Some(d.clone());
                heap.push(Reverse((d.clone(), *v)));
            }
        }
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist[v].as_ref().is_some_and(|best| *best < d) {
                continue;
            }
            for &(e, _) in &self.incidence[v] {
                let Length::Finite(l) = &self.edges[e].len else { continue };
                let w = self.other_end(e, v);
                let nd = &d + l;
                if dist[w].as_ref().is_none_or(|old| nd < *old) {
                    dist[w] = Some(nd.clone());
                    heap.push(Reverse((nd, w)));
                }
            }
        }
        dist
    }

    /// Distance from the vertex distances `dist` to a finite point.
    pub(crate) fn reach(&self, dist: &[Option<Rational>], p: &CurvePoint) -> Option<Rational> {
        let edge = &self.edges[p.edge];
        let t = p.offset()?;
        let via_u = dist[edge.u].as_ref().map(|d| d + t);
        let via_v = match (&edge.len, &dist[edge.v]) {
            (Length::Finite(l), Some(d)) => Some(d + l - t),
            _ => None,
        };
        match (via_u, via_v) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Vertex seeds `(vertex, distance)` for a finite point.
    pub(crate) fn anchors(&self, p: &CurvePoint) -> Vec<(usize, Rational)> {
        let edge = &self.edges[p.edge];
        let t = p.offset().expect("finite point").clone();
        let mut out = Vec::with_capacity(2);
        if let Length::Finite(l) = &edge.len {
            out.push((edge.v, l - &t));
        }
        out.push((edge.u, t));
        out
    }

    /// Shortest-path distance; infinite when exactly one point is at
    /// infinity or the points are distinct points at infinity.
    pub fn point_dist(&self, x: &CurvePoint, y: &CurvePoint) -> Length {
        if self.same_point(x, y) {
            return Length::Finite(Rational::zero());
        }
        if x.is_infinite() || y.is_infinite() {
            return Length::Infinite;
        }
        let dist = self.vertex_distances(&self.anchors(x));
        let mut best = self.reach(&dist, y);
        if x.edge == y.edge {
            let direct = (x.offset().unwrap() - y.offset().unwrap()).abs();
            best = Some(best.map_or(direct.clone(), |b| b.min(direct)));
        }
        best.map_or(Length::Infinite, Length::Finite)
    }

    /// The canonical model: vertices of valence other than 2, with one
    /// chosen point for a circle and an added finite point for the line
    /// with two points at infinity.
    pub fn canonical_model(&self) -> CanonicalModel {
        let mut keep: Vec<usize> = (0..self.vertices.len()).filter(|&v| self.degree(v) != 2).collect();
        if keep.is_empty() {
            keep.push(0);
        } else if keep.iter().all(|&v| self.vertices[v].infinite) && keep.len() == 2 {
            let finite = (0..self.vertices.len())
                .find(|&v| !self.vertices[v].infinite)
                .expect("an infinite edge has a finite end");
            keep.push(finite);
            keep.sort_unstable();
        }
        let kept: BTreeSet<usize> = keep.iter().copied().collect();
        let mut used = vec![false; self.edges.len()];
        let mut edges = Vec::new();
        for &start in &keep {
            for &(e0, _) in &self.incidence[start] {
                if used[e0] {
                    continue;
                }
                used[e0] = true;
                let mut chain = vec![e0];
                let mut len = self.edges[e0].len.clone();
                let mut prev_edge = e0;
                let mut at = self.other_end(e0, start);
                while !kept.contains(&at) {
                    let &(next, _) = self.incidence[at]
                        .iter()
                        .find(|(e, _)| *e != prev_edge)
                        .expect("valence-2 vertex has a second edge");
                    used[next] = true;
                    chain.push(next);
                    len = match (len, &self.edges[next].len) {
                        (Length::Finite(a), Length::Finite(b)) => Length::Finite(a + b),
                        _ => Length::Infinite,
                    };
                    prev_edge = next;
                    at = self.other_end(next, at);
                }
                edges.push(ModelEdge { u: start, v: at, len, chain });
            }
        }
        CanonicalModel { vertices: keep, edges }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn fin(n: i64) -> Length {
        Length::Finite(qi(n))
    }

    pub(crate) fn segment(len: i64) -> MetricGraph {
        MetricGraph::from_ids(&[(0, false), (1, false)], &[(0, 1, fin(len))]).unwrap()
    }

    fn theta() -> MetricGraph {
        MetricGraph::from_ids(&[(0, false), (1, false)], &[(0, 1, fin(1)), (0, 1, fin(2)), (0, 1, fin(3))]).unwrap()
    }

    fn circle() -> MetricGraph {
        MetricGraph::from_ids(&[(0, false), (1, false)], &[(0, 1, fin(1)), (1, 0, fin(2))]).unwrap()
    }

    fn line() -> MetricGraph {
        MetricGraph::from_ids(
            &[(0, true), (1, false), (2, true)],
            &[(1, 0, Length::Infinite), (1, 2, Length::Infinite)],
        )
        .unwrap()
    }

    #[test]
    fn validation() {
        assert!(MetricGraph::from_ids(&[(0, false), (1, true)], &[(0, 1, fin(1))]).is_err());
        assert!(MetricGraph::from_ids(&[(0, false), (1, false)], &[(0, 0, fin(1))]).is_err());
        assert!(MetricGraph::from_ids(&[(0, false), (1, false)], &[(0, 1, Length::Infinite)]).is_err());
        assert!(MetricGraph::from_ids(&[(0, false), (1, false)], &[(0, 1, fin(0))]).is_err());
        // Infinite edges are reoriented towards infinity.
        let g = MetricGraph::from_ids(&[(0, true), (1, false)], &[(0, 1, Length::Infinite)]).unwrap();
        assert!(g.vertices()[g.edge(0).v].infinite);
    }

    #[test]
    fn distances() {
        let g = segment(3);
        let a = CurvePoint::at(0, qi(0));
        let b = CurvePoint::at(0, qi(3));
        assert_eq!(g.point_dist(&a, &b), fin(3));
        assert_eq!(g.point_dist(&a, &a), fin(0));
        let g = line();
        let far = CurvePoint::inf_end(0);
        assert_eq!(g.point_dist(&CurvePoint::at(1, qi(5)), &far), Length::Infinite);
        assert_eq!(g.point_dist(&far, &far), fin(0));
        assert_eq!(g.point_dist(&far, &CurvePoint::inf_end(1)), Length::Infinite);
        assert_eq!(g.point_dist(&CurvePoint::at(0, qi(2)), &CurvePoint::at(1, q(1, 2))), Length::Finite(q(5, 2)));
    }

    #[test]
    fn distances_around_a_cycle() {
        let g = circle();
        // Total length 3: points at offsets 1/2 of edge 0 and 1 of edge 1.
        let a = CurvePoint::at(0, q(1, 2));
        let b = CurvePoint::at(1, qi(1));
        // Edge 1 runs from vertex 1 to vertex 0: b is 1 from vertex 1.
        assert_eq!(g.point_dist(&a, &b), Length::Finite(q(3, 2)));
        let c = CurvePoint::at(1, q(3, 2));
        assert_eq!(g.point_dist(&a, &c), Length::Finite(qi(1)));
    }

    #[test]
    fn vertex_points_are_canonical() {
        let g = theta();
        let a = CurvePoint::at(1, qi(2));
        let b = CurvePoint::at(2, qi(3));
        assert!(g.same_point(&a, &b));
        assert_eq!(g.normalize(&a), CurvePoint::at(0, qi(1)));
    }

    #[test]
    fn valences() {
        let g = theta();
        assert_eq!(g.valence(&CurvePoint::at(1, qi(1))), 2);
        assert_eq!(g.valence(&CurvePoint::at(1, qi(0))), 3);
        assert_eq!(line().valence(&CurvePoint::inf_end(0)), 1);
        assert_eq!(segment(2).valence(&CurvePoint::at(0, qi(0))), 1);
    }

    #[test]
    fn canonical_models() {
        let m = theta().canonical_model();
        assert_eq!(m.vertices, vec![0, 1]);
        assert_eq!(m.edges.len(), 3);

        let m = circle().canonical_model();
        assert_eq!(m.vertices, vec![0]);
        assert_eq!(m.edges, vec![ModelEdge { u: 0, v: 0, len: fin(3), chain: vec![0, 1] }]);

        let m = line().canonical_model();
        assert_eq!(m.vertices, vec![0, 1, 2]);
        assert_eq!(m.edges.len(), 2);

        // A path with a valence-2 middle vertex smooths to one edge.
        let g =
            MetricGraph::from_ids(&[(0, false), (1, false), (2, false)], &[(0, 1, fin(1)), (1, 2, fin(2))]).unwrap();
        let m = g.canonical_model();
        assert_eq!(m.vertices, vec![0, 2]);
        assert_eq!(m.edges, vec![ModelEdge { u: 0, v: 2, len: fin(3), chain: vec![0, 1] }]);
    }
}
