//! JSON and CSV exchange formats. Every rational is written as a `"p/q"`
//! string (or `"p"` for integers).

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::congruence::CongruencePresentation;
use crate::curve::{CurvePoint, Divisor, Edge, Length, MetricGraph, PLFunction, Piece, Pos, Subgraph};
use crate::embed::{EmbeddingReport, GeneratorTuple, ImagePiece, Injectivity};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::poly::TropPoly;
use crate::ratfn::RatFn;
use crate::scalar::{fmt_rational, parse_rational, Rational};
use crate::variety::PolyComplex;

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

fn from_value<T: for<'de> Deserialize<'de>>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Format(e.to_string()))
}

fn rats(v: &[Rational]) -> Vec<String> {
    v.iter().map(fmt_rational).collect()
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    n: usize,
    terms: Vec<TermJson>,
}

impl PolyJson {
    fn of(p: &TropPoly) -> Self {
        let terms = p.terms().iter().map(|(e, c)| TermJson { exp: e.clone(), coef: fmt_rational(c) }).collect();
        PolyJson { n: p.n_vars(), terms }
    }

    fn build(self) -> Result<TropPoly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in self.terms {
            if t.exp.len() != self.n {
                return Err(Error::DimensionMismatch { expected: self.n, got: t.exp.len() });
            }
            terms.push((t.exp, parse_rational(&t.coef)?));
        }
        Ok(TropPoly::from_terms(self.n, terms))
    }
}

pub fn poly_to_json(p: &TropPoly) -> Value {
    serde_json::to_value(PolyJson::of(p)).expect("serializable")
}

pub fn poly_from_json(text: &str) -> Result<TropPoly> {
    parse::<PolyJson>(text)?.build()
}

#[derive(Serialize, Deserialize)]
struct RatFnJson {
    num: PolyJson,
    den: PolyJson,
}

pub fn ratfn_to_json(f: &RatFn) -> Value {
    serde_json::to_value(RatFnJson { num: PolyJson::of(f.num()), den: PolyJson::of(f.den()) }).expect("serializable")
}

pub fn ratfn_from_json(text: &str) -> Result<RatFn> {
    let r: RatFnJson = parse(text)?;
    RatFn::new(r.num.build()?, r.den.build()?)
}

#[derive(Serialize, Deserialize)]
struct PairJson {
    lhs: String,
    rhs: String,
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    n: usize,
    gens: Vec<PairJson>,
}

pub fn presentation_from_json(text: &str) -> Result<CongruencePresentation> {
    let p: PresentationJson = parse(text)?;
    let gens = p
        .gens
        .iter()
        .map(|g| Ok((Expr::parse(&g.lhs, p.n)?.to_ratfn()?, Expr::parse(&g.rhs, p.n)?.to_ratfn()?)))
        .collect::<Result<Vec<_>>>()?;
    CongruencePresentation::new(p.n, gens)
}

pub fn presentation_to_json(e: &CongruencePresentation) -> Value {
    let gens = e.gens().iter().map(|(l, r)| PairJson { lhs: l.to_string(), rhs: r.to_string() }).collect();
    serde_json::to_value(PresentationJson { n: e.n_vars(), gens }).expect("serializable")
}

pub fn complex_to_json(c: &PolyComplex) -> Value {
    let cells: Vec<Value> = c
        .cells
        .iter()
        .map(|cell| {
            let rows = |fs: &[crate::linear::AffineForm]| fs.iter().map(|f| rats(&f.to_row())).collect::<Vec<_>>();
            json!({ "eq": rows(cell.eqs()), "ge": rows(cell.ges()) })
        })
        .collect();
    json!({ "n": c.n_vars, "cells": cells })
}

/// Points as CSV with a `x1,…,xn` header.
pub fn points_csv(n: usize, pts: &[Vec<Rational>]) -> String {
    let mut out = (1..=n).map(|i| format!("x{i}")).collect::<Vec<_>>().join(",");
    out.push('\n');
    for p in pts {
        out.push_str(&rats(p).join(","));
        out.push('\n');
    }
    out
}

fn len_str(l: &Length) -> String {
    match l {
        Length::Finite(r) => fmt_rational(r),
        Length::Infinite => "inf".into(),
    }
}

fn parse_len(s: &str) -> Result<Length> {
    if s.trim() == "inf" {
        Ok(Length::Infinite)
    } else {
        Ok(Length::Finite(parse_rational(s)?))
    }
}

fn parse_pos(s: &str) -> Result<Pos> {
    Ok(match parse_len(s)? {
        Length::Infinite => Pos::InfEnd,
        Length::Finite(r) => Pos::At(r),
    })
}

fn pos_str(p: &Pos) -> String {
    match p {
        Pos::At(t) => fmt_rational(t),
        Pos::InfEnd => "inf".into(),
    }
}

#[derive(Serialize, Deserialize)]
struct VertexJson {
    id: u64,
    infinite: bool,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    u: u64,
    v: u64,
    len: String,
}

#[derive(Serialize, Deserialize)]
struct CurveJson {
    vertices: Vec<VertexJson>,
    edges: Vec<EdgeJson>,
}

impl CurveJson {
    fn of(g: &MetricGraph) -> Self {
        let vs = g.vertices();
        CurveJson {
            vertices: vs.iter().map(|v| VertexJson { id: v.id, infinite: v.infinite }).collect(),
            edges: g
                .edges()
                .iter()
                .map(|e: &Edge| EdgeJson { u: vs[e.u].id, v: vs[e.v].id, len: len_str(&e.len) })
                .collect(),
        }
    }

    fn build(self) -> Result<MetricGraph> {
        let vertices: Vec<(u64, bool)> = self.vertices.iter().map(|v| (v.id, v.infinite)).collect();
        let edges = self.edges.iter().map(|e| Ok((e.u, e.v, parse_len(&e.len)?))).collect::<Result<Vec<_>>>()?;
        MetricGraph::from_ids(&vertices, &edges)
    }
}

pub fn curve_to_json(g: &MetricGraph) -> Value {
    serde_json::to_value(CurveJson::of(g)).expect("serializable")
}

pub fn curve_from_json(text: &str) -> Result<MetricGraph> {
    parse::<CurveJson>(text)?.build()
}

#[derive(Serialize, Deserialize)]
struct EdgeFnJson {
    breaks: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail: Option<i64>,
}

#[derive(Serialize, Deserialize)]
struct PLFunctionJson {
    #[serde(default)]
    bottom: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    edges: Vec<EdgeFnJson>,
}

impl PLFunctionJson {
    fn of(f: &PLFunction) -> Self {
        match f.edges() {
            None => PLFunctionJson { bottom: true, edges: Vec::new() },
            Some(es) => PLFunctionJson {
                bottom: false,
                edges: es
                    .iter()
                    .map(|e| EdgeFnJson {
                        breaks: e.breaks().iter().map(|(t, v)| (fmt_rational(t), fmt_rational(v))).collect(),
                        tail: e.tail(),
                    })
                    .collect(),
            },
        }
    }

    fn build(self, g: &MetricGraph) -> Result<PLFunction> {
        if self.bottom {
            return Ok(PLFunction::Bottom);
        }
        let edges = self
            .edges
            .into_iter()
            .map(|e| {
                let breaks = e
                    .breaks
                    .iter()
                    .map(|(t, v)| Ok((parse_rational(t)?, parse_rational(v)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok((breaks, e.tail))
            })
            .collect::<Result<Vec<_>>>()?;
        PLFunction::from_raw_edges(g, edges)
    }
}

/// `{"bottom": true}` or `{"edges": [{"breaks": [["t", "v"], …], "tail": s}]}`.
pub fn plfn_to_json(f: &PLFunction) -> Value {
    serde_json::to_value(PLFunctionJson::of(f)).expect("serializable")
}

pub fn plfn_from_json(g: &MetricGraph, text: &str) -> Result<PLFunction> {
    parse::<PLFunctionJson>(text)?.build(g)
}

/// A point as `{"edge": e, "at": "p/q" | "inf"}`.
pub fn point_to_json(p: &CurvePoint) -> Value {
    json!({ "edge": p.edge, "at": pos_str(&p.pos) })
}

/// Parses `e<k>@<offset>` or `e<k>@inf`.
pub fn parse_point(s: &str) -> Result<CurvePoint> {
    let bad = || Error::Format(format!("expected a point like e0@1/2, got {s:?}"));
    let (e, at) = s.trim().split_once('@').ok_or_else(bad)?;
    let edge = e.strip_prefix('e').and_then(|k| k.parse().ok()).ok_or_else(bad)?;
    Ok(CurvePoint { edge, pos: parse_pos(at)? })
}

pub fn point_str(p: &CurvePoint) -> String {
    format!("e{}@{}", p.edge, pos_str(&p.pos))
}

#[derive(Serialize, Deserialize)]
struct PieceJson {
    edge: usize,
    from: String,
    to: String,
}

#[derive(Serialize, Deserialize)]
struct SubgraphJson {
    pieces: Vec<PieceJson>,
}

/// `{"pieces": [{"edge": e, "from": "a", "to": "b" | "inf"}]}`.
pub fn subgraph_from_json(g: &MetricGraph, text: &str) -> Result<Subgraph> {
    let s: SubgraphJson = parse(text)?;
    let pieces = s
        .pieces
        .iter()
        .map(|p| Ok(Piece { edge: p.edge, from: parse_rational(&p.from)?, to: parse_pos(&p.to)? }))
        .collect::<Result<Vec<_>>>()?;
    Subgraph::new(g, pieces)
}

pub fn subgraph_to_json(s: &Subgraph) -> Value {
    let pieces: Vec<PieceJson> = s
        .pieces()
        .iter()
        .map(|p| PieceJson { edge: p.edge, from: fmt_rational(&p.from), to: pos_str(&p.to) })
        .collect();
    serde_json::to_value(SubgraphJson { pieces }).expect("serializable")
}

pub fn divisor_to_json(d: &Divisor) -> Value {
    let orders: Vec<Value> = d.orders().iter().map(|(p, k)| json!({ "point": point_to_json(p), "order": k })).collect();
    json!({ "degree": d.degree(), "orders": orders })
}

#[derive(Deserialize)]
struct GeneratorsJson {
    curve: CurveJson,
    fns: Vec<Value>,
}

/// `{"curve": <curve>, "fns": [<function>, …]}`.
pub fn generators_from_json(text: &str) -> Result<GeneratorTuple> {
    let g: GeneratorsJson = parse(text)?;
    let curve = g.curve.build()?;
    let fns = g.fns.into_iter().map(|v| from_value::<PLFunctionJson>(v)?.build(&curve)).collect::<Result<Vec<_>>>()?;
    GeneratorTuple::new(curve, fns)
}

pub fn generators_to_json(g: &GeneratorTuple) -> Value {
    let fns: Vec<Value> = g.fns().iter().map(plfn_to_json).collect();
    json!({ "curve": curve_to_json(g.curve()), "fns": fns })
}

pub fn image_piece_to_json(p: &ImagePiece) -> Value {
    match p {
        ImagePiece::Point(a) => json!({ "kind": "point", "start": rats(a) }),
        ImagePiece::Segment(a, b) => json!({ "kind": "segment", "start": rats(a), "end": rats(b) }),
        ImagePiece::Ray(a, d) => json!({ "kind": "ray", "start": rats(a), "direction": d }),
    }
}

pub fn embedding_report_to_json(r: &EmbeddingReport) -> Value {
    let segments: Vec<Value> = r
        .segments
        .iter()
        .map(|s| {
            json!({
                "edge": s.edge,
                "from": fmt_rational(&s.from),
                "to": pos_str(&s.to),
                "slopes": s.slopes,
                "gcd": s.gcd,
                "ok": s.is_unimodular(),
            })
        })
        .collect();
    let injective = match &r.injective {
        Injectivity::Injective => json!(true),
        Injectivity::Witness(x, y) => json!({ "witness": [point_to_json(x), point_to_json(y)] }),
    };
    json!({
        "segments": segments,
        "isometry_ok": r.isometry_ok,
        "injective": injective,
        "image": r.image.iter().map(image_piece_to_json).collect::<Vec<_>>(),
    })
}

/// One row per image piece: `kind,start…,end_or_direction…`.
pub fn image_csv(n: usize, image: &[ImagePiece]) -> String {
    let mut head = vec!["kind".to_string()];
    head.extend((1..=n).map(|i| format!("a{i}")));
    head.extend((1..=n).map(|i| format!("b{i}")));
    let mut out = head.join(",");
    out.push('\n');
    for p in image {
        let (kind, a, b): (&str, Vec<String>, Vec<String>) = match p {
            ImagePiece::Point(a) => ("point", rats(a), rats(a)),
            ImagePiece::Segment(a, b) => ("segment", rats(a), rats(b)),
            ImagePiece::Ray(a, d) => ("ray", rats(a), d.iter().map(i64::to_string).collect()),
        };
        out.push_str(&format!("{kind},{},{}\n", a.join(","), b.join(",")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::line_example;
    use crate::random;
    use crate::scalar::q;

    #[test]
    fn poly_round_trip() {
        let p = TropPoly::from_terms(2, [(vec![2, 1], q(-3, 2)), (vec![0, 0], q(0, 1))]);
        let text = poly_to_json(&p).to_string();
        assert_eq!(text, r#"{"n":2,"terms":[{"coef":"0","exp":[0,0]},{"coef":"-3/2","exp":[2,1]}]}"#);
        assert_eq!(poly_from_json(&text).unwrap(), p);
        assert!(poly_from_json(r#"{"n":2,"terms":[{"exp":[1],"coef":"1"}]}"#).is_err());
        assert!(poly_from_json(r#"{"n":1,"terms":[{"exp":[1],"coef":"1/0"}]}"#).is_err());
    }

    #[test]
    fn ratfn_and_presentation_round_trip() {
        let mut r = random::rng(1);
        let f = random::ratfn(&mut r, 2);
        assert_eq!(ratfn_from_json(&ratfn_to_json(&f).to_string()).unwrap(), f);
        let e = presentation_from_json(r#"{"n":2,"gens":[{"lhs":"max(x1, x2)","rhs":"x2"}]}"#).unwrap();
        assert_eq!(e.gens().len(), 1);
        let again = presentation_from_json(&presentation_to_json(&e).to_string()).unwrap();
        assert!(again.gens()[0].0.is_equal(&e.gens()[0].0));
        assert!(again.gens()[0].1.is_equal(&e.gens()[0].1));
    }

    #[test]
    fn curve_function_round_trip() {
        let mut r = random::rng(2);
        for _ in 0..20 {
            let g = random::curve(&mut r, 6, true);
            let g2 = curve_from_json(&curve_to_json(&g).to_string()).unwrap();
            assert_eq!(g, g2);
            let f = random::plfn(&mut r, &g);
            assert_eq!(plfn_from_json(&g, &plfn_to_json(&f).to_string()).unwrap(), f);
            let s = random::subgraph(&mut r, &g);
            assert_eq!(subgraph_from_json(&g, &subgraph_to_json(&s).to_string()).unwrap(), s);
        }
        let g = curve_from_json(
            r#"{"vertices":[{"id":0,"infinite":false},{"id":1,"infinite":false}],"edges":[{"u":0,"v":1,"len":"3"}]}"#,
        )
        .unwrap();
        assert_eq!(plfn_from_json(&g, r#"{"bottom":true}"#).unwrap(), PLFunction::Bottom);
        assert!(curve_from_json(r#"{"vertices":[],"edges":[]}"#).is_err());
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("e2@1/2").unwrap(), CurvePoint::at(2, q(1, 2)));
        assert_eq!(parse_point("e0@inf").unwrap(), CurvePoint::inf_end(0));
        assert!(parse_point("2@1").is_err());
        assert_eq!(point_str(&CurvePoint::at(1, q(3, 1))), "e1@3");
    }

    #[test]
    fn generators_and_report() {
        let g = line_example();
        let g2 = generators_from_json(&generators_to_json(&g).to_string()).unwrap();
        assert_eq!(g, g2);
        let report = crate::embed::embedding_report(&g);
        let v = embedding_report_to_json(&report);
        assert_eq!(v["isometry_ok"], json!(true));
        assert_eq!(v["injective"], json!(true));
        let csv = image_csv(2, &report.image);
        assert_eq!(csv, "kind,a1,a2,b1,b2\nray,0,0,0,-1\nsegment,0,0,1,0\nray,1,0,0,-1\n");
    }

    #[test]
    fn csv_points() {
        let pts = vec![vec![q(1, 2), q(-1, 1)]];
        assert_eq!(points_csv(2, &pts), "x1,x2\n1/2,-1\n");
    }
}
