//! `tropica`: command-line access to tropical rational functions,
//! congruence varieties, tropical curves and the embedding checks.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use tropica_core::congruence::{detect_bottom_pair, detect_scaling_pair, CongruencePresentation};
use tropica_core::curve::{chip_fire, divisor, pl_add, pl_max, Length, MetricGraph, PLFunction};
use tropica_core::embed::{check_injectivity, check_local_isometry, embedding_report, pullback, Injectivity};
use tropica_core::io;
use tropica_core::scalar::{parse_rational, Rational};
use tropica_core::variety::{sample, variety_cells, GridBox};
use tropica_core::verify;
use tropica_core::{EqualityVerdict, Expr, RatFn};

#[derive(Parser)]
#[command(name = "tropica", version, about = "Exact tropical algebra and tropical curve tools")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Number of variables x1..xn in expressions.
    #[arg(short = 'n', long = "vars", global = true, default_value_t = 1)]
    n: usize,
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Sampling box, one lo:hi range per coordinate or a single range for all.
    #[arg(long = "box", global = true, allow_hyphen_values = true, default_value = "-10:10")]
    bbox: String,
    /// Grid step for sampling.
    #[arg(long, global = true, default_value = "1")]
    step: String,
}

#[derive(Subcommand)]
enum Command {
    /// Polynomial operations.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Decide functional equality of two expressions.
    Eq {
        #[arg(allow_hyphen_values = true)]
        lhs: String,
        #[arg(allow_hyphen_values = true)]
        rhs: String,
    },
    /// Evaluate an expression at a point given as comma-separated rationals.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
    /// Congruence varieties of a presentation file.
    #[command(subcommand)]
    Variety(VarietyCmd),
    /// Tropical curves and their rational functions.
    #[command(subcommand)]
    Curve(CurveCmd),
    /// The map defined by generator functions on a curve.
    #[command(subcommand)]
    Embed(EmbedCmd),
    /// Pull back F along coordinates over m variables; F has one variable per coordinate.
    Pullback {
        /// Number of variables of the coordinates.
        #[arg(short = 'm', long = "from-vars", default_value_t = 1)]
        m: usize,
        /// Function in x1..xk, where k is the number of coordinates.
        #[arg(allow_hyphen_values = true)]
        f: String,
        /// Coordinate functions in x1..xm.
        #[arg(required = true, allow_hyphen_values = true)]
        coords: Vec<String>,
    },
    /// Run every acceptance check.
    VerifyPaper {
        /// Run a single check by number.
        #[arg(long)]
        only: Option<u8>,
    },
}

#[derive(Subcommand)]
enum PolyCmd {
    /// Print the canonical form of a polynomial expression.
    Canon {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
}

#[derive(Subcommand)]
enum VarietyCmd {
    /// Grid points of the variety inside --box with spacing --step.
    Sample { gens: PathBuf },
    /// Closed polyhedral cells covering the variety (n <= 3).
    Cells { gens: PathBuf },
    /// Decide whether the variety is empty.
    Empty { gens: PathBuf },
}

#[derive(Subcommand)]
enum CurveCmd {
    /// Evaluate a function at points written e<edge>@<offset> or e<edge>@inf.
    Eval {
        curve: PathBuf,
        function: PathBuf,
        #[arg(required = true)]
        points: Vec<String>,
    },
    /// Pointwise maximum of two functions.
    Max { curve: PathBuf, f: PathBuf, g: PathBuf },
    /// Pointwise sum of two functions.
    Add { curve: PathBuf, f: PathBuf, g: PathBuf },
    /// The chip firing move -min(dist(S, x), l); l is a rational or "inf".
    Chipfire { curve: PathBuf, subgraph: PathBuf, l: String },
    /// Zeros and poles of a function.
    Divisor { curve: PathBuf, function: PathBuf },
    /// Vertices and edges of the canonical model.
    CanonicalModel { curve: PathBuf },
}

#[derive(Subcommand)]
enum EmbedCmd {
    /// Slopes, lattice-length check, injectivity and image.
    Report { gens: PathBuf },
    /// Image pieces as CSV (or JSON with --json).
    Image { gens: PathBuf },
    /// Exit 0 iff the map is an injective local isometry.
    Check { gens: PathBuf },
}

/// Successful run: text to print and whether the checked property held.
struct Outcome {
    out: String,
    ok: bool,
}

impl Outcome {
    fn ok(out: String) -> Self {
        Outcome { out, ok: true }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn in_file<T>(path: &Path, r: tropica_core::Result<T>) -> Result<T> {
    r.with_context(|| format!("in {}", path.display()))
}

fn parse_expr(text: &str, n: usize) -> Result<RatFn> {
    let e = Expr::parse(text, n).with_context(|| format!("in expression {text:?}"))?;
    Ok(e.to_ratfn()?)
}

fn parse_point(text: &str, n: usize) -> Result<Vec<Rational>> {
    let x = text
        .split(',')
        .map(parse_rational)
        .collect::<tropica_core::Result<Vec<_>>>()
        .with_context(|| format!("in point {text:?}"))?;
    if x.len() != n {
        bail!("point {text:?} has {} coordinates, expected {n}", x.len());
    }
    Ok(x)
}

fn parse_box(text: &str, n: usize) -> Result<GridBox> {
    let ranges = text
        .split(',')
        .map(|r| {
            let (lo, hi) = r.split_once(':').with_context(|| format!("range {r:?} is not lo:hi"))?;
            Ok((parse_rational(lo)?, parse_rational(hi)?))
        })
        .collect::<Result<Vec<_>>>()
        .with_context(|| format!("in --box {text:?}"))?;
    match ranges.len() {
        1 => Ok(GridBox::cube(n, ranges[0].0.clone(), ranges[0].1.clone())),
        k if k == n => Ok(GridBox { ranges }),
        k => bail!("--box has {k} ranges for {n} variables"),
    }
}

fn presentation(path: &Path) -> Result<CongruencePresentation> {
    in_file(path, io::presentation_from_json(&read(path)?))
}

fn curve(path: &Path) -> Result<MetricGraph> {
    in_file(path, io::curve_from_json(&read(path)?))
}

fn function(g: &MetricGraph, path: &Path) -> Result<PLFunction> {
    in_file(path, io::plfn_from_json(g, &read(path)?))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn show_point(x: &[Rational]) -> String {
    x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn run(cli: Cli) -> Result<Outcome> {
    let g = &cli.global;
    match cli.command {
        Command::Poly(PolyCmd::Canon { expr }) => {
            let e = Expr::parse(&expr, g.n).with_context(|| format!("in expression {expr:?}"))?;
            let p = e.to_poly()?.canonicalize();
            Ok(Outcome::ok(if g.json { pretty(&io::poly_to_json(&p)) } else { p.to_string() }))
        }
        Command::Eq { lhs, rhs } => {
            let (a, b) = (parse_expr(&lhs, g.n)?, parse_expr(&rhs, g.n)?);
            match a.equal(&b) {
                EqualityVerdict::Equal => {
                    Ok(Outcome::ok(if g.json { json!({"verdict": "Equal"}).to_string() } else { "Equal".into() }))
                }
                EqualityVerdict::Witness(x) => {
                    let (va, vb) = (a.eval(&x), b.eval(&x));
                    let out = if g.json {
                        let pt: Vec<String> = x.iter().map(|v| v.to_string()).collect();
                        json!({"verdict": "Witness", "point": pt, "lhs": va.to_string(), "rhs": vb.to_string()})
                            .to_string()
                    } else {
                        format!("Witness x = ({}): lhs = {va}, rhs = {vb}", show_point(&x))
                    };
                    Ok(Outcome { out, ok: false })
                }
            }
        }
        Command::Eval { expr, point } => {
            let e = Expr::parse(&expr, g.n).with_context(|| format!("in expression {expr:?}"))?;
            let v = e.eval(&parse_point(&point, g.n)?)?;
            Ok(Outcome::ok(if g.json { json!({"value": v.to_string()}).to_string() } else { v.to_string() }))
        }
        Command::Variety(cmd) => variety(g, cmd),
        Command::Curve(cmd) => curve_cmd(g, cmd),
        Command::Embed(cmd) => embed(g, cmd),
        Command::Pullback { m, f, coords } => {
            let coords = coords.iter().map(|c| parse_expr(c, m)).collect::<Result<Vec<_>>>()?;
            let f = parse_expr(&f, coords.len())?;
            let p = pullback(&coords, &f)?;
            Ok(Outcome::ok(if g.json { pretty(&io::ratfn_to_json(&p)) } else { p.to_string() }))
        }
        Command::VerifyPaper { only } => {
            let outcomes = match only {
                Some(id) if (1..=12).contains(&id) => vec![verify::run(id, g.seed)],
                Some(id) => bail!("no check {id}; checks are numbered 1 to 12"),
                None => verify::run_all(g.seed),
            };
            let ok = outcomes.iter().all(|o| o.passed);
            let out = if g.json {
                let items: Vec<Value> = outcomes
                    .iter()
                    .map(|o| json!({"id": o.id, "name": o.name, "passed": o.passed, "detail": o.detail}))
                    .collect();
                pretty(&json!({"seed": g.seed, "passed": ok, "checks": items}))
            } else {
                let mut lines: Vec<String> = outcomes
                    .iter()
                    .map(|o| {
                        format!("[{}] {:>2} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.id, o.name, o.detail)
                    })
                    .collect();
                if let Some(first) = outcomes.iter().find(|o| !o.passed) {
                    lines.push(format!("first failure: {} {}", first.id, first.name));
                }
                lines.join("\n")
            };
            Ok(Outcome { out, ok })
        }
    }
}

fn variety(g: &Global, cmd: VarietyCmd) -> Result<Outcome> {
    match cmd {
        VarietyCmd::Sample { gens } => {
            let e = presentation(&gens)?;
            let bx = parse_box(&g.bbox, e.n_vars())?;
            let step = parse_rational(&g.step).context("in --step")?;
            let pts = sample(&e, &bx, &step)?;
            Ok(Outcome::ok(if g.json {
                let rows: Vec<Vec<String>> = pts.iter().map(|p| p.iter().map(|v| v.to_string()).collect()).collect();
                pretty(&json!({"n": e.n_vars(), "count": pts.len(), "points": rows}))
            } else {
                io::points_csv(e.n_vars(), &pts).trim_end().to_string()
            }))
        }
        VarietyCmd::Cells { gens } => {
            let c = variety_cells(&presentation(&gens)?)?;
            Ok(Outcome::ok(pretty(&io::complex_to_json(&c))))
        }
        VarietyCmd::Empty { gens } => {
            let e = presentation(&gens)?;
            let scaling = detect_scaling_pair(&e);
            let bottom = detect_bottom_pair(&e);
            let empty = variety_cells(&e)?.is_empty();
            let reason = match (&scaling, bottom) {
                (Some((i, t)), _) => format!("generator {} is (f, f + {t})", i + 1),
                (None, Some(i)) => format!("generator {} has exactly one -inf side", i + 1),
                _ if empty => "no cell is feasible".to_string(),
                _ => String::new(),
            };
            Ok(Outcome::ok(if g.json {
                json!({"empty": empty, "reason": reason}).to_string()
            } else if empty {
                format!("empty: {reason}")
            } else {
                "nonempty".into()
            }))
        }
    }
}

fn curve_cmd(g: &Global, cmd: CurveCmd) -> Result<Outcome> {
    let fn_out = |f: &PLFunction| Outcome::ok(pretty(&io::plfn_to_json(f)));
    match cmd {
        CurveCmd::Eval { curve: c, function: f, points } => {
            let gr = curve(&c)?;
            let f = function(&gr, &f)?;
            let mut rows = Vec::new();
            for p in &points {
                let x = io::parse_point(p)?;
                gr.check_point(&x).with_context(|| format!("point {p}"))?;
                rows.push((io::point_str(&x), f.eval(&x).to_string()));
            }
            Ok(Outcome::ok(if g.json {
                let v: Vec<Value> = rows.iter().map(|(p, v)| json!({"point": p, "value": v})).collect();
                pretty(&Value::Array(v))
            } else {
                rows.iter().map(|(p, v)| format!("{p} {v}")).collect::<Vec<_>>().join("\n")
            }))
        }
        CurveCmd::Max { curve: c, f, g: h } => {
            let gr = curve(&c)?;
            Ok(fn_out(&pl_max(&function(&gr, &f)?, &function(&gr, &h)?)))
        }
        CurveCmd::Add { curve: c, f, g: h } => {
            let gr = curve(&c)?;
            Ok(fn_out(&pl_add(&function(&gr, &f)?, &function(&gr, &h)?)))
        }
        CurveCmd::Chipfire { curve: c, subgraph, l } => {
            let gr = curve(&c)?;
            let s = in_file(&subgraph, io::subgraph_from_json(&gr, &read(&subgraph)?))?;
            let l = if l.trim() == "inf" { Length::Infinite } else { Length::Finite(parse_rational(&l)?) };
            Ok(fn_out(&chip_fire(&gr, &s, &l)?))
        }
        CurveCmd::Divisor { curve: c, function: f } => {
            let gr = curve(&c)?;
            let d = divisor(&gr, &function(&gr, &f)?)?;
            Ok(Outcome::ok(if g.json {
                pretty(&io::divisor_to_json(&d))
            } else {
                let mut lines: Vec<String> =
                    d.orders().iter().map(|(p, k)| format!("{} {k}", io::point_str(p))).collect();
                lines.push(format!("degree {}", d.degree()));
                lines.join("\n")
            }))
        }
        CurveCmd::CanonicalModel { curve: c } => {
            let gr = curve(&c)?;
            let m = gr.canonical_model();
            let id = |v: usize| gr.vertices()[v].id;
            let edges: Vec<Value> = m
                .edges
                .iter()
                .map(|e| {
                    let len = match &e.len {
                        Length::Finite(l) => l.to_string(),
                        Length::Infinite => "inf".into(),
                    };
                    json!({"u": id(e.u), "v": id(e.v), "len": len, "chain": e.chain})
                })
                .collect();
            let vertices: Vec<u64> = m.vertices.iter().map(|&v| id(v)).collect();
            Ok(Outcome::ok(pretty(&json!({"vertices": vertices, "edges": edges}))))
        }
    }
}

fn embed(g: &Global, cmd: EmbedCmd) -> Result<Outcome> {
    let load = |p: &Path| -> Result<_> { in_file(p, io::generators_from_json(&read(p)?)) };
    match cmd {
        EmbedCmd::Report { gens } => {
            let r = embedding_report(&load(&gens)?);
            Ok(Outcome::ok(pretty(&io::embedding_report_to_json(&r))))
        }
        EmbedCmd::Image { gens } => {
            let t = load(&gens)?;
            let r = embedding_report(&t);
            Ok(Outcome::ok(if g.json {
                pretty(&Value::Array(r.image.iter().map(io::image_piece_to_json).collect()))
            } else {
                io::image_csv(t.n(), &r.image).trim_end().to_string()
            }))
        }
        EmbedCmd::Check { gens } => {
            let t = load(&gens)?;
            let (_, isometry) = check_local_isometry(&t);
            let inj = check_injectivity(&t);
            let ok = isometry && inj.is_injective();
            let inj_text = match &inj {
                Injectivity::Injective => "injective".to_string(),
                Injectivity::Witness(x, y) => format!("not injective: {} and {}", io::point_str(x), io::point_str(y)),
            };
            Ok(Outcome {
                out: if g.json {
                    json!({"isometry_ok": isometry, "injective": inj.is_injective(), "ok": ok}).to_string()
                } else {
                    format!("isometry {}; {inj_text}", if isometry { "ok" } else { "fails" })
                },
                ok,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(o) => {
            // A closed pipe downstream is not an error for a filter-style tool.
            let _ = writeln!(std::io::stdout(), "{}", o.out);
            if o.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
