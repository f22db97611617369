//! Congruence varieties `V(E) ⊂ R^n`, evaluated over `Q^n`.
//!
//! For `n <= 3` the variety is enumerated exactly as a cover by closed
//! polyhedral cells. For a pair `(f, g)` the locus `f = g` equals the locus
//! `F = G` of the cross products `F = f_num ⊙ g_den`, `G = g_num ⊙ f_den`,
//! which is the union over term pairs `(i, j)` of the cells where `F_i`
//! attains `F`, `G_j` attains `G`, and `F_i = G_j`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::congruence::CongruencePresentation;
use crate::error::{Error, Result};
use crate::linear::{feasible_point, AffineForm, Constraint, Relation};
use crate::poly::TropPoly;
use crate::ratfn::RatFn;
use crate::scalar::Rational;

pub const MAX_CELL_DIM: usize = 3;
pub const MAX_GRID_POINTS: u128 = 10_000_000;

/// A closed polyhedron `{ x : eq(x) = 0, ge(x) >= 0 }`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HCell {
    n_vars: usize,
    eqs: Vec<AffineForm>,
    ges: Vec<AffineForm>,
}

impl HCell {
    pub fn whole_space(n_vars: usize) -> Self {
        HCell { n_vars, eqs: Vec::new(), ges: Vec::new() }
    }

    pub fn new(n_vars: usize, eqs: Vec<AffineForm>, ges: Vec<AffineForm>) -> Self {
        assert!(eqs.iter().chain(&ges).all(|f| f.dim() == n_vars));
        HCell { n_vars, eqs, ges }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn eqs(&self) -> &[AffineForm] {
        &self.eqs
    }

    pub fn ges(&self) -> &[AffineForm] {
        &self.ges
    }

    pub fn constraints(&self) -> Vec<Constraint> {
        self.eqs.iter().cloned().map(Constraint::eq).chain(self.ges.iter().cloned().map(Constraint::ge)).collect()
    }

    /// True when no relation is strict, i.e. the cell is a closed set.
    pub fn is_closed(&self) -> bool {
        self.constraints().iter().all(|c| c.rel != Relation::Gt)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.eqs.iter().all(|f| f.eval(x).is_zero()) && self.ges.iter().all(|f| f.eval(x) >= Rational::zero())
    }

    pub fn feasible_point(&self) -> Option<Vec<Rational>> {
        feasible_point(self.n_vars, &self.constraints())
    }

    pub fn intersect(&self, other: &HCell) -> HCell {
        let mut out = self.clone();
        out.eqs.extend(other.eqs.iter().cloned());
        out.ges.extend(other.ges.iter().cloned());
        out
    }
}

/// A finite cover of a locus by nonempty closed cells; cells may overlap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyComplex {
    pub n_vars: usize,
    pub cells: Vec<HCell>,
}

impl PolyComplex {
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.cells.iter().any(|c| c.contains(x))
    }
}

/// `x ∈ V(E)`: every generator pair agrees exactly at `x`.
pub fn member(e: &CongruencePresentation, x: &[Rational]) -> bool {
    assert_eq!(x.len(), e.n_vars(), "point dimension");
    e.gens().iter().all(|(f, g)| f.eval(x) == g.eval(x))
}

/// Axis-aligned box with one rational range per coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridBox {
    pub ranges: Vec<(Rational, Rational)>,
}

impl GridBox {
    pub fn cube(n: usize, lo: Rational, hi: Rational) -> Self {
        GridBox { ranges: vec![(lo, hi); n] }
    }

    /// All grid points `lo + k·step` inside the box, in lexicographic order.
    pub fn points(&self, step: &Rational) -> Result<Vec<Vec<Rational>>> {
        if *step <= Rational::zero() {
            return Err(Error::InvalidBox("step must be positive".into()));
        }
        let mut counts = Vec::with_capacity(self.ranges.len());
        let mut total: u128 = 1;
        for (lo, hi) in &self.ranges {
            if hi < lo {
                return Err(Error::InvalidBox(format!("empty range {lo}:{hi}")));
            }
            let k = (hi - lo) / step;
            if !k.denom().is_one() {
                return Err(Error::InvalidBox(format!("step {step} does not divide {lo}:{hi}")));
            }
            let k = k.to_integer().to_u128().unwrap_or(u128::MAX).saturating_add(1);
            total = total.saturating_mul(k);
            counts.push(k as usize);
        }
        if total > MAX_GRID_POINTS {
            return Err(Error::BoxTooLarge(total));
        }
        let mut out = Vec::with_capacity(total as usize);
        let mut idx = vec![0usize; counts.len()];
        loop {
            out.push(
                idx.iter()
                    .zip(&self.ranges)
                    .map(|(&i, (lo, _))| lo + step * Rational::from_integer(BigInt::from(i)))
                    .collect(),
            );
            let mut d = counts.len();
            loop {
                if d == 0 {
                    return Ok(out);
                }
                d -= 1;
                idx[d] += 1;
                if idx[d] < counts[d] {
                    break;
                }
                idx[d] = 0;
            }
        }
    }
}

/// Grid points of the box lying in `V(E)`.
pub fn sample(e: &CongruencePresentation, bx: &GridBox, step: &Rational) -> Result<Vec<Vec<Rational>>> {
    if bx.ranges.len() != e.n_vars() {
        return Err(Error::DimensionMismatch { expected: e.n_vars(), got: bx.ranges.len() });
    }
    Ok(bx.points(step)?.into_iter().filter(|x| member(e, x)).collect())
}

fn term_forms(p: &TropPoly) -> Vec<AffineForm> {
    p.terms()
        .iter()
        .map(|(e, c)| AffineForm::new(c.clone(), e.iter().map(|&k| Rational::from_integer(k.into())).collect()))
        .collect()
}

/// Closed cells covering `{ x : f(x) = g(x) }`.
pub fn pair_locus_cells(f: &RatFn, g: &RatFn) -> Result<PolyComplex> {
    let n = f.n_vars();
    if n > MAX_CELL_DIM {
        return Err(Error::DimensionTooLarge(n));
    }
    let big_f = f.num().mul(g.den());
    let big_g = g.num().mul(f.den());
    let mut cells = Vec::new();
    match (big_f.is_bottom(), big_g.is_bottom()) {
        (true, true) => cells.push(HCell::whole_space(n)),
        (true, false) | (false, true) => {}
        (false, false) => {
            let fs = term_forms(&big_f);
            let gs = term_forms(&big_g);
            for (i, fi) in fs.iter().enumerate() {
                for (j, gj) in gs.iter().enumerate() {
                    let mut ges = Vec::new();
                    ges.extend(fs.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, fk)| fi.sub(fk)));
                    ges.extend(gs.iter().enumerate().filter(|(l, _)| *l != j).map(|(_, gl)| gj.sub(gl)));
                    let cell = HCell::new(n, vec![fi.sub(gj)], ges);
                    if cell.feasible_point().is_some() {
                        cells.push(cell);
                    }
                }
            }
        }
    }
    Ok(PolyComplex { n_vars: n, cells })
}

/// Closed cells covering `V(E)`, intersecting the per-generator covers.
pub fn variety_cells(e: &CongruencePresentation) -> Result<PolyComplex> {
    let n = e.n_vars();
    if n > MAX_CELL_DIM {
        return Err(Error::DimensionTooLarge(n));
    }
    let mut cells = vec![HCell::whole_space(n)];
    for (f, g) in e.gens() {
        let local = pair_locus_cells(f, g)?;
        let mut next: Vec<HCell> = Vec::new();
        for a in &cells {
            for b in &local.cells {
                let c = a.intersect(b);
                if !next.contains(&c) && c.feasible_point().is_some() {
                    next.push(c);
                }
            }
        }
        cells = next;
        if cells.is_empty() {
            break;
        }
    }
    Ok(PolyComplex { n_vars: n, cells })
}

pub fn is_empty(e: &CongruencePresentation) -> Result<bool> {
    Ok(variety_cells(e)?.is_empty())
}

/// Sampled necessary condition for `(f, g) ∈ E(V)`: agreement at every
/// listed point of `V`.
pub fn e_of_v_holds(points: &[Vec<Rational>], f: &RatFn, g: &RatFn) -> bool {
    points.iter().all(|x| f.eval(x) == g.eval(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::Pair;
    use crate::scalar::{q, qi};

    fn x(i: usize) -> RatFn {
        RatFn::var(2, i)
    }

    fn k(c: i64) -> RatFn {
        RatFn::constant(2, qi(c))
    }

    fn pres(gens: Vec<Pair>) -> CongruencePresentation {
        CongruencePresentation::new(2, gens).unwrap()
    }

    fn half_plane() -> CongruencePresentation {
        pres(vec![(x(0).add(&x(1)), x(1))])
    }

    #[test]
    fn membership_examples() {
        assert!(member(&half_plane(), &[qi(-1), qi(0)]));
        assert!(!member(&half_plane(), &[qi(1), qi(0)]));
        assert!(member(&CongruencePresentation::trivial(2), &[qi(1), qi(0)]));
        assert!(!member(&CongruencePresentation::improper(2), &[qi(1), qi(0)]));
    }

    #[test]
    fn sample_examples() {
        let bx = GridBox::cube(2, qi(-2), qi(2));
        let pts = sample(&half_plane(), &bx, &qi(1)).unwrap();
        // Oracle: direct enumeration of x1 <= x2 on the 5x5 grid.
        let mut expected = Vec::new();
        for a in -2..=2 {
            for b in -2..=2 {
                if a <= b {
                    expected.push(vec![qi(a), qi(b)]);
                }
            }
        }
        assert_eq!(pts, expected);
        assert_eq!(pts.len(), 15);

        assert!(sample(&pres(vec![(k(0), k(1))]), &bx, &qi(1)).unwrap().is_empty());

        let e = CongruencePresentation::trivial(1);
        let pts = sample(&e, &GridBox::cube(1, qi(0), qi(1)), &qi(1)).unwrap();
        assert_eq!(pts, vec![vec![qi(0)], vec![qi(1)]]);
    }

    #[test]
    fn sample_rejects_bad_boxes() {
        let e = CongruencePresentation::trivial(2);
        assert!(matches!(sample(&e, &GridBox::cube(2, qi(0), qi(1)), &q(2, 3)), Err(Error::InvalidBox(_))));
        assert!(matches!(sample(&e, &GridBox::cube(2, qi(0), qi(10_000)), &qi(1)), Err(Error::BoxTooLarge(_))));
    }

    #[test]
    fn half_plane_cells() {
        let c = pair_locus_cells(&x(0).add(&x(1)), &x(1)).unwrap();
        assert!(!c.is_empty());
        assert!(c.cells.iter().all(HCell::is_closed));
        for p in GridBox::cube(2, qi(-10), qi(10)).points(&q(1, 2)).unwrap() {
            assert_eq!(c.contains(&p), p[0] <= p[1]);
        }
        assert!(pair_locus_cells(&k(0), &k(1)).unwrap().is_empty());
        let f = x(0).add(&k(3));
        let c = pair_locus_cells(&f, &f).unwrap();
        for p in GridBox::cube(2, qi(-4), qi(4)).points(&qi(1)).unwrap() {
            assert!(c.contains(&p));
        }
    }

    #[test]
    fn variety_cell_examples() {
        let e = pres(vec![(x(0).add(&x(1)), x(1)), (x(0), k(0))]);
        let c = variety_cells(&e).unwrap();
        for p in GridBox::cube(2, qi(-10), qi(10)).points(&q(1, 2)).unwrap() {
            let on_ray = p[0] == qi(0) && p[1] >= qi(0);
            assert_eq!(c.contains(&p), on_ray, "{p:?}");
            assert_eq!(member(&e, &p), on_ray);
        }
        let f = x(0).add(&k(1));
        assert!(is_empty(&pres(vec![(f.clone(), f.shift(&q(1, 2)))])).unwrap());
        let whole = variety_cells(&CongruencePresentation::trivial(2)).unwrap();
        assert_eq!(whole.cells, vec![HCell::whole_space(2)]);
        assert!(!is_empty(&CongruencePresentation::trivial(2)).unwrap());
        assert!(is_empty(&pres(vec![(k(0), k(1))])).unwrap());
    }

    #[test]
    fn dimension_limit() {
        let e = CongruencePresentation::trivial(4);
        assert_eq!(variety_cells(&e), Err(Error::DimensionTooLarge(4)));
    }

    #[test]
    fn e_of_v_examples() {
        let pts: Vec<Vec<Rational>> = sample(&half_plane(), &GridBox::cube(2, qi(-2), qi(2)), &qi(1)).unwrap();
        assert!(e_of_v_holds(&pts, &x(0).add(&x(1)), &x(1)));
        assert!(!e_of_v_holds(&pts, &x(0), &x(1)));
        assert!(e_of_v_holds(&[], &x(0), &x(1)));
    }
}
