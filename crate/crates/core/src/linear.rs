//! Exact rational linear feasibility by Fourier–Motzkin elimination.
//!
//! Systems mix equalities, non-strict and strict inequalities over `Q^n`.
//! Strict inequalities are handled with a bounded slack variable `s`:
//! `a·x + b > 0` becomes `a·x + b - s >= 0` together with `s <= 1`, and the
//! system is strictly feasible iff the projection onto `s` allows `s > 0`.
//! Redundant combinations are pruned with Chernikov's history rule.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::scalar::{qi, Rational};

/// The affine form `constant + Σ coeffs[i]·x[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineForm {
    pub constant: Rational,
    pub coeffs: Vec<Rational>,
}

impl AffineForm {
    pub fn new(constant: Rational, coeffs: Vec<Rational>) -> Self {
        AffineForm { constant, coeffs }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        AffineForm::new(c, vec![Rational::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        debug_assert_eq!(x.len(), self.coeffs.len());
        self.coeffs.iter().zip(x).fold(
            self.constant.clone(),
            |acc, (c, xi)| {
                if c.is_zero() {
                    acc
                } else {
                    acc + c * xi
                }
            },
        )
    }

    pub fn sub(&self, other: &AffineForm) -> AffineForm {
        AffineForm {
            constant: &self.constant - &other.constant,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    fn scale(&self, k: &Rational) -> AffineForm {
        AffineForm { constant: &self.constant * k, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    fn add(&self, other: &AffineForm) -> AffineForm {
        AffineForm {
            constant: &self.constant + &other.constant,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Rows in the `[c0, c1, ..., cn]` layout used by exports.
    pub fn to_row(&self) -> Vec<Rational> {
        std::iter::once(self.constant.clone()).chain(self.coeffs.iter().cloned()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `form = 0`
    Eq,
    /// `form >= 0`
    Ge,
    /// `form > 0`
    Gt,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub form: AffineForm,
    pub rel: Relation,
}

impl Constraint {
    pub fn eq(form: AffineForm) -> Self {
        Constraint { form, rel: Relation::Eq }
    }

    pub fn ge(form: AffineForm) -> Self {
        Constraint { form, rel: Relation::Ge }
    }

    pub fn gt(form: AffineForm) -> Self {
        Constraint { form, rel: Relation::Gt }
    }

    pub fn holds_at(&self, x: &[Rational]) -> bool {
        let v = self.form.eval(x);
        match self.rel {
            Relation::Eq => v.is_zero(),
            Relation::Ge => !v.is_negative(),
            Relation::Gt => v.is_positive(),
        }
    }
}

#[derive(Clone, Debug)]
struct Row {
    form: AffineForm,
    history: Vec<u32>,
}

enum Stage {
    /// `x[var] = expr`, with `expr` free of `x[var]`.
    Subst { var: usize, expr: AffineForm },
    /// Constraints mentioning `x[var]` just before it was eliminated.
    Elim { var: usize, rows: Vec<AffineForm> },
}

/// Returns a point satisfying every constraint, or `None` when the system is
/// infeasible over `Q^n`.
pub fn feasible_point(n: usize, constraints: &[Constraint]) -> Option<Vec<Rational>> {
    debug_assert!(constraints.iter().all(|c| c.form.dim() == n));
    let strict = constraints.iter().any(|c| c.rel == Relation::Gt);
    let dim = if strict { n + 1 } else { n };
    let lift = |f: &AffineForm| {
        let mut f = f.clone();
        f.coeffs.resize(dim, Rational::zero());
        f
    };

    let mut equalities = Vec::new();
    let mut rows: Vec<AffineForm> = Vec::new();
    for c in constraints {
        match c.rel {
            Relation::Eq => equalities.push(lift(&c.form)),
            Relation::Ge => rows.push(lift(&c.form)),
            Relation::Gt => {
                let mut f = lift(&c.form);
                f.coeffs[n] = qi(-1);
                rows.push(f);
            }
        }
    }
    if strict {
        let mut cap = AffineForm::constant(dim, qi(1));
        cap.coeffs[n] = qi(-1);
        rows.push(cap);
    }

    let mut stages = Vec::new();

    // Gaussian substitution of the equalities.
    while let Some(eq) = equalities.pop() {
        let Some(var) = (0..dim).find(|&i| !eq.coeffs[i].is_zero()) else {
            if eq.constant.is_zero() {
                continue;
            }
            return None;
        };
        let pivot = eq.coeffs[var].clone();
        // x[var] = -(eq - pivot·x[var]) / pivot
        let mut expr = eq.scale(&(-Rational::from_integer(1.into()) / &pivot));
        expr.coeffs[var] = Rational::zero();
        for f in equalities.iter_mut().chain(rows.iter_mut()) {
            *f = substitute(f, var, &expr);
        }
        stages.push(Stage::Subst { var, expr });
    }

    let mut current: Vec<Row> = Vec::new();
    for (i, form) in rows.into_iter().enumerate() {
        current.push(Row { form, history: vec![i as u32] });
    }
    current = normalize_rows(current)?;

    let mut eliminated = 0usize;
    for var in 0..n {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for row in current {
            let c = &row.form.coeffs[var];
            if c.is_positive() {
                pos.push(row);
            } else if c.is_negative() {
                neg.push(row);
            } else {
                rest.push(row);
            }
        }
        if pos.is_empty() && neg.is_empty() {
            current = rest;
            continue;
        }
        eliminated += 1;
        stages.push(Stage::Elim { var, rows: pos.iter().chain(neg.iter()).map(|r| r.form.clone()).collect() });
        for p in &pos {
            for m in &neg {
                let history = merge_history(&p.history, &m.history);
                if history.len() > eliminated + 1 {
                    continue;
                }
                let a = p.form.coeffs[var].clone();
                let b = -m.form.coeffs[var].clone();
                let mut form = p.form.scale(&b).add(&m.form.scale(&a));
                form.coeffs[var] = Rational::zero();
                rest.push(Row { form, history });
            }
        }
        current = normalize_rows(rest)?;
    }

    let mut values = vec![Rational::zero(); dim];
    if strict {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for row in &current {
            let a = &row.form.coeffs[n];
            if a.is_zero() {
                continue;
            }
            let bound = -&row.form.constant / a;
            if a.is_positive() {
                if lo.as_ref().is_none_or(|l| bound > *l) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().is_none_or(|h| bound < *h) {
                hi = Some(bound);
            }
        }
        let s = hi.expect("slack is capped above");
        if !s.is_positive() || lo.is_some_and(|l| l > s) {
            return None;
        }
        values[n] = s;
    }

    for stage in stages.iter().rev() {
        match stage {
            Stage::Subst { var, expr } => values[*var] = expr.eval(&values),
            Stage::Elim { var, rows } => {
                values[*var] = Rational::zero();
                let mut lo: Option<Rational> = None;
                let mut hi: Option<Rational> = None;
                for f in rows {
                    let a = &f.coeffs[*var];
                    // a·x[var] + rest >= 0
                    let rest = f.eval(&values);
                    let bound = -rest / a;
                    if a.is_positive() {
                        if lo.as_ref().is_none_or(|l| bound > *l) {
                            lo = Some(bound);
                        }
                    } else if hi.as_ref().is_none_or(|h| bound < *h) {
                        hi = Some(bound);
                    }
                }
                values[*var] = pick_in_interval(lo, hi);
            }
        }
    }
    values.truncate(n);
    debug_assert!(constraints.iter().all(|c| c.holds_at(&values)));
    Some(values)
}

pub fn is_feasible(n: usize, constraints: &[Constraint]) -> bool {
    feasible_point(n, constraints).is_some()
}

fn substitute(f: &AffineForm, var: usize, expr: &AffineForm) -> AffineForm {
    let c = f.coeffs[var].clone();
    if c.is_zero() {
        return f.clone();
    }
    let mut out = f.add(&expr.scale(&c));
    out.coeffs[var] = Rational::zero();
    out
}

fn merge_history(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            out.push(b[j]);
            j += 1;
        } else {
            out.push(a[i]);
            i += 1;
            j += 1;
        }
    }
    out
}

/// Drops trivially true rows, rejects trivially false ones, scales each row
/// so its first nonzero coefficient is ±1 and keeps only the tightest
/// constant per direction.
fn normalize_rows(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut best: HashMap<Vec<Rational>, Row> = HashMap::new();
    let mut order = Vec::new();
    for row in rows {
        if row.form.is_constant() {
            if row.form.constant.is_negative() {
                return None;
            }
            continue;
        }
        let lead = row.form.coeffs.iter().find(|c| !c.is_zero()).expect("non-constant").abs();
        let form = row.form.scale(&(Rational::from_integer(1.into()) / lead));
        let key = form.coeffs.clone();
        match best.get_mut(&key) {
            Some(existing) => {
                if form.constant < existing.form.constant {
                    *existing = Row { form, history: row.history };
                }
            }
            None => {
                order.push(key.clone());
                best.insert(key, Row { form, history: row.history });
            }
        }
    }
    Some(order.into_iter().map(|k| best.remove(&k).unwrap()).collect())
}

/// Chooses a value in `[lo, hi]`: zero when allowed, else the integer closest
/// to zero, else the midpoint.
fn pick_in_interval(lo: Option<Rational>, hi: Option<Rational>) -> Rational {
    let zero = Rational::zero();
    match (lo, hi) {
        (None, None) => zero,
        (Some(l), None) => {
            if l <= zero {
                zero
            } else {
                l.ceil()
            }
        }
        (None, Some(h)) => {
            if h >= zero {
                zero
            } else {
                h.floor()
            }
        }
        (Some(l), Some(h)) => {
            if l <= zero && zero <= h {
                zero
            } else if l > zero && l.ceil() <= h {
                l.ceil()
            } else if h < zero && h.floor() >= l {
                h.floor()
            } else {
                (l + h) / qi(2)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn form(c: i64, coeffs: &[i64]) -> AffineForm {
        AffineForm::new(qi(c), coeffs.iter().map(|&v| qi(v)).collect())
    }

    #[test]
    fn unconstrained_is_origin() {
        assert_eq!(feasible_point(2, &[]), Some(vec![qi(0), qi(0)]));
    }

    #[test]
    fn strict_interval() {
        // 0 < x < 1
        let cons = [Constraint::gt(form(0, &[1])), Constraint::gt(form(1, &[-1]))];
        let p = feasible_point(1, &cons).unwrap();
        assert!(p[0] > qi(0) && p[0] < qi(1));
    }

    #[test]
    fn strict_versus_closed_point() {
        // x >= 0, x <= 0 is feasible; x > 0, x <= 0 is not.
        let closed = [Constraint::ge(form(0, &[1])), Constraint::ge(form(0, &[-1]))];
        assert_eq!(feasible_point(1, &closed), Some(vec![qi(0)]));
        let open = [Constraint::gt(form(0, &[1])), Constraint::ge(form(0, &[-1]))];
        assert_eq!(feasible_point(1, &open), None);
    }

    #[test]
    fn equalities_substitute() {
        // x + y = 3, x - y >= 1, y >= 1/2
        let cons = [
            Constraint::eq(form(-3, &[1, 1])),
            Constraint::ge(form(-1, &[1, -1])),
            Constraint::ge(AffineForm::new(q(-1, 2), vec![qi(0), qi(1)])),
        ];
        let p = feasible_point(2, &cons).unwrap();
        assert!(cons.iter().all(|c| c.holds_at(&p)));
        let bad = [Constraint::eq(form(-3, &[1, 1])), Constraint::eq(form(-4, &[1, 1]))];
        assert_eq!(feasible_point(2, &bad), None);
    }

    #[test]
    fn infeasible_triangle() {
        // x > 0, y > 0, x + y < 0
        let cons =
            [Constraint::gt(form(0, &[1, 0])), Constraint::gt(form(0, &[0, 1])), Constraint::gt(form(0, &[-1, -1]))];
        assert_eq!(feasible_point(2, &cons), None);
    }

    #[test]
    fn brute_force_agreement_in_two_dimensions() {
        // Random small systems: FM verdict versus a dense rational grid that
        // contains every vertex of these integer systems.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let m = rng.random_range(1..5);
            let cons: Vec<Constraint> = (0..m)
                .map(|_| {
                    let f = form(rng.random_range(-3..=3), &[rng.random_range(-1..=1), rng.random_range(-1..=1)]);
                    if rng.random_bool(0.5) {
                        Constraint::ge(f)
                    } else {
                        Constraint::gt(f)
                    }
                })
                .collect();
            let fm = feasible_point(2, &cons);
            if let Some(p) = &fm {
                assert!(cons.iter().all(|c| c.holds_at(p)));
            }
            let mut grid = false;
            'outer: for i in -40..=40 {
                for j in -40..=40 {
                    let p = [q(i, 4), q(j, 4)];
                    if cons.iter().all(|c| c.holds_at(&p)) {
                        grid = true;
                        break 'outer;
                    }
                }
            }
            assert_eq!(fm.is_some(), grid, "{cons:?}");
        }
    }
}
