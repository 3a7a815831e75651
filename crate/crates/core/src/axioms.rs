//! Axiom verification, minimal coefficients, symmetry and classification.
//!
//! Inequalities on exact tables are decided in rational arithmetic with zero
//! slack. Everything else uses `f64` with the plan's absolute tolerance.
//! Identity conditions (QPbl1, bl1, QPb1) compare distances for exact
//! equality in both modes.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar, Value};
use crate::space::{order_tuples, DistMatrix, EvalSet, Point, SamplePlan, Space};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum AxiomId {
    QPbl1,
    QPbl2,
    QPbl3,
    QPbl4,
    #[serde(rename = "symmetric")]
    Symmetric,
    #[serde(rename = "bl1")]
    Bl1,
    #[serde(rename = "bl2")]
    Bl2,
    #[serde(rename = "bl3")]
    Bl3,
    QPb1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evidence {
    /// Every pair or triple of the domain was checked.
    Exhaustive,
    /// Only the sample set was checked; a pass is evidence, not proof.
    Sampled,
}

impl Evidence {
    pub(crate) fn of(set: &EvalSet) -> Self {
        if set.exhaustive {
            Evidence::Exhaustive
        } else {
            Evidence::Sampled
        }
    }
}

/// Verdict for one axiom over an evaluation set.
///
/// `passed` holds iff `worst_violation <= tolerance`; exact checks run with
/// `tolerance = 0`. For inequality axioms the violation is `lhs - rhs`; for
/// identity axioms it counts offending tuples.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub axiom: AxiomId,
    pub passed: bool,
    pub worst_violation: Value,
    /// Lexicographically smallest violating tuple, present iff `!passed`.
    /// Triples are listed in path order `(x, z, y)`.
    pub witness: Option<Vec<String>>,
    /// Tuple attaining `worst_violation`, present iff `!passed`.
    pub worst_witness: Option<Vec<String>>,
    #[serde(skip)]
    pub witness_points: Option<Vec<Point>>,
    pub exact: bool,
    pub evidence: Evidence,
    pub tolerance: f64,
    pub checked: usize,
    pub violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl AxiomReport {
    fn identity(axiom: AxiomId, space: &Space, set: &EvalSet, tally: Tally<usize>, note: Option<String>) -> Self {
        let passed = tally.violations == 0;
        let witness_points = (!passed).then(|| tally.first.iter().map(|&i| set.points[i]).collect::<Vec<_>>());
        AxiomReport {
            axiom,
            passed,
            worst_violation: Value::int(tally.violations as i128),
            witness: witness_points.as_ref().map(|w| space.labels(w)),
            worst_witness: witness_points.as_ref().map(|w| space.labels(w)),
            witness_points,
            exact: true,
            evidence: Evidence::of(set),
            tolerance: 0.0,
            checked: tally.checked,
            violations: tally.violations,
            note,
        }
    }

    fn inequality(axiom: AxiomId, space: &Space, set: &EvalSet, out: Outcome, tol: f64) -> Self {
        let (tally, exact) = out;
        let tolerance = if exact { 0.0 } else { tol };
        let passed = tally.violations == 0;
        let pts = |idx: &Vec<usize>| idx.iter().map(|&i| set.points[i]).collect::<Vec<_>>();
        let witness_points = (!passed).then(|| pts(&tally.first));
        AxiomReport {
            axiom,
            passed,
            worst_violation: tally.worst.unwrap_or(Value::ZERO),
            witness: witness_points.as_ref().map(|w| space.labels(w)),
            worst_witness: (!passed).then(|| space.labels(&pts(&tally.worst_idx))),
            witness_points,
            exact,
            evidence: Evidence::of(set),
            tolerance,
            checked: tally.checked,
            violations: tally.violations,
            note: None,
        }
    }
}

/// Running summary of a sweep: the largest violation and the smallest
/// violating tuple, both chosen independently of visiting order.
#[derive(Clone, Debug)]
struct Tally<T> {
    worst: Option<T>,
    worst_idx: Vec<usize>,
    first: Vec<usize>,
    violations: usize,
    checked: usize,
}

type Outcome = (Tally<Value>, bool);

impl<T: Copy + PartialOrd> Tally<T> {
    fn new() -> Self {
        Tally { worst: None, worst_idx: Vec::new(), first: Vec::new(), violations: 0, checked: 0 }
    }

    fn observe(&mut self, v: T, idx: &[usize], violated: bool, pts: &[Point]) {
        self.checked += 1;
        let tuple = |ix: &[usize]| ix.iter().map(|&i| pts[i]).collect::<Vec<_>>();
        let replace = match self.worst {
            None => true,
            Some(w) => match v.partial_cmp(&w) {
                Some(Ordering::Greater) => true,
                Some(Ordering::Equal) => order_tuples(&tuple(idx), &tuple(&self.worst_idx)) == Ordering::Less,
                _ => false,
            },
        };
        if replace {
            self.worst = Some(v);
            self.worst_idx = idx.to_vec();
        }
        if violated {
            if self.violations == 0 || order_tuples(&tuple(idx), &tuple(&self.first)) == Ordering::Less {
                self.first = idx.to_vec();
            }
            self.violations += 1;
        }
    }
}

impl<T: Scalar> Tally<T> {
    fn into_value(self) -> Tally<Value> {
        Tally {
            worst: self.worst.map(Scalar::into_value),
            worst_idx: self.worst_idx,
            first: self.first,
            violations: self.violations,
            checked: self.checked,
        }
    }
}

#[derive(Clone, Copy)]
enum Arity {
    Pair,
    Triple,
}

/// Sweeps pairs `(x, y)` or triples `(x, z, y)`; `viol` returns `None` on
/// arithmetic overflow, which aborts the sweep.
fn sweep<T: Scalar>(
    set: &EvalSet,
    arity: Arity,
    thresh: T,
    mut viol: impl FnMut(usize, usize, usize) -> Option<T>,
) -> Option<Tally<T>> {
    let mut tally = Tally::new();
    let mut overflow = false;
    let pts = &set.points;
    match arity {
        Arity::Pair => {
            let n = pts.len();
            for x in 0..n {
                for y in 0..n {
                    let v = viol(x, 0, y)?;
                    tally.observe(v, &[x, y], v > thresh, pts);
                }
            }
        }
        Arity::Triple => set.for_each_triple(|x, z, y| {
            if overflow {
                return;
            }
            match viol(x, z, y) {
                Some(v) => tally.observe(v, &[x, z, y], v > thresh, pts),
                None => overflow = true,
            }
        }),
    }
    (!overflow).then_some(tally)
}

/// Runs `$body` over the exact matrix when possible, else over `f64`.
/// Inside the body `$d` is the flat matrix, `$n` its width, `$s` the
/// coefficient and `$th` the violation threshold, all of one scalar type.
macro_rules! exact_or_approx {
    ($m:expr, $s:expr, $tol:expr, |$d:ident, $n:ident, $sv:ident, $th:ident| $body:expr) => {{
        let exact = match ($m, $s.exact()) {
            (DistMatrix::Exact { n, d }, Some(sv)) => {
                let ($d, $n, $sv): (&[Rational], usize, Rational) = (d.as_slice(), *n, sv);
                let $th = <Rational as Scalar>::zero();
                ($body).map(|t| t.into_value())
            }
            _ => None,
        };
        match exact {
            Some(t) => (t, true),
            None => match $m.to_approx() {
                DistMatrix::Approx { n, d } => {
                    let ($d, $n, $sv): (&[f64], usize, f64) = (d.as_slice(), n, $s.to_f64());
                    let $th: f64 = $tol;
                    (($body).expect("f64 sweeps cannot overflow").into_value(), false)
                }
                DistMatrix::Exact { .. } => unreachable!(),
            },
        }
    }};
}

fn abs_diff<T: Scalar>(a: T, b: T) -> Option<T> {
    if a >= b {
        a.sub(b)
    } else {
        b.sub(a)
    }
}

/// `d(x,y) = 0 ⇒ x = y`, checked at distinct sampled pairs.
fn identity_zero(set: &EvalSet, m: &DistMatrix) -> Tally<usize> {
    let pts = &set.points;
    let n = pts.len();
    let mut tally = Tally::new();
    for x in 0..n {
        for y in 0..n {
            if pts[x] == pts[y] {
                continue;
            }
            let zero = match m {
                DistMatrix::Exact { d, .. } => Scalar::is_zero(d[x * n + y]),
                DistMatrix::Approx { d, .. } => d[x * n + y] == 0.0,
            };
            tally.observe(usize::from(zero), &[x, y], zero, pts);
        }
    }
    tally
}

/// Checks QPbl1–QPbl4 at coefficient `s`.
pub fn check_axioms(space: &Space, s: Value, plan: &SamplePlan) -> Result<Vec<AxiomReport>> {
    crate::space::validate_coefficient(s)?;
    let set = space.eval_set(plan);
    let m = space.matrix(&set.points);
    Ok(check_axioms_on(space, s, &set, &m, plan.tolerance))
}

pub(crate) fn check_axioms_on(space: &Space, s: Value, set: &EvalSet, m: &DistMatrix, tol: f64) -> Vec<AxiomReport> {
    let qpbl1 = identity_zero(set, m);
    let note = (!set.exhaustive)
        .then(|| "sampled evidence only: positivity checked at sampled distinct pairs".to_string());
    let r1 = AxiomReport::identity(AxiomId::QPbl1, space, set, qpbl1, note);

    let r2 = exact_or_approx!(m, s, tol, |d, n, _s, th| {
        sweep(set, Arity::Pair, th, |x, _, y| d[x * n + x].sub(d[x * n + y]))
    });
    let r3 = exact_or_approx!(m, s, tol, |d, n, _s, th| {
        sweep(set, Arity::Pair, th, |x, _, y| d[x * n + x].sub(d[y * n + x]))
    });
    let r4 = exact_or_approx!(m, s, tol, |d, n, sv, th| {
        sweep(set, Arity::Triple, th, |x, z, y| {
            let rhs = sv.mul(d[x * n + z].add(d[z * n + y])?)?.sub(d[z * n + z])?;
            d[x * n + y].sub(rhs)
        })
    });
    vec![
        r1,
        AxiomReport::inequality(AxiomId::QPbl2, space, set, r2, tol),
        AxiomReport::inequality(AxiomId::QPbl3, space, set, r3, tol),
        AxiomReport::inequality(AxiomId::QPbl4, space, set, r4, tol),
    ]
}

pub fn all_passed(reports: &[AxiomReport]) -> bool {
    reports.iter().all(|r| r.passed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// Supremum over the whole (finite) domain.
    Exact,
    /// Maximum over a sample; the true supremum may be larger.
    LowerBound,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientBound {
    pub value: Value,
    pub kind: BoundKind,
    pub exact_arithmetic: bool,
    /// Triple `(x, z, y)` attaining the maximum ratio, absent when the bound
    /// is the floor value 1.
    pub witness: Option<Vec<String>>,
    pub triples: usize,
    pub skipped_zero_denominator: usize,
}

/// Smallest `s ≥ 1` for which QPbl4 holds on the evaluation set:
/// the maximum of `(d(x,y) + d(z,z)) / (d(x,z) + d(z,y))` over triples,
/// clamped below at 1.
///
/// Triples with `d(x,z) + d(z,y) = 0` are skipped. Under QPbl1 both terms
/// vanishing forces `x = z = y`, and then QPbl2 gives `d(x,x) ≤ d(x,z) = 0`,
/// so the numerator is 0 as well and the triple constrains nothing.
pub fn minimal_coefficient(space: &Space, plan: &SamplePlan) -> Result<CoefficientBound> {
    let set = space.eval_set(plan);
    minimal_coefficient_on(space, &set, plan.tolerance)
}

/// Same as [`minimal_coefficient`] over an explicit evaluation set.
pub fn minimal_coefficient_on(space: &Space, set: &EvalSet, tol: f64) -> Result<CoefficientBound> {
    let m = space.matrix(&set.points);
    let reports = check_axioms_on(space, space.coefficient(), set, &m, tol);
    if let Some(bad) = reports[..3].iter().find(|r| !r.passed) {
        return Err(Error::AxiomPrereqFailed(format!(
            "{:?} fails at {:?}",
            bad.axiom,
            bad.witness.clone().unwrap_or_default()
        )));
    }
    let one = Value::ONE;
    let mut skipped = 0usize;
    let (tally, exact) = exact_or_approx!(&m, one, tol, |d, n, _s, _th| {
        skipped = 0;
        let mut tally = Tally::new();
        let mut overflow = false;
        set.for_each_triple(|x, z, y| {
            if overflow {
                return;
            }
            let den = match d[x * n + z].add(d[z * n + y]) {
                Some(v) => v,
                None => {
                    overflow = true;
                    return;
                }
            };
            if Scalar::is_zero(den) {
                skipped += 1;
                return;
            }
            match d[x * n + y].add(d[z * n + z]).and_then(|num| num.div(den)) {
                Some(r) => tally.observe(r, &[x, z, y], false, &set.points),
                None => overflow = true,
            }
        });
        (!overflow).then_some(tally)
    });
    let raw = tally.worst.unwrap_or(Value::ONE);
    let (value, witness) = if raw.le(&Value::ONE) {
        (if exact { Value::ONE } else { Value::Approx(1.0) }, None)
    } else {
        let w: Vec<Point> = tally.worst_idx.iter().map(|&i| set.points[i]).collect();
        (raw, Some(space.labels(&w)))
    };
    Ok(CoefficientBound {
        value,
        kind: if set.exhaustive { BoundKind::Exact } else { BoundKind::LowerBound },
        exact_arithmetic: exact,
        witness,
        triples: set.triple_count(),
        skipped_zero_denominator: skipped,
    })
}

/// `|d(x,y) − d(y,x)| ≤ tolerance` on every evaluated pair.
pub fn is_symmetric(space: &Space, plan: &SamplePlan) -> AxiomReport {
    let set = space.eval_set(plan);
    let m = space.matrix(&set.points);
    symmetric_on(space, &set, &m, plan.tolerance, AxiomId::Symmetric)
}

fn symmetric_on(space: &Space, set: &EvalSet, m: &DistMatrix, tol: f64, id: AxiomId) -> AxiomReport {
    let out = exact_or_approx!(m, Value::ONE, tol, |d, n, _s, th| {
        sweep(set, Arity::Pair, th, |x, _, y| abs_diff(d[x * n + y], d[y * n + x]))
    });
    AxiomReport::inequality(id, space, set, out, tol)
}

/// The induced b-metric-like `D(x,y) = d(x,y) + d(y,x)` on the same domain
/// with the same coefficient. Fails when the source space does not pass
/// QPbl1–QPbl4 at its own coefficient.
pub fn derive_bml(space: &Space, plan: &SamplePlan) -> Result<Space> {
    let reports = check_axioms(space, space.coefficient(), plan)?;
    if let Some(bad) = reports.iter().find(|r| !r.passed) {
        return Err(Error::AxiomPrereqFailed(format!("{:?} fails for {}", bad.axiom, space.name())));
    }
    Ok(symmetrized(space))
}

/// `D = d + dᵀ` without the axiom precondition.
pub fn symmetrized(space: &Space) -> Space {
    let inner = space.clone();
    Space::from_fn(format!("D[{}]", space.name()), space.domain().clone(), space.coefficient(), move |x, y| {
        inner.dist(x, y).add(inner.dist(y, x))
    })
    .expect("coefficient already validated")
}

/// Checks bl1 (`D(x,y) = 0 ⇒ x = y`), bl2 (symmetry) and bl3
/// (`D(x,y) ≤ s[D(x,z) + D(z,y)]`) at coefficient `s`.
pub fn check_bml(space: &Space, s: Value, plan: &SamplePlan) -> Result<Vec<AxiomReport>> {
    crate::space::validate_coefficient(s)?;
    let set = space.eval_set(plan);
    let m = space.matrix(&set.points);
    let tol = plan.tolerance;
    let bl1 = AxiomReport::identity(AxiomId::Bl1, space, &set, identity_zero(&set, &m), None);
    let bl2 = symmetric_on(space, &set, &m, tol, AxiomId::Bl2);
    let bl3 = exact_or_approx!(&m, s, tol, |d, n, sv, th| {
        sweep(&set, Arity::Triple, th, |x, z, y| d[x * n + y].sub(sv.mul(d[x * n + z].add(d[z * n + y])?)?))
    });
    Ok(vec![bl1, bl2, AxiomReport::inequality(AxiomId::Bl3, space, &set, bl3, tol)])
}

/// QPb1: `d(x,x) = d(x,y) = d(y,y) ⇒ x = y`, with exact equality.
pub fn check_qpb1(space: &Space, plan: &SamplePlan) -> AxiomReport {
    let set = space.eval_set(plan);
    let pts = &set.points;
    let n = pts.len();
    let mut tally = Tally::new();
    for x in 0..n {
        for y in 0..n {
            if pts[x] == pts[y] {
                continue;
            }
            let (xx, xy, yy) = (space.dist(&pts[x], &pts[x]), space.dist(&pts[x], &pts[y]), space.dist(&pts[y], &pts[y]));
            let bad = xx == xy && xy == yy;
            tally.observe(usize::from(bad), &[x, y], bad, pts);
        }
    }
    AxiomReport::identity(AxiomId::QPb1, space, &set, tally, None)
}

/// Membership of a space in the classes of the b-metric-like family, each
/// judged at the space's own coefficient.
#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub space: String,
    pub coefficient: Value,
    pub evidence: Evidence,
    pub quasi_partial_b_metric_like: bool,
    pub quasi_partial_b_metric: bool,
    pub symmetric: bool,
    pub b_metric_like: bool,
    pub reports: Vec<AxiomReport>,
}

pub fn classify(space: &Space, plan: &SamplePlan) -> Classification {
    let s = space.coefficient();
    let set = space.eval_set(plan);
    let m = space.matrix(&set.points);
    let qpbl = check_axioms_on(space, s, &set, &m, plan.tolerance);
    let qpb1 = check_qpb1(space, plan);
    let sym = symmetric_on(space, &set, &m, plan.tolerance, AxiomId::Symmetric);
    let bml = check_bml(space, s, plan).expect("coefficient validated at construction");
    let is_qpbl = all_passed(&qpbl);
    let is_qpb = qpb1.passed && all_passed(&qpbl[1..]);
    let mut reports = qpbl;
    reports.push(qpb1);
    reports.push(sym.clone());
    let is_bml = all_passed(&bml);
    reports.extend(bml);
    Classification {
        space: space.name().to_string(),
        coefficient: s,
        evidence: Evidence::of(&set),
        quasi_partial_b_metric_like: is_qpbl,
        quasi_partial_b_metric: is_qpb,
        symmetric: sym.passed,
        b_metric_like: is_bml,
        reports,
    }
}
