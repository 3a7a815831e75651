use serde::Serialize;

use super::{pair_labels, HypothesisCheck, Property, ScalarFunction};
use crate::axioms::Evidence;
use crate::error::{Error, Result};
use crate::mapping::Mapping;
use crate::scalar::Value;
use crate::space::{EvalSet, Point, SamplePlan, Space};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    Phi,
    Lambda,
    PhiPsi,
    Expansive,
    ExpansiveK,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Stop once `d(x,Tx) + d(Tx,x) ≤ tol`.
    pub tol: f64,
    pub max_iter: usize,
    /// Extra seeded starting points used to probe uniqueness.
    pub restarts: usize,
    /// Sampling for hypothesis checks and restart seeds.
    pub plan: SamplePlan,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { tol: 1e-10, max_iter: 100_000, restarts: 5, plan: SamplePlan::default() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RestartOutcome {
    pub start: String,
    pub point: Option<String>,
    pub iterations: usize,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPointCertificate {
    pub theorem: Theorem,
    pub space: String,
    pub map: String,
    pub point: String,
    #[serde(skip)]
    pub point_value: Point,
    /// `d(z, Tz)`.
    pub residual_forward: Value,
    /// `d(Tz, z)`.
    pub residual_backward: Value,
    /// `d(z, z)`.
    pub self_distance: Value,
    pub iterations: usize,
    pub inverse_evaluations: usize,
    pub tol: f64,
    pub hypothesis_report: Vec<HypothesisCheck>,
    pub unique_among_restarts: bool,
    pub restarts: Vec<RestartOutcome>,
    /// `d(x_k, x_{k+1})` along the main run, in iteration order.
    pub displacements: Vec<Value>,
    pub notes: Vec<String>,
}

impl FixedPointCertificate {
    /// Residuals within tolerance and every hypothesis passed; contraction
    /// theorems also need `d(z,z) ≤ tol`.
    pub fn is_valid(&self) -> bool {
        let tol = self.tol;
        let contraction = matches!(self.theorem, Theorem::Phi | Theorem::Lambda | Theorem::PhiPsi);
        self.residual_forward.to_f64() <= tol
            && self.residual_backward.to_f64() <= tol
            && (!contraction || self.self_distance.to_f64() <= tol)
            && self.hypothesis_report.iter().all(|h| h.passed)
    }
}

/// Sample points of the space that also lie in the map's domain.
fn hypothesis_points(space: &Space, map: &Mapping, plan: &SamplePlan) -> EvalSet {
    let mut set = space.eval_set(plan);
    set.points.retain(|p| map.domain().contains(p));
    set.grid_len = set.grid_len.min(set.points.len());
    set
}

fn pairs(set: &EvalSet) -> impl Iterator<Item = (Point, Point)> + '_ {
    set.points.iter().flat_map(move |x| set.points.iter().map(move |y| (*x, *y)))
}

fn max_distance(space: &Space, set: &EvalSet) -> f64 {
    pairs(set).map(|(x, y)| space.dist(&x, &y).to_f64()).fold(0.0, f64::max)
}

fn self_map_check(space: &Space, map: &Mapping, set: &EvalSet) -> HypothesisCheck {
    let escaped = set.points.iter().find(|p| !space.domain().contains(&map.forward(p)));
    HypothesisCheck {
        name: "self-map".into(),
        passed: escaped.is_none(),
        evidence: Evidence::of(set),
        checked: set.len(),
        worst_slack: None,
        witness: escaped.map(|p| vec![space.label(p), space.domain().label(&map.forward(p))]),
        detail: None,
    }
}

/// Terms `sⁿφⁿ(t)` for `n < 200`; convergence is accepted when every ratio of
/// consecutive terms over the last 50 is at most `1 − 1e-6`, or when a term
/// reaches 0.
pub fn series_probe(phi: &ScalarFunction, s: f64, t: f64) -> (bool, f64) {
    const TERMS: usize = 200;
    const WINDOW: usize = 50;
    let mut u = t;
    let mut worst: f64 = 0.0;
    for n in 0..TERMS {
        let next = phi.eval_f64(u);
        if next == 0.0 {
            return (true, worst);
        }
        let ratio = s * next / u;
        if n >= TERMS - WINDOW {
            worst = worst.max(ratio);
        }
        u = next;
    }
    (worst <= 1.0 - 1e-6, worst)
}

fn require(checks: &[HypothesisCheck]) -> Result<()> {
    match checks.iter().find(|c| !c.passed) {
        Some(c) => Err(Error::HypothesisFailed(Box::new(c.clone()))),
        None => Ok(()),
    }
}

struct Run {
    point: Point,
    iterations: usize,
    inverse_evaluations: usize,
    displacements: Vec<Value>,
}

/// Iterates `x ← step(x)` until `d(x,Tx) + d(Tx,x) ≤ tol`, where `T` is the
/// forward map. Contraction solvers step forward, expansive ones step by `T⁻¹`.
fn iterate(space: &Space, map: &Mapping, x0: &Point, opts: &SolveOptions, inverse: bool) -> Result<Run> {
    let dom = space.domain();
    if !dom.contains(x0) || !map.domain().contains(x0) {
        return Err(Error::PointOutsideDomain(space.label(x0)));
    }
    let mut x = *x0;
    let mut displacements = Vec::new();
    let mut inverse_evaluations = 0;
    for k in 0..=opts.max_iter {
        let tx = map.forward(&x);
        if !dom.contains(&tx) {
            return Err(Error::DomainEscape(format!("T({}) = {}", space.label(&x), dom.label(&tx))));
        }
        let fwd = space.dist(&x, &tx);
        let disp = fwd.add(space.dist(&tx, &x));
        if disp.to_f64() <= opts.tol {
            return Ok(Run { point: x, iterations: k, inverse_evaluations, displacements });
        }
        if k == opts.max_iter {
            break;
        }
        x = if inverse {
            inverse_evaluations += 1;
            let prev = map.inverse(&x)?;
            if !dom.contains(&prev) || !map.domain().contains(&prev) {
                return Err(Error::DomainEscape(format!("T⁻¹({}) = {}", space.label(&x), dom.label(&prev))));
            }
            displacements.push(space.dist(&prev, &x));
            prev
        } else {
            displacements.push(fwd);
            tx
        };
    }
    Err(Error::MaxIterExceeded(opts.max_iter))
}

fn certify(
    theorem: Theorem,
    space: &Space,
    map: &Mapping,
    x0: &Point,
    opts: &SolveOptions,
    hypotheses: Vec<HypothesisCheck>,
    inverse: bool,
    mut notes: Vec<String>,
) -> Result<FixedPointCertificate> {
    let run = iterate(space, map, x0, opts, inverse)?;
    let z = run.point;
    let tz = map.forward(&z);
    let seeds: Vec<Point> = opts
        .plan
        .random_domain_points(space.domain(), opts.restarts)
        .into_iter()
        .filter(|p| map.domain().contains(p))
        .collect();
    let mut found = vec![z];
    let mut restarts = Vec::new();
    for seed in &seeds {
        match iterate(space, map, seed, opts, inverse) {
            Ok(r) => {
                found.push(r.point);
                restarts.push(RestartOutcome {
                    start: space.label(seed),
                    point: Some(space.label(&r.point)),
                    iterations: r.iterations,
                    error: None,
                });
            }
            Err(e) => restarts.push(RestartOutcome {
                start: space.label(seed),
                point: None,
                iterations: 0,
                error: Some(e.to_string()),
            }),
        }
    }
    let close = 10.0 * opts.tol;
    let unique = restarts.iter().all(|r| r.error.is_none())
        && found.iter().all(|a| {
            found.iter().all(|b| space.dist(a, b).to_f64().max(space.dist(b, a).to_f64()) <= close)
        });
    if !space.domain().is_finite() {
        notes.push("hypotheses checked on sampled pairs only".into());
    }
    Ok(FixedPointCertificate {
        theorem,
        space: space.name().to_string(),
        map: map.name().to_string(),
        point: space.label(&z),
        point_value: z,
        residual_forward: space.dist(&z, &tz),
        residual_backward: space.dist(&tz, &z),
        self_distance: space.dist(&z, &z),
        iterations: run.iterations,
        inverse_evaluations: run.inverse_evaluations,
        tol: opts.tol,
        hypothesis_report: hypotheses,
        unique_among_restarts: unique,
        restarts,
        displacements: run.displacements,
        notes,
    })
}

fn phi_hypotheses(space: &Space, map: &Mapping, phi: &ScalarFunction, x0: &Point, opts: &SolveOptions) -> Vec<HypothesisCheck> {
    let plan = &opts.plan;
    let set = hypothesis_points(space, map, plan);
    let ev = Evidence::of(&set);
    let mut checks = vec![self_map_check(space, map, &set)];
    checks.push(HypothesisCheck::inequality(
        "contraction",
        ev,
        plan.tolerance,
        pairs(&set),
        pair_labels(space),
        |(x, y)| (space.dist(&map.forward(x), &map.forward(y)), phi.eval(space.dist(x, y))),
    ));
    let upper = max_distance(space, &set).max(1.0);
    let grid: Vec<f64> = (1..=1000).map(|i| upper * i as f64 / 1000.0).collect();
    let below = grid.iter().find(|&&t| !(phi.eval_f64(t) < t));
    checks.push(HypothesisCheck {
        name: "phi-below-identity".into(),
        passed: below.is_none(),
        evidence: Evidence::Sampled,
        checked: grid.len(),
        worst_slack: None,
        witness: below.map(|t| vec![t.to_string()]),
        detail: Some("φ(t) < t checked on a grid only".into()),
    });
    checks.extend(phi.verify_properties(upper, plan.tolerance));
    let s = space.coefficient().to_f64();
    let tx0 = map.forward(x0);
    let d0 = if space.domain().contains(&tx0) { space.dist(x0, &tx0).to_f64() } else { 0.0 };
    let mut probes = vec![1.0];
    if d0 > 0.0 {
        probes.insert(0, d0);
    }
    for t in probes {
        let (ok, ratio) = series_probe(phi, s, t);
        checks.push(HypothesisCheck::verdict(
            "series-convergence",
            ok,
            format!("Σ sⁿφⁿ({t}): worst ratio {ratio} over the last 50 of 200 terms"),
        ));
    }
    checks
}

/// Picard iteration under `d(Tx,Ty) ≤ φ(d(x,y))`.
pub fn phi_contraction_solve(
    space: &Space,
    map: &Mapping,
    phi: &ScalarFunction,
    x0: &Point,
    opts: &SolveOptions,
) -> Result<FixedPointCertificate> {
    let checks = phi_hypotheses(space, map, phi, x0, opts);
    require(&checks)?;
    let notes = vec!["0-completeness of the space is assumed, not checked".into()];
    certify(Theorem::Phi, space, map, x0, opts, checks, false, notes)
}

/// The linear case `φ(t) = λt` with `0 ≤ λ < 1/s`.
pub fn lambda_solve(space: &Space, map: &Mapping, lambda: Value, x0: &Point, opts: &SolveOptions) -> Result<FixedPointCertificate> {
    let s = space.coefficient();
    let bound = Value::ONE.div(s);
    let in_range = Value::ZERO.le(&lambda) && lambda.lt(&bound);
    let range = HypothesisCheck::verdict("lambda-range", in_range, format!("need 0 ≤ λ = {lambda} < 1/s = {bound}"));
    require(std::slice::from_ref(&range))?;
    let phi = ScalarFunction::linear(lambda);
    let mut checks = vec![range];
    checks.extend(phi_hypotheses(space, map, &phi, x0, opts));
    require(&checks)?;
    let notes = vec!["0-completeness of the space is assumed, not checked".into()];
    certify(Theorem::Lambda, space, map, x0, opts, checks, false, notes)
}

/// One row of the `(φ, ψ)` contraction inequality.
#[derive(Clone, Debug, Serialize)]
pub struct InequalityRow {
    pub x: String,
    pub y: String,
    /// `φ(d(Tx,Ty))`.
    pub lhs: Value,
    /// `φ(d(x,y))/s − ψ(d(x,y))`.
    pub rhs: Value,
    pub holds: bool,
}

/// `φ(d(Tx,Ty)) ≤ φ(d(x,y))/s − ψ(d(x,y))` at every evaluated pair, in
/// row-major pair order.
pub fn phi_psi_table(
    space: &Space,
    map: &Mapping,
    phi: &ScalarFunction,
    psi: &ScalarFunction,
    plan: &SamplePlan,
) -> Vec<InequalityRow> {
    let set = hypothesis_points(space, map, plan);
    let s = space.coefficient();
    pairs(&set)
        .map(|(x, y)| {
            let dxy = space.dist(&x, &y);
            let lhs = phi.eval(space.dist(&map.forward(&x), &map.forward(&y)));
            let rhs = phi.eval(dxy).div(s).sub(psi.eval(dxy));
            let holds = if lhs.is_exact() && rhs.is_exact() { lhs.le(&rhs) } else { lhs.le_tol(&rhs, plan.tolerance) };
            InequalityRow { x: space.label(&x), y: space.label(&y), lhs, rhs, holds }
        })
        .collect()
}

/// Picard iteration under `φ(d(Tx,Ty)) ≤ φ(d(x,y))/s − ψ(d(x,y))`.
pub fn phi_psi_solve(
    space: &Space,
    map: &Mapping,
    phi: &ScalarFunction,
    psi: &ScalarFunction,
    x0: &Point,
    opts: &SolveOptions,
) -> Result<FixedPointCertificate> {
    let plan = &opts.plan;
    let set = hypothesis_points(space, map, plan);
    let ev = Evidence::of(&set);
    let mut checks = vec![self_map_check(space, map, &set)];
    let s = space.coefficient();
    checks.push(HypothesisCheck::inequality(
        "contraction",
        ev,
        plan.tolerance,
        pairs(&set),
        pair_labels(space),
        |(x, y)| {
            let dxy = space.dist(x, y);
            (phi.eval(space.dist(&map.forward(x), &map.forward(y))), phi.eval(dxy).div(s).sub(psi.eval(dxy)))
        },
    ));
    for (f, role) in [(phi, "phi"), (psi, "psi")] {
        for p in [Property::MonotoneNondecreasing, Property::ZeroIffZero, Property::Continuous] {
            if !f.declares(p) {
                checks.push(HypothesisCheck::verdict(
                    &format!("{role}-declares-{}", serde_json::to_value(p).unwrap().as_str().unwrap()),
                    false,
                    format!("{} does not declare this property", f.name()),
                ));
            }
        }
    }
    if !phi.declares(Property::Linear) {
        checks.push(HypothesisCheck::verdict("phi-declares-linear", false, format!("{} is not linear", phi.name())));
    }
    let upper = max_distance(space, &set).max(1.0);
    checks.extend(phi.verify_properties(upper, plan.tolerance));
    checks.extend(psi.verify_properties(upper, plan.tolerance));
    let grid: Vec<Value> = (1..=1000).map(|i| Value::Approx(upper * i as f64 / 1000.0)).collect();
    checks.push(HypothesisCheck::inequality(
        "phi-of-psi-below-psi",
        Evidence::Sampled,
        plan.tolerance,
        grid,
        |t| vec![t.to_string()],
        |t| (phi.eval(psi.eval(*t)), psi.eval(*t)),
    ));
    require(&checks)?;
    certify(Theorem::PhiPsi, space, map, x0, opts, checks, false, Vec::new())
}

/// Coefficients of the expansive inequality
/// `d(Tx,Ty) ≥ a₁[d(x,y)+d(y,x)] + a₂[d(x,Tx)+d(Tx,x)] + a₃[d(y,Ty)+d(Ty,y)] + a₄[d(x,Ty)+d(Ty,x)]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpansiveParams {
    pub a1: Value,
    pub a2: Value,
    pub a3: Value,
    pub a4: Value,
}

impl ExpansiveParams {
    /// `λ = (1 + a₄ − a₃) / (a₁ + a₂ + a₄/s)`.
    pub fn lambda(&self, s: Value) -> Value {
        Value::ONE.add(self.a4).sub(self.a3).div(self.a1.add(self.a2).add(self.a4.div(s)))
    }

    /// The parameter constraints at coefficient `s`, one check each.
    pub fn validate(&self, s: Value) -> Vec<HypothesisCheck> {
        let ExpansiveParams { a1, a2, a3, a4 } = *self;
        let two = Value::int(2);
        let s2 = s.mul(s);
        let positive = [a1, a2, a3, a4].iter().all(|a| Value::ZERO.lt(a));
        let c1 = Value::ONE.add(a4).sub(a3);
        let c2 = s.mul(a1.add(a2)).add(two.mul(s2).mul(a3.sub(a4))).add(a4);
        let lambda = self.lambda(s);
        let half = Value::ONE.div(two.mul(s));
        vec![
            HypothesisCheck::verdict("params-positive", positive, "a₁, a₂, a₃, a₄ > 0"),
            HypothesisCheck::verdict("one-plus-a4-minus-a3", Value::ZERO.lt(&c1), format!("1 + a₄ − a₃ = {c1} > 0")),
            HypothesisCheck::verdict(
                "weighted-sum",
                two.mul(s2).lt(&c2),
                format!("s(a₁+a₂) + 2s²(a₃−a₄) + a₄ = {c2} > 2s² = {}", two.mul(s2)),
            ),
            HypothesisCheck::verdict("a1-plus-a4", Value::ONE.le(&a1.add(a4)), format!("a₁ + a₄ = {} ≥ 1", a1.add(a4))),
            HypothesisCheck::verdict(
                "derived-lambda",
                Value::ZERO.lt(&lambda) && lambda.lt(&half),
                format!("λ = {lambda} in (0, 1/(2s)) = (0, {half})"),
            ),
        ]
    }
}

fn inverse_check(space: &Space, map: &Mapping, set: &EvalSet, tol: f64) -> HypothesisCheck {
    HypothesisCheck::inequality(
        "inverse-consistency",
        Evidence::of(set),
        tol,
        set.points.clone(),
        |y| vec![space.label(y)],
        |y| match map.inverse(y) {
            Ok(x) => {
                let back = map.forward(&x).as_real().zip(y.as_real()).map(|(a, b)| (a - b).abs());
                match back {
                    Some(err) => (Value::Approx(err), Value::Approx(tol.max(1e-9 * y.as_real().unwrap().abs()))),
                    None if map.forward(&x) == *y => (Value::ZERO, Value::ZERO),
                    None => (Value::ONE, Value::ZERO),
                }
            }
            Err(_) => (Value::ONE, Value::ZERO),
        },
    )
}

/// Reverse iteration `x_{k+1} = T⁻¹(x_k)` for a surjective expansive map.
pub fn expansive_solve(
    space: &Space,
    map: &Mapping,
    params: &ExpansiveParams,
    x0: &Point,
    opts: &SolveOptions,
) -> Result<FixedPointCertificate> {
    if !map.has_inverse() {
        return Err(Error::NoInverse);
    }
    let plan = &opts.plan;
    let set = hypothesis_points(space, map, plan);
    let s = space.coefficient();
    let mut checks = params.validate(s);
    checks.push(self_map_check(space, map, &set));
    checks.push(inverse_check(space, map, &set, plan.tolerance));
    let d = |a: &Point, b: &Point| space.dist(a, b).add(space.dist(b, a));
    checks.push(HypothesisCheck::inequality(
        "expansion",
        Evidence::of(&set),
        plan.tolerance,
        pairs(&set),
        pair_labels(space),
        |(x, y)| {
            let (tx, ty) = (map.forward(x), map.forward(y));
            let rhs = params
                .a1
                .mul(d(x, y))
                .add(params.a2.mul(d(x, &tx)))
                .add(params.a3.mul(d(y, &ty)))
                .add(params.a4.mul(d(x, &ty)));
            (rhs, space.dist(&tx, &ty))
        },
    ));
    require(&checks)?;
    certify(Theorem::Expansive, space, map, x0, opts, checks, true, Vec::new())
}

/// Reverse iteration under `d(Tx,Ty) ≥ K[d(x,y) + d(y,x)]` with `K > 2s`.
pub fn expansive_k_solve(space: &Space, map: &Mapping, k: Value, x0: &Point, opts: &SolveOptions) -> Result<FixedPointCertificate> {
    if !map.has_inverse() {
        return Err(Error::NoInverse);
    }
    let plan = &opts.plan;
    let set = hypothesis_points(space, map, plan);
    let two_s = Value::int(2).mul(space.coefficient());
    let mut checks = vec![HypothesisCheck::verdict("k-bound", two_s.lt(&k), format!("K = {k} > 2s = {two_s}"))];
    checks.push(self_map_check(space, map, &set));
    checks.push(inverse_check(space, map, &set, plan.tolerance));
    checks.push(HypothesisCheck::inequality(
        "expansion",
        Evidence::of(&set),
        plan.tolerance,
        pairs(&set),
        pair_labels(space),
        |(x, y)| {
            let rhs = k.mul(space.dist(x, y).add(space.dist(y, x)));
            (rhs, space.dist(&map.forward(x), &map.forward(y)))
        },
    ));
    require(&checks)?;
    certify(Theorem::ExpansiveK, space, map, x0, opts, checks, true, Vec::new())
}
