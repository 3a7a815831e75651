//! Scripted replays of the worked examples, each check tagged with where its
//! expected value comes from.

use std::fmt::Display;

use serde::Serialize;
use serde_json::{Map, Value as Json};

use crate::axioms::{all_passed, check_axioms, check_qpb1, classify, derive_bml, is_symmetric, minimal_coefficient};
use crate::catalog;
use crate::error::{Error, Result};
use crate::fixedpoint::{
    chain_bound, decay_bound, expansive_k_solve, lambda_solve, orbit, phi_contraction_solve, phi_psi_solve,
    phi_psi_table, weight_witness, ScalarFunction, SolveOptions,
};
use crate::scalar::Value;
use crate::sequences::{cauchy_equivalence_check, cauchy_profile, limit_profile, limit_sandwich_check, SequenceSpec};
use crate::space::{Point, SamplePlan, Space};
use crate::topology::{ball, dball_sandwich_check, enumerate_topology, inner_delta, separation_class};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Value stated in the worked example.
    PublishedExample,
    /// Value computed here by other means (closed form, exhaustive oracle).
    IndependentComputation,
    /// Holds by construction or definition.
    Identity,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub provenance: Provenance,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorInfo {
    pub code: String,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Reproduction {
    pub id: &'static str,
    pub title: &'static str,
    pub reference: &'static str,
    pub status: Status,
    pub checks: Vec<Check>,
    pub payload: Json,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

/// Collects checks and payload fields while an example runs.
pub struct Run<'a> {
    plan: &'a SamplePlan,
    checks: Vec<Check>,
    payload: Map<String, Json>,
}

impl Run<'_> {
    fn check(&mut self, name: &str, provenance: Provenance, expected: impl Display, actual: impl Display, passed: bool) {
        self.checks.push(Check {
            name: name.to_string(),
            provenance,
            expected: expected.to_string(),
            actual: actual.to_string(),
            passed,
        });
    }

    fn equal<T: Display + PartialEq>(&mut self, name: &str, provenance: Provenance, expected: T, actual: T) {
        let ok = expected == actual;
        self.check(name, provenance, expected, actual, ok);
    }

    fn holds(&mut self, name: &str, provenance: Provenance, passed: bool) {
        self.check(name, provenance, true, passed, passed);
    }

    fn record(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        self.payload.insert(key.to_string(), serde_json::to_value(value)?);
        Ok(())
    }
}

pub struct Example {
    pub id: &'static str,
    pub title: &'static str,
    pub reference: &'static str,
    run: fn(&mut Run) -> Result<()>,
}

use Provenance::{Identity, IndependentComputation as Computed, PublishedExample as Published};

macro_rules! examples {
    ($($id:literal, $reference:literal, $title:literal => $run:ident;)*) => {
        pub const REGISTRY: &[Example] = &[$(Example { id: $id, title: $title, reference: $reference, run: $run }),*];
    };
}

examples! {
    "ex2.2-axioms", "Example 2.2", "(x+y)^2 off the diagonal is a symmetric qpbl space with s = 2" => ex2_2_axioms;
    "ex2.2-min-s", "Example 2.2", "grid lower bound on the least coefficient approaches 2" => ex2_2_min_s;
    "ex2.3-axioms", "Example 2.3", "max{x,y} + |x-y| satisfies the axioms with s = 1" => ex2_3_axioms;
    "ex2.4-axioms", "Example 2.4", "|x-y| + x is an asymmetric qpbl space with s = 1" => ex2_4_axioms;
    "ex2.5-axioms", "Example 2.5", "a metric raised to q = 2 gives s = 2^(q-1)" => ex2_5_axioms;
    "sec2-counterexample", "counterexample after the symmetric-space definition", "qpbl with s = 1 but neither qpb nor symmetric" => sec2_counterexample;
    "remark1-table", "Remark 1", "table axioms, least coefficient and the induced D" => remark1_table;
    "remark1-topology", "Remark 1", "open sets {{}, {0}, X}; the topology is not T0" => remark1_topology;
    "remark1-limits", "Remark 1", "the constant sequence 1 converges to both 1 and 2" => remark1_limits;
    "ex3.9-ball", "Example 3.9", "B(0; 1) = [0, 1/2)" => ex3_9_ball;
    "ex3.10-ball", "Example 3.10", "B(0; 1/2) = [0, 1/sqrt 2)" => ex3_10_ball;
    "ex3.14-values", "Example 3.14", "distance values on N and +inf" => ex3_14_values;
    "ex3.14-discontinuity", "Example 3.14", "the distance is not continuous in its first variable" => ex3_14_discontinuity;
    "ex5.6-series", "Example 5.6", "weight function 3x^2 for T x = x/2" => ex5_6_series;
    "ex5.10-values", "Example 5.10", "table value, mapping and orbit" => ex5_10_values;
    "ex5.10-min-s", "Example 5.10", "least coefficient 8/7; s = 1 fails" => ex5_10_min_s;
    "ex5.10-inequalities", "Example 5.10", "the nine (phi, psi) contraction inequalities" => ex5_10_inequalities;
    "ex5.10-fixed-point", "Example 5.10", "0 is the unique fixed point" => ex5_10_fixed_point;
    "ex5.10-chain-bound", "Example 5.10", "chained triangle bound along the orbit of 2" => ex5_10_chain_bound;
    "ex5.15-fixed-point", "Example 5.15", "expansive map 3x sqrt(1+x^2) has the unique fixed point 0" => ex5_15_fixed_point;
    "contraction-demo", "contraction demo", "phi- and lambda-contraction solves for T x = x/4" => contraction_demo;
    "inner-ball-demo", "open-ball lemma", "nested ball radii on the Remark 1 table and Example 2.2" => inner_ball_demo;
    "dball-sandwich-demo", "D-ball lemma", "B(x; e/2) in B_D(x; e) in B(x; s[e + 2d(x,x)])" => dball_sandwich_demo;
    "limit-sandwich-demo", "limit lemma", "d(x,y)/s <= lim d(x_n,y) <= s d(x,y) for x_n = 1/n" => limit_sandwich_demo;
}

pub fn lookup(id: &str) -> Option<&'static Example> {
    REGISTRY.iter().find(|e| e.id == id)
}

pub fn reproduce(id: &str, plan: &SamplePlan) -> Result<Reproduction> {
    let example = lookup(id).ok_or_else(|| Error::UnknownExample(id.to_string()))?;
    Ok(run_example(example, plan))
}

pub fn reproduce_all(plan: &SamplePlan) -> Vec<Reproduction> {
    REGISTRY.iter().map(|e| run_example(e, plan)).collect()
}

fn run_example(example: &Example, plan: &SamplePlan) -> Reproduction {
    let mut run = Run { plan, checks: Vec::new(), payload: Map::new() };
    let outcome = (example.run)(&mut run);
    let error = outcome.err().map(|e| ErrorInfo { code: e.code().to_string(), message: e.to_string() });
    let passed = error.is_none() && !run.checks.is_empty() && run.checks.iter().all(|c| c.passed);
    Reproduction {
        id: example.id,
        title: example.title,
        reference: example.reference,
        status: if passed { Status::Pass } else { Status::Fail },
        checks: run.checks,
        payload: Json::Object(run.payload),
        error,
    }
}

fn lbl(i: usize) -> Point {
    Point::Label(i)
}

fn real(x: f64) -> Point {
    Point::Real(x)
}

fn axioms_at_claimed_s(run: &mut Run, space: &Space) -> Result<()> {
    let s = space.coefficient();
    let reports = check_axioms(space, s, run.plan)?;
    let ok = all_passed(&reports);
    run.check("axioms-at-claimed-s", Published, format!("QPbl1-4 hold at s = {s}"), ok, ok);
    run.record("axioms", &reports)
}

fn ex2_2_axioms(run: &mut Run) -> Result<()> {
    let s = catalog::space("ex2.2")?;
    run.equal("d(0.3,0.3)", Published, Value::ZERO, s.eval(&real(0.3), &real(0.3))?);
    axioms_at_claimed_s(run, &s)?;
    let c = classify(&s, run.plan);
    run.holds("qpbl", Published, c.quasi_partial_b_metric_like);
    run.holds("symmetric", Published, c.symmetric);
    run.record("classification", c)
}

fn ex2_2_min_s(run: &mut Run) -> Result<()> {
    let s = catalog::space("ex2.2")?;
    let b = minimal_coefficient(&s, &SamplePlan::grid_only(101))?;
    let v = b.value.to_f64();
    run.check("grid-lower-bound", Published, "in (1.9, 2]", v, v > 1.9 && v <= 2.0);
    run.record("bound", b)
}

fn ex2_3_axioms(run: &mut Run) -> Result<()> {
    let s = catalog::space("ex2.3")?;
    run.equal("d(0,0)", Published, Value::ZERO, s.eval(&real(0.0), &real(0.0))?);
    axioms_at_claimed_s(run, &s)
}

fn ex2_4_axioms(run: &mut Run) -> Result<()> {
    let s = catalog::space("ex2.4")?;
    axioms_at_claimed_s(run, &s)?;
    let sym = is_symmetric(&s, run.plan);
    run.holds("asymmetric", Published, !sym.passed);
    let d = derive_bml(&s, run.plan)?;
    let (x, y) = (real(0.0), real(1.0));
    run.equal("D(0,1)", Identity, s.eval(&x, &y)?.add(s.eval(&y, &x)?), d.eval(&x, &y)?);
    run.record("symmetry", sym)
}

fn ex2_5_axioms(run: &mut Run) -> Result<()> {
    let s = catalog::space("ex2.5")?;
    run.equal("d(0,1)", Published, Value::ONE, s.eval(&real(0.0), &real(1.0))?);
    run.equal("claimed s", Published, Value::int(2), s.coefficient());
    axioms_at_claimed_s(run, &s)
}

fn sec2_counterexample(run: &mut Run) -> Result<()> {
    let s = catalog::space("sec2-counterexample")?;
    axioms_at_claimed_s(run, &s)?;
    let qpb1 = check_qpb1(&s, run.plan);
    run.check("qpb1 fails", Published, "fail at (1, 2)", format!("{:?}", qpb1.witness), !qpb1.passed && qpb1.witness == Some(vec!["1".into(), "2".into()]));
    let sym = is_symmetric(&s, run.plan);
    let (a, b) = (s.eval(&lbl(0), &lbl(1))?, s.eval(&lbl(1), &lbl(0))?);
    run.check("asymmetric at (0,1)", Published, "d(0,1) = 1, d(1,0) = 2", format!("d(0,1) = {a}, d(1,0) = {b}"), !sym.passed && a == Value::ONE && b == Value::int(2));
    let m = minimal_coefficient(&s, run.plan)?;
    run.equal("least s", Published, Value::ONE, m.value);
    let c = classify(&s, run.plan);
    run.holds("not qpb", Published, c.quasi_partial_b_metric_like && !c.quasi_partial_b_metric);
    run.record("classification", c)
}

fn remark1_table(run: &mut Run) -> Result<()> {
    let s = catalog::space("remark1")?;
    axioms_at_claimed_s(run, &s)?;
    run.equal("least s", Computed, Value::ONE, minimal_coefficient(&s, run.plan)?.value);
    let d = derive_bml(&s, run.plan)?;
    run.equal("D(0,1)", Published, Value::int(2), d.eval(&lbl(0), &lbl(1))?);
    run.record("classification", classify(&s, run.plan))
}

fn remark1_topology(run: &mut Run) -> Result<()> {
    let s = catalog::space("remark1")?;
    let top = enumerate_topology(&s)?;
    let sets = top.open_set_labels();
    let expected: Vec<Vec<String>> = vec![vec![], vec!["0".into()], vec!["0".into(), "1".into(), "2".into()]];
    run.check("open sets", Published, format!("{expected:?}"), format!("{sets:?}"), sets == expected);
    let sep = separation_class(&top);
    let witness = sep.witness.clone();
    run.check(
        "not T0",
        Published,
        "not-T0 with witness (1, 2)",
        match &witness {
            Some((a, b)) => format!("{} with witness ({a}, {b})", serde_json::to_value(sep.class)?.as_str().unwrap_or("?")),
            None => format!("{:?}", sep.class),
        },
        !sep.t0 && witness == Some(("1".into(), "2".into())),
    );
    run.record("topology", &top)?;
    run.record("separation", sep)
}

fn remark1_limits(run: &mut Run) -> Result<()> {
    let s = catalog::space("remark1")?;
    let seq = SequenceSpec::constant(lbl(1), 100, "1");
    let mut profiles = Vec::new();
    for (target, expected) in [(1, true), (2, true), (0, false)] {
        let p = limit_profile(&s, &seq, &lbl(target), 1e-12)?;
        let prov = if expected { Published } else { Computed };
        run.equal(&format!("converges to {target}"), prov, expected, p.converged);
        profiles.push(p);
    }
    run.record("profiles", profiles)
}

fn membership(run: &mut Run, id: &str, eps: Value, inside: &[f64], outside: &[f64]) -> Result<()> {
    let s = catalog::space(id)?;
    let b = ball(&s, &real(0.0), eps)?;
    for &y in inside {
        run.equal(&format!("{y} in ball"), Published, true, b.contains(&real(y)));
    }
    for &y in outside {
        run.equal(&format!("{y} in ball"), Published, false, b.contains(&real(y)));
    }
    run.record("bound", b.bound())
}

fn ex3_9_ball(run: &mut Run) -> Result<()> {
    membership(run, "ex3.9", Value::ONE, &[0.0, 0.49, 0.499999], &[0.5, 0.75])
}

// probes straddle 1/sqrt(2)
#[allow(clippy::approx_constant)]
fn ex3_10_ball(run: &mut Run) -> Result<()> {
    membership(run, "ex3.10", Value::ratio(1, 2), &[0.0, 0.707, 0.7071], &[0.70711, 0.7072])
}

fn ex3_14_values(run: &mut Run) -> Result<()> {
    let s = catalog::space("ex3.14")?;
    run.equal("d(inf,inf)", Published, Value::ZERO, s.eval(&Point::Infinity, &Point::Infinity)?);
    run.equal("d(3,inf)", Published, Value::ratio(1, 3), s.eval(&Point::Nat(3), &Point::Infinity)?);
    run.equal("d(inf,3)", Published, Value::ratio(1, 6), s.eval(&Point::Infinity, &Point::Nat(3))?);
    run.equal("d(2,2)", Published, Value::ONE, s.eval(&Point::Nat(2), &Point::Nat(2))?);
    axioms_at_claimed_s(run, &s)
}

fn ex3_14_discontinuity(run: &mut Run) -> Result<()> {
    let s = catalog::space("ex3.14")?;
    let x = |n: u64| Point::Nat(2 * n + 1);
    let two = Point::Nat(2);
    let three = Point::Nat(3);
    let d22 = s.eval(&two, &two)?;
    let mut constant = true;
    for n in 1..=10_000 {
        constant &= s.eval(&x(n), &two)? == d22;
    }
    run.check("d(x_n,2) = d(2,2) for n <= 10^4", Published, d22, constant, constant);
    let far = s.eval(&x(10_000), &three)?;
    run.check("d(x_n,3) -> 1/3", Published, "1/3 within 1e-3", far, (far.to_f64() - 1.0 / 3.0).abs() < 1e-3);
    run.equal("d(2,3)", Published, Value::ONE, s.eval(&two, &three)?);
    run.record("d(x_10000, 3)", far)
}

fn ex5_6_series(run: &mut Run) -> Result<()> {
    let s = catalog::space("ex2.2")?;
    let t = catalog::mapping("map-half")?;
    run.equal("T(1)", Published, "0.5".to_string(), s.label(&t.forward(&real(1.0))));
    let mut witnesses = Vec::new();
    for x in [0.1, 0.5, 1.0] {
        let w = weight_witness(&s, &t, &real(x), 200)?;
        let expected = 3.0 * x * x;
        run.check(&format!("phi({x})"), Published, expected, w.series_value, (w.series_value - expected).abs() <= 1e-9);
        run.holds(&format!("telescoping at {x}"), Identity, w.inequality_verified);
        witnesses.push(serde_json::json!({
            "x0": x,
            "series_value": w.series_value,
            "ratio": w.ratio,
            "telescoping_error": w.telescoping_error,
        }));
    }
    run.record("witnesses", witnesses)
}

fn ex5_10_values(run: &mut Run) -> Result<()> {
    let s = catalog::space("ex5.10")?;
    let t = catalog::mapping("map-ex5.10")?;
    run.equal("d(2,1)", Published, Value::int(8), s.eval(&lbl(2), &lbl(1))?);
    run.equal("T2", Published, "1".to_string(), s.label(&t.forward(&lbl(2))));
    let o = orbit(&t, &lbl(2), 2)?;
    let labels = s.labels(&o.terms).join(", ");
    run.equal("orbit of 2", Published, "2, 1, 0".to_string(), labels);
    Ok(())
}

fn ex5_10_min_s(run: &mut Run) -> Result<()> {
    let s = catalog::space("ex5.10")?;
    let b = minimal_coefficient(&s, run.plan)?;
    run.equal("least s", Published, Value::ratio(8, 7), b.value);
    let at_one = check_axioms(&s, Value::ONE, run.plan)?;
    let q4 = &at_one[3];
    run.check(
        "QPbl4 fails at s = 1",
        Computed,
        "fail at (2, 0, 1) by 1",
        format!("{:?} by {}", q4.witness, q4.worst_violation),
        !q4.passed && q4.witness == Some(vec!["2".into(), "0".into(), "1".into()]) && q4.worst_violation == Value::ONE,
    );
    run.record("bound", b)
}

fn phi_psi() -> Result<(ScalarFunction, ScalarFunction)> {
    Ok(("linear:1/2".parse()?, "capped-quadratic:1/4:1".parse()?))
}

fn ex5_10_inequalities(run: &mut Run) -> Result<()> {
    let s = catalog::space("ex5.10")?;
    let t = catalog::mapping("map-ex5.10")?;
    let (phi, psi) = phi_psi()?;
    let rows = phi_psi_table(&s, &t, &phi, &psi, run.plan);
    let expected = [(0, 1), (5, 8), (19, 8), (5, 8), (3, 16), (31, 16), (31, 16), (13, 4), (5, 8)];
    run.equal("rows", Published, expected.len(), rows.len());
    for (row, &(p, q)) in rows.iter().zip(&expected) {
        let want = Value::ratio(p, q);
        run.check(
            &format!("({},{})", row.x, row.y),
            Published,
            format!("{} <= {want}", row.lhs),
            format!("{} <= {}", row.lhs, row.rhs),
            row.holds && row.rhs.is_exact() && row.rhs == want,
        );
    }
    run.record("rows", rows)
}

fn ex5_10_fixed_point(run: &mut Run) -> Result<()> {
    let s = catalog::space("ex5.10")?;
    let t = catalog::mapping("map-ex5.10")?;
    let (phi, psi) = phi_psi()?;
    let opts = SolveOptions { plan: run.plan.clone(), ..SolveOptions::default() };
    let c = phi_psi_solve(&s, &t, &phi, &psi, &lbl(2), &opts)?;
    run.equal("fixed point", Published, "0".to_string(), c.point.clone());
    run.check("iterations", Computed, "<= 3", c.iterations, c.iterations <= 3);
    run.holds("certificate valid", Identity, c.is_valid());
    run.holds("unique among restarts", Published, c.unique_among_restarts);
    run.record("certificate", c)
}

fn ex5_10_chain_bound(run: &mut Run) -> Result<()> {
    let s = catalog::space("ex5.10")?;
    let o = orbit(&catalog::mapping("map-ex5.10")?, &lbl(2), 2)?;
    let c = chain_bound(&s, &o, 0, 2, 0.0)?;
    run.equal("d(x_2, x_0)", Computed, Value::int(6), c.actual_backward);
    run.equal("backward bound", Computed, Value::int(5).add(Value::ratio(16, 7)), c.bound_backward);
    run.holds("bound holds", Identity, c.holds);
    run.record("chain", c)
}

fn ex5_15_fixed_point(run: &mut Run) -> Result<()> {
    let s = catalog::space("ex2.2:upper=inf")?;
    let t = catalog::mapping("map-expansive")?;
    let lhs = s.eval(&t.forward(&real(1.0)), &t.forward(&real(2.0)))?.to_f64();
    let closed = (3.0 * 2f64.sqrt() + 6.0 * 5f64.sqrt()).powi(2);
    run.check("d(T1,T2)", Computed, closed, lhs, (lhs - closed).abs() < 1e-9);
    let plan = SamplePlan { grid_points_per_axis: 50, random_points: 0, ..run.plan.clone() };
    let opts = SolveOptions { plan, ..SolveOptions::default() };
    let c = expansive_k_solve(&s, &t, Value::ratio(9, 2), &real(1.0), &opts)?;
    let expansion = c.hypothesis_report.iter().find(|h| h.name == "expansion");
    run.check(
        "expansion on 50x50 grid",
        Published,
        "2500 pairs pass",
        expansion.map_or("missing".into(), |h| format!("{} pairs, passed = {}", h.checked, h.passed)),
        expansion.is_some_and(|h| h.passed && h.checked == 2500),
    );
    let z = c.point_value.as_real().unwrap_or(f64::NAN);
    run.check("fixed point", Published, "0", z, z.abs() < 1e-4);
    let (rf, rb) = (c.residual_forward.to_f64(), c.residual_backward.to_f64());
    run.check("residuals", Computed, "< 1e-8", format!("{rf:e}, {rb:e}"), rf < 1e-8 && rb < 1e-8);
    run.check("inverse evaluations", Computed, "< 200", c.inverse_evaluations, c.inverse_evaluations < 200);
    run.holds("unique among restarts", Published, c.unique_among_restarts);
    run.record("certificate", c)
}

fn contraction_demo(run: &mut Run) -> Result<()> {
    let s = catalog::space("ex2.2")?;
    let t = catalog::mapping("map-quarter")?;
    let opts = SolveOptions { plan: run.plan.clone(), ..SolveOptions::default() };
    let phi: ScalarFunction = "linear:1/16".parse()?;
    let c = phi_contraction_solve(&s, &t, &phi, &real(1.0), &opts)?;
    run.holds("phi certificate valid", Identity, c.is_valid());
    run.check("phi fixed point", Computed, "0", &c.point, c.point_value.as_real().is_some_and(|x| x < 1e-5));
    let l = lambda_solve(&s, &t, Value::ratio(1, 16), &real(1.0), &opts)?;
    run.holds("lambda certificate valid", Identity, l.is_valid());
    let o = orbit(&t, &real(1.0), 12)?;
    let d = decay_bound(&s, &o, Value::ratio(1, 8), 2, 10, 1e-9)?;
    run.holds("decay bound", Identity, d.holds);
    run.record("phi", c)?;
    run.record("lambda", l)?;
    run.record("decay", d)
}

fn inner_ball_demo(run: &mut Run) -> Result<()> {
    let r1 = catalog::space("remark1")?;
    let d = inner_delta(&r1, &lbl(0), Value::int(2), &lbl(1), run.plan)?;
    let outer = ball(&r1, &lbl(0), Value::int(2))?;
    let inner = ball(&r1, &lbl(1), d.delta)?;
    let contained = inner.explicit_set().unwrap_or_default().iter().all(|p| outer.contains(p));
    run.holds("remark1 B(1; delta) in B(0; 2)", Identity, contained);
    let s = catalog::space("ex2.2")?;
    let e = inner_delta(&s, &real(0.0), Value::ratio(1, 2), &real(0.5), run.plan)?;
    run.check("ex2.2 delta > 0", Identity, "> 0", e.delta, Value::ZERO.lt(&e.delta));
    run.record("remark1", d)?;
    run.record("ex2.2", e)
}

fn dball_sandwich_demo(run: &mut Run) -> Result<()> {
    let mut reports = Vec::new();
    for (id, x, eps) in [("ex2.2", real(0.0), Value::ONE), ("remark1", lbl(0), Value::ONE), ("ex5.10", lbl(1), Value::int(3))] {
        let s = catalog::space(id)?;
        let r = dball_sandwich_check(&s, &x, eps, run.plan)?;
        run.holds(&format!("{id} at {}", s.label(&x)), Identity, r.holds());
        reports.push(r);
    }
    run.record("reports", reports)
}

fn limit_sandwich_demo(run: &mut Run) -> Result<()> {
    let s = catalog::space("ex2.2")?;
    let seq = SequenceSpec::from_fn("recip", 10_000, |n| real(1.0 / n as f64));
    let sw = limit_sandwich_check(&s, &seq, &real(0.0), &[real(0.5), real(1.0)], 1e-6, run.plan)?;
    run.holds("bounds hold", Identity, sw.holds);
    run.holds("unique limit", Computed, sw.unique);
    let c = cauchy_profile(&s, &seq, 1e-6)?;
    run.holds("0-Cauchy", Computed, c.is_zero_cauchy);
    run.holds("Cauchy under D agrees", Identity, cauchy_equivalence_check(&s, &seq, 1e-6)?.agree);
    run.record("sandwich", sw)
}
