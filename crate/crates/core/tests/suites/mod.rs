//! Property suites shared by the core property tests and the acceptance run.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use qpbl::axioms::{check_bml, derive_bml};
use qpbl::catalog;
use qpbl::fixedpoint::{chain_bound, orbit};
use qpbl::sequences::{battery, cauchy_equivalence_check, SequenceSpec};
use qpbl::space::Domain;
use qpbl::topology::{ball, dball_sandwich_check, inner_delta};
use qpbl::{Mapping, Point, SamplePlan, Space, Value};

pub const CASES: u32 = 1000;

pub fn spaces() -> Vec<Space> {
    catalog::space_ids().map(|id| catalog::space(id).unwrap()).collect()
}

/// Maps `u ∈ [0,1]` onto the sampled part of the domain.
pub fn point_at(space: &Space, u: f64) -> Point {
    match space.domain() {
        Domain::Finite { labels } => Point::Label(((u * labels.len() as f64) as usize).min(labels.len() - 1)),
        Domain::Interval { lower, upper } => {
            let hi = if upper.is_finite() { *upper } else { lower + 10.0 };
            Point::Real(lower + u * (hi - lower))
        }
        Domain::ExtendedNaturals if u > 0.95 => Point::Infinity,
        Domain::ExtendedNaturals => Point::Nat(1 + (u * 60.0) as u64),
    }
}

pub fn cheap_plan() -> SamplePlan {
    SamplePlan { grid_points_per_axis: 41, random_points: 60, ..SamplePlan::default() }
}

/// Start points shrink toward 0 for the expansive map so 20 steps stay finite.
fn start_scale(map_id: &str) -> f64 {
    if map_id == "map-expansive" {
        1e-9
    } else {
        1.0
    }
}

/// Each catalog map in the space it is studied in.
pub fn home_orbits() -> Vec<(Space, Mapping, f64)> {
    catalog::mapping_ids()
        .map(|mid| {
            let home = catalog::home_space(mid).unwrap();
            (catalog::space(home).unwrap(), catalog::mapping(mid).unwrap(), start_scale(mid))
        })
        .collect()
}

/// Each catalog map in every catalog space sharing its domain.
pub fn all_pairings() -> Vec<(Space, Mapping, f64)> {
    let mut out = Vec::new();
    for mid in catalog::mapping_ids() {
        let map = catalog::mapping(mid).unwrap();
        for space in spaces() {
            let same = match (map.domain(), space.domain()) {
                (Domain::Interval { upper: a, .. }, Domain::Interval { upper: b, .. }) => a == b,
                (a, b) => a == b,
            };
            if same {
                out.push((space, map.clone(), start_scale(mid)));
            }
        }
    }
    out
}

pub fn orbit_from(space: &Space, map: &Mapping, scale: f64, u: f64, m: usize) -> (Point, SequenceSpec) {
    let x0 = match point_at(space, u) {
        Point::Real(x) => Point::Real(x * scale),
        p => p,
    };
    (x0, orbit(map, &x0, m).unwrap())
}

pub fn rel_le(a: Value, b: Value) -> bool {
    a.le_tol(&b, 1e-9 * b.to_f64().abs().max(1.0))
}

pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub outcome: Result<(), String>,
}

/// Seeded so repeated runs draw the same cases.
fn run<S: Strategy>(name: &'static str, strategy: S, test: impl Fn(S::Value) -> Result<(), String>) -> SuiteResult {
    let config = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let outcome = runner.run(&strategy, |v| test(v).map_err(TestCaseError::fail)).map_err(|e| e.to_string());
    SuiteResult { name, cases: CASES as usize, outcome }
}

fn orbit_bounds((u, n, gap): (f64, usize, usize)) -> Result<(), String> {
    let m = (n + gap).min(20).max(n + 1);
    for (space, map, scale) in home_orbits() {
        let (x0, o) = orbit_from(&space, &map, scale, u, m);
        let c = chain_bound(&space, &o, n, m, 1e-9).map_err(|e| e.to_string())?;
        if !(rel_le(c.actual_forward, c.bound_forward) && rel_le(c.actual_backward, c.bound_backward)) {
            return Err(format!("{} {} x0={} n={n} m={m}: {c:?}", space.name(), map.name(), space.label(&x0)));
        }
    }
    Ok(())
}

pub fn chain_bound_suite() -> SuiteResult {
    run("chain_bound on catalog orbits, m <= 20", (0.0..=1.0f64, 0usize..20, 1usize..=20), orbit_bounds)
}

pub fn dball_sandwich_suite() -> SuiteResult {
    run("D-ball sandwich per space", (0.0..=1.0f64, 1i128..=400), |(u, eps_num)| {
        let eps = Value::ratio(eps_num, 100);
        for space in spaces() {
            let x = point_at(&space, u);
            let r = dball_sandwich_check(&space, &x, eps, &cheap_plan()).map_err(|e| e.to_string())?;
            if !r.holds() {
                return Err(format!("{} x={} eps={eps}: {r:?}", space.name(), space.label(&x)));
            }
        }
        Ok(())
    })
}

/// bl1-bl3 for `D = d + dᵀ` at random triples of every space.
pub fn derive_bml_suite() -> SuiteResult {
    let derived: Vec<Space> = spaces().iter().map(|s| derive_bml(s, &SamplePlan::grid_only(11)).unwrap()).collect();
    let triples = run("derive_bml bl1-bl3 on random triples", (0.0..=1.0f64, 0.0..=1.0f64, 0.0..=1.0f64), |(u, v, w)| {
        for d in &derived {
            let (x, y, z) = (point_at(d, u), point_at(d, v), point_at(d, w));
            let e = |a: &Point, b: &Point| d.eval(a, b).unwrap();
            let dxy = e(&x, &y);
            let rhs = d.coefficient().mul(e(&x, &z).add(e(&z, &y)));
            let bl1 = !dxy.is_zero() || x == y;
            if !(bl1 && dxy == e(&y, &x) && dxy.le_tol(&rhs, 1e-9 * rhs.to_f64().max(1.0))) {
                return Err(format!("{}: ({}, {}, {})", d.name(), d.label(&x), d.label(&z), d.label(&y)));
            }
        }
        Ok(())
    });
    if triples.outcome.is_err() {
        return triples;
    }
    let plan = SamplePlan { grid_points_per_axis: 101, random_points: 200, ..SamplePlan::default() };
    for d in &derived {
        let reports = check_bml(d, d.coefficient(), &plan).unwrap();
        if let Some(r) = reports.iter().find(|r| !r.passed) {
            return SuiteResult { outcome: Err(format!("{}: {r:?}", d.name())), ..triples };
        }
    }
    triples
}

/// Picks `y` among the sampled members of `B(x; ε)` and re-checks the
/// returned radius on points the solver did not see.
pub fn inner_delta_contained(u: f64, v: f64, eps_num: i128) -> Result<(), String> {
    let eps = Value::ratio(eps_num, 100);
    let plan = cheap_plan();
    let fresh = SamplePlan { seed: plan.seed ^ 0xabcd, grid_points_per_axis: 997, ..plan.clone() };
    for space in spaces() {
        let x = point_at(&space, u);
        let outer = ball(&space, &x, eps).unwrap();
        let candidates = outer.members_in(&space.eval_set(&plan).points);
        let y = match candidates.len() {
            0 => x,
            k => candidates[((v * k as f64) as usize).min(k - 1)],
        };
        let d = inner_delta(&space, &x, eps, &y, &plan).map_err(|e| format!("{}: {e}", space.name()))?;
        if !Value::ZERO.lt(&d.delta) {
            return Err(format!("{}: nonpositive radius {}", space.name(), d.delta));
        }
        let inner = ball(&space, &y, d.delta).unwrap();
        if let Some(p) = inner.members_in(&space.eval_set(&fresh).points).into_iter().find(|p| !outer.contains(p)) {
            return Err(format!(
                "{}: B({}; {}) has {} outside B({}; {eps})",
                space.name(),
                space.label(&y),
                d.delta,
                space.label(&p),
                space.label(&x)
            ));
        }
    }
    Ok(())
}

pub fn inner_delta_suite() -> SuiteResult {
    run("inner_delta containment per space", (0.0..=1.0f64, 0.0..=1.0f64, 1i128..=300), |(u, v, e)| {
        inner_delta_contained(u, v, e)
    })
}

/// Exhaustive over the battery: six sequences per catalog space.
pub fn cauchy_battery_suite() -> SuiteResult {
    let mut cases = 0;
    let mut outcome = Ok(());
    'spaces: for space in spaces() {
        let seqs = battery(&space, 2000);
        if seqs.len() != 6 {
            outcome = Err(format!("{}: battery has {} sequences", space.name(), seqs.len()));
            break;
        }
        for seq in seqs {
            cases += 1;
            match cauchy_equivalence_check(&space, &seq, 1e-9) {
                Ok(eq) if eq.agree => {}
                Ok(eq) => {
                    outcome = Err(format!("{} {}: {eq:?}", space.name(), seq.name));
                    break 'spaces;
                }
                Err(e) => {
                    outcome = Err(format!("{} {}: {e}", space.name(), seq.name));
                    break 'spaces;
                }
            }
        }
    }
    SuiteResult { name: "Cauchy equivalence on the 6-sequence battery", cases, outcome }
}

pub fn criterion_suites() -> Vec<SuiteResult> {
    vec![chain_bound_suite(), dball_sandwich_suite(), derive_bml_suite(), inner_delta_suite(), cauchy_battery_suite()]
}
