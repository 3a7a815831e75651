//! Convergence and Cauchy diagnostics for finite prefixes of sequences.
//!
//! Limits are estimated from the last tenth of the horizon. None of this
//! decides completeness of a space; it only checks individual sequences.

use serde::Serialize;

use crate::axioms::symmetrized;
use crate::catalog;
use crate::error::{Error, Result};
use crate::scalar::Value;
use crate::space::{Domain, Point, SamplePlan, Space};

/// A materialized sequence `x_k` for `k = first_index ..= first_index + len − 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SequenceSpec {
    pub name: String,
    pub first_index: u64,
    #[serde(skip)]
    pub terms: Vec<Point>,
}

pub const DEFAULT_HORIZON: u64 = 10_000;

impl SequenceSpec {
    /// `x_n = f(n)` for `n = 1..=horizon`.
    pub fn from_fn(name: impl Into<String>, horizon: u64, f: impl Fn(u64) -> Point) -> Self {
        SequenceSpec { name: name.into(), first_index: 1, terms: (1..=horizon).map(f).collect() }
    }

    pub fn constant(p: Point, horizon: u64, label: &str) -> Self {
        SequenceSpec::from_fn(format!("const:{label}"), horizon, |_| p)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Index of the last term.
    pub fn horizon(&self) -> u64 {
        self.first_index + self.terms.len() as u64 - 1
    }

    pub fn term(&self, k: u64) -> Result<Point> {
        k.checked_sub(self.first_index)
            .and_then(|i| self.terms.get(i as usize))
            .copied()
            .ok_or_else(|| Error::IndexError(format!("index {k} outside {}..={}", self.first_index, self.horizon())))
    }

    /// Terms with indices in the last tenth of the horizon (at least one).
    pub fn tail(&self) -> &[Point] {
        let k = (self.horizon() / 10).max(1) as usize;
        let start = self.terms.len().saturating_sub(k + 1);
        &self.terms[start..]
    }

    fn check_domain(&self, space: &Space) -> Result<()> {
        match self.terms.iter().find(|p| !space.domain().contains(p)) {
            Some(p) => Err(Error::PointOutsideDomain(space.label(p))),
            None => Ok(()),
        }
    }

    fn check_horizon(&self) -> Result<()> {
        if self.horizon() < 10 || self.terms.len() < 2 {
            return Err(Error::BadParams(format!("{}: horizon must be at least 10", self.name)));
        }
        Ok(())
    }
}

/// Builds a named sequence:
/// `const:<p>`, `recip` (`lower + w/n`), `alt:<p>:<q>`, `odd`, `evens`, `naturals`
/// or `orbit:<map-id>:<x0>`.
pub fn builtin(space: &Space, text: &str, horizon: u64) -> Result<SequenceSpec> {
    let parts: Vec<&str> = text.split(':').collect();
    let seq = match parts.as_slice() {
        ["const", p] => SequenceSpec::constant(space.parse_point(p)?, horizon, p),
        ["alt", p, q] => {
            let (a, b) = (space.parse_point(p)?, space.parse_point(q)?);
            SequenceSpec::from_fn(text, horizon, move |n| if n % 2 == 1 { a } else { b })
        }
        ["recip"] => match space.domain() {
            Domain::Interval { lower, upper } => {
                let (lo, w) = (*lower, if upper.is_finite() { upper - lower } else { 1.0 });
                SequenceSpec::from_fn(text, horizon, move |n| Point::Real(lo + w / n as f64))
            }
            _ => return Err(Error::BadParams("recip needs an interval domain".into())),
        },
        ["odd"] | ["evens"] | ["naturals"] if *space.domain() == Domain::ExtendedNaturals => {
            let f: fn(u64) -> u64 = match parts[0] {
                "odd" => |n| 2 * n + 1,
                "evens" => |n| 2 * n,
                _ => |n| n,
            };
            SequenceSpec::from_fn(text, horizon, move |n| Point::Nat(f(n)))
        }
        ["orbit", map, x0] => {
            let m = catalog::mapping(map)?;
            let x0 = space.parse_point(x0)?;
            let mut seq = crate::fixedpoint::orbit(&m, &x0, horizon as usize)?;
            seq.name = text.to_string();
            seq
        }
        _ => return Err(Error::BadParams(format!("unknown sequence {text:?}"))),
    };
    seq.check_domain(space)?;
    Ok(seq)
}

/// Six sequences suited to the space's domain: constants, a convergent
/// sequence, an alternating one and a mixture.
pub fn battery(space: &Space, horizon: u64) -> Vec<SequenceSpec> {
    let h = horizon;
    match space.domain() {
        Domain::Finite { labels } => {
            let n = labels.len();
            let p = |i: usize| Point::Label(i % n);
            let last = n - 1;
            vec![
                SequenceSpec::constant(p(0), h, &labels[0]),
                SequenceSpec::constant(p(last), h, &labels[last]),
                SequenceSpec::from_fn("alt:first:second", h, move |k| p((k % 2) as usize)),
                SequenceSpec::from_fn("cycle", h, move |k| p(k as usize % n)),
                SequenceSpec::from_fn("eventually-first", h, move |k| if k < h / 2 { p(last) } else { p(0) }),
                SequenceSpec::from_fn("alt:last:first", h, move |k| if k % 2 == 0 { p(last) } else { p(0) }),
            ]
        }
        Domain::Interval { lower, upper } => {
            let lo = *lower;
            let w = if upper.is_finite() { upper - lower } else { 1.0 };
            let mid = lo + w / 2.0;
            vec![
                SequenceSpec::constant(Point::Real(lo), h, &lo.to_string()),
                SequenceSpec::constant(Point::Real(mid), h, &mid.to_string()),
                SequenceSpec::from_fn("recip", h, move |k| Point::Real(lo + w / k as f64)),
                SequenceSpec::from_fn("recip-squared", h, move |k| Point::Real(lo + w / (k * k) as f64)),
                SequenceSpec::from_fn("alt:lower:mid", h, move |k| Point::Real(if k % 2 == 1 { lo } else { mid })),
                SequenceSpec::from_fn("damped-oscillation", h, move |k| {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    Point::Real(mid + sign * w / (4.0 * k as f64))
                }),
            ]
        }
        Domain::ExtendedNaturals => vec![
            SequenceSpec::constant(Point::Nat(1), h, "1"),
            SequenceSpec::constant(Point::Infinity, h, "inf"),
            SequenceSpec::from_fn("odd", h, |k| Point::Nat(2 * k + 1)),
            SequenceSpec::from_fn("evens", h, |k| Point::Nat(2 * k)),
            SequenceSpec::from_fn("alt:1:inf", h, |k| if k % 2 == 1 { Point::Nat(1) } else { Point::Infinity }),
            SequenceSpec::from_fn("naturals", h, Point::Nat),
        ],
    }
}

fn abs_diff(a: Value, b: Value) -> f64 {
    a.sub(b).to_f64().abs()
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitProfile {
    pub sequence: String,
    pub target: String,
    /// `d(x_N, x)`.
    pub forward_tail: Value,
    /// `d(x, x_N)`.
    pub backward_tail: Value,
    /// `d(x, x)`.
    pub self_distance: Value,
    /// Largest `|d(x_n, x) − d(x, x)|` over the tail.
    pub forward_gap: f64,
    /// Largest `|d(x, x_n) − d(x, x)|` over the tail.
    pub backward_gap: f64,
    pub tail_len: usize,
    pub converged: bool,
    pub tol: f64,
}

/// Whether `x_n → x`: both directed distances to `x` settle at `d(x,x)`
/// over the last tenth of the horizon.
pub fn limit_profile(space: &Space, seq: &SequenceSpec, x: &Point, tol: f64) -> Result<LimitProfile> {
    seq.check_horizon()?;
    let self_distance = space.eval(x, x)?;
    seq.check_domain(space)?;
    let tail = seq.tail();
    let mut fwd: f64 = 0.0;
    let mut bwd: f64 = 0.0;
    for p in tail {
        fwd = fwd.max(abs_diff(space.dist(p, x), self_distance));
        bwd = bwd.max(abs_diff(space.dist(x, p), self_distance));
    }
    let last = seq.terms[seq.len() - 1];
    Ok(LimitProfile {
        sequence: seq.name.clone(),
        target: space.label(x),
        forward_tail: space.dist(&last, x),
        backward_tail: space.dist(x, &last),
        self_distance,
        forward_gap: fwd,
        backward_gap: bwd,
        tail_len: tail.len(),
        converged: fwd <= tol && bwd <= tol,
        tol,
    })
}

/// Every point of the evaluation set (plus the sequence's own tail values)
/// that the sequence converges to.
pub fn find_limits(space: &Space, seq: &SequenceSpec, plan: &SamplePlan, tol: f64) -> Result<Vec<Point>> {
    let mut candidates = space.eval_set(plan).points;
    candidates.extend_from_slice(seq.tail());
    let mut out: Vec<Point> = Vec::new();
    for c in candidates {
        if out.contains(&c) {
            continue;
        }
        if limit_profile(space, seq, &c, tol)?.converged {
            out.push(c);
        }
    }
    out.sort_by(|a, b| a.order(b));
    Ok(out)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TailSpread {
    pub min: f64,
    pub max: f64,
}

impl TailSpread {
    fn new() -> Self {
        TailSpread { min: f64::INFINITY, max: f64::NEG_INFINITY }
    }

    fn push(&mut self, v: f64) {
        self.min = self.min.min(v);
        self.max = self.max.max(v);
    }

    pub fn width(&self) -> f64 {
        self.max - self.min
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.min + self.max)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CauchyProfile {
    pub sequence: String,
    /// Estimate of `lim d(x_n, x_m)` over tail pairs `n ≤ m`.
    pub forward_limit: f64,
    /// Estimate of `lim d(x_m, x_n)` over the same pairs.
    pub backward_limit: f64,
    pub forward: TailSpread,
    pub backward: TailSpread,
    pub pairs: usize,
    pub is_cauchy: bool,
    pub is_zero_cauchy: bool,
    pub tol: f64,
}

/// Double-limit surrogate: all pairs `n ≤ m` in the tail window must give
/// values within `tol` of each other, in each direction separately.
pub fn cauchy_profile(space: &Space, seq: &SequenceSpec, tol: f64) -> Result<CauchyProfile> {
    seq.check_horizon()?;
    seq.check_domain(space)?;
    let tail = seq.tail();
    let mut fwd = TailSpread::new();
    let mut bwd = TailSpread::new();
    let mut pairs = 0;
    for (i, a) in tail.iter().enumerate() {
        for b in &tail[i..] {
            fwd.push(space.dist(a, b).to_f64());
            bwd.push(space.dist(b, a).to_f64());
            pairs += 1;
        }
    }
    let is_cauchy = fwd.width() <= tol && bwd.width() <= tol;
    Ok(CauchyProfile {
        sequence: seq.name.clone(),
        forward_limit: fwd.midpoint(),
        backward_limit: bwd.midpoint(),
        forward: fwd,
        backward: bwd,
        pairs,
        is_cauchy,
        is_zero_cauchy: is_cauchy && fwd.max.abs() <= tol && bwd.max.abs() <= tol,
        tol,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CauchyEquivalence {
    pub qpbl: CauchyProfile,
    /// Profile under `D = d + dᵀ`, judged at tolerance `2·tol` since each
    /// `D` value sums two directed distances.
    pub bml: CauchyProfile,
    pub agree: bool,
}

/// Compares the Cauchy verdict in the space with the verdict under the
/// induced `D`. The axioms are not re-verified here.
pub fn cauchy_equivalence_check(space: &Space, seq: &SequenceSpec, tol: f64) -> Result<CauchyEquivalence> {
    let qpbl = cauchy_profile(space, seq, tol)?;
    let bml = cauchy_profile(&symmetrized(space), seq, 2.0 * tol)?;
    Ok(CauchyEquivalence { agree: qpbl.is_cauchy == bml.is_cauchy, qpbl, bml })
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichBound {
    pub y: String,
    /// `d(x, y)`.
    pub distance: Value,
    /// Tail estimate of `lim d(x_n, y)`.
    pub tail_limit: f64,
    pub lower: f64,
    pub upper: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitSandwich {
    pub sequence: String,
    pub limit: String,
    pub bounds: Vec<SandwichBound>,
    /// Sampled points other than `x` that also meet the zero-limit hypothesis.
    pub other_candidates: Vec<String>,
    /// Candidates farther from `x` than the bound `d(x,z) ≤ s·lim d(x_n,z)`
    /// allows at this tolerance; empty when the limit is unique.
    pub distinct_limits: Vec<String>,
    pub unique: bool,
    pub holds: bool,
    pub tol: f64,
}

fn tail_max(space: &Space, tail: &[Point], f: impl Fn(&Point) -> (Point, Point)) -> f64 {
    tail.iter()
        .map(|p| {
            let (a, b) = f(p);
            space.dist(&a, &b).to_f64()
        })
        .fold(0.0, f64::max)
}

/// Given `d(x_n, x) → 0` and `d(x, x_n) → 0`, checks
/// `d(x,y)/s ≤ lim d(x_n,y) ≤ s·d(x,y)` at each `y`, and that no sampled
/// point resolvably different from `x` is also such a limit.
pub fn limit_sandwich_check(
    space: &Space,
    seq: &SequenceSpec,
    x: &Point,
    ys: &[Point],
    tol: f64,
    plan: &SamplePlan,
) -> Result<LimitSandwich> {
    seq.check_horizon()?;
    seq.check_domain(space)?;
    space.eval(x, x)?;
    let tail = seq.tail();
    let zero_limit = |z: &Point| {
        tail_max(space, tail, |p| (*p, *z)) <= tol && tail_max(space, tail, |p| (*z, *p)) <= tol
    };
    if !zero_limit(x) {
        return Err(Error::HypothesisNotMet(format!(
            "d(x_n, {0}) and d({0}, x_n) do not both tend to 0 within {tol}",
            space.label(x)
        )));
    }
    let s = space.coefficient().to_f64();
    let mut bounds = Vec::new();
    for y in ys {
        let distance = space.eval(x, y)?;
        let mut spread = TailSpread::new();
        for p in tail {
            spread.push(space.dist(p, y).to_f64());
        }
        let (lower, upper) = (distance.to_f64() / s, s * distance.to_f64());
        let lim = spread.midpoint();
        bounds.push(SandwichBound {
            y: space.label(y),
            distance,
            tail_limit: lim,
            lower,
            upper,
            holds: lim >= lower - tol && lim <= upper + tol,
        });
    }
    let mut other = Vec::new();
    let mut distinct = Vec::new();
    for z in space.eval_set(plan).points {
        if z == *x || !zero_limit(&z) {
            continue;
        }
        other.push(space.label(&z));
        if space.dist(x, &z).to_f64() > s * tol + tol {
            distinct.push(space.label(&z));
        }
    }
    let unique = distinct.is_empty();
    Ok(LimitSandwich {
        sequence: seq.name.clone(),
        limit: space.label(x),
        holds: unique && bounds.iter().all(|b| b.holds),
        bounds,
        other_candidates: other,
        distinct_limits: distinct,
        unique,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_covers_last_tenth() {
        let seq = SequenceSpec::from_fn("n", 100, |n| Point::Nat(n));
        assert_eq!(seq.tail().len(), 11);
        assert_eq!(seq.tail()[0], Point::Nat(90));
        assert_eq!(seq.term(100).unwrap(), Point::Nat(100));
        assert_eq!(seq.term(0).unwrap_err().code(), "IndexError");
    }

    #[test]
    fn short_horizon_is_rejected() {
        let s = catalog::space("remark1").unwrap();
        let seq = SequenceSpec::constant(Point::Label(1), 5, "1");
        assert_eq!(limit_profile(&s, &seq, &Point::Label(1), 1e-12).unwrap_err().code(), "BadParams");
    }

    #[test]
    fn builtin_names_parse() {
        let s = catalog::space("ex2.2").unwrap();
        assert_eq!(builtin(&s, "recip", 20).unwrap().term(4).unwrap(), Point::Real(0.25));
        assert_eq!(builtin(&s, "alt:0:1", 20).unwrap().term(2).unwrap(), Point::Real(1.0));
        assert!(builtin(&s, "const:2", 20).is_err());
        assert!(builtin(&s, "odd", 20).is_err());
        let orbit = builtin(&s, "orbit:map-half:1", 20).unwrap();
        assert_eq!(orbit.term(2).unwrap(), Point::Real(0.25));
    }
}
