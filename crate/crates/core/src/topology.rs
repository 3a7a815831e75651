//! Open balls, nested-ball radii, finite topologies and the D-ball sandwich.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::axioms::Evidence;
use crate::error::{Error, Result};
use crate::scalar::Value;
use crate::space::{Domain, EvalSet, Point, SamplePlan, Space};

/// `B(x₀; ε) = { y : d(x₀,y) < d(x₀,x₀) + ε and d(y,x₀) < d(x₀,x₀) + ε }`.
///
/// Membership is decided with strict comparisons and no tolerance.
#[derive(Clone, Debug)]
pub struct Ball<'a> {
    space: &'a Space,
    pub center: Point,
    pub radius: Value,
    bound: Value,
}

impl<'a> Ball<'a> {
    pub fn contains(&self, y: &Point) -> bool {
        self.space.domain().contains(y)
            && self.space.dist(&self.center, y).lt(&self.bound)
            && self.space.dist(y, &self.center).lt(&self.bound)
    }

    /// `d(x₀,x₀) + ε`, the strict upper bound on both directed distances.
    pub fn bound(&self) -> Value {
        self.bound
    }

    /// Every member, for finite domains.
    pub fn explicit_set(&self) -> Option<Vec<Point>> {
        let pts = self.space.domain().finite_points()?;
        Some(pts.into_iter().filter(|p| self.contains(p)).collect())
    }

    pub fn members_in(&self, pts: &[Point]) -> Vec<Point> {
        pts.iter().filter(|p| self.contains(p)).copied().collect()
    }
}

pub fn ball<'a>(space: &'a Space, x0: &Point, eps: Value) -> Result<Ball<'a>> {
    if !Value::ZERO.lt(&eps) {
        return Err(Error::NonpositiveRadius(eps.to_string()));
    }
    let self_dist = space.eval(x0, x0)?;
    Ok(Ball { space, center: *x0, radius: eps, bound: self_dist.add(eps) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaCase {
    /// `y = x`.
    Center,
    /// `d(x,x) = d(x,y) = d(y,y)`.
    EqualDistances,
    /// Everything else, including ties not covered by the first case.
    General,
}

#[derive(Clone, Debug, Serialize)]
pub struct InnerDelta {
    /// Radius returned to the caller; containment was verified for it.
    pub delta: Value,
    /// Radius given by the case analysis before any verification.
    pub formula_delta: Value,
    pub case: DeltaCase,
    /// Least index found by the search, absent when none was needed.
    pub index: Option<u64>,
    /// The index set was empty and the `ε/(2s)` fallback was used.
    pub fallback: bool,
    /// Radius certified by QPbl4 alone, when positive. `delta` never exceeds it.
    pub triangle_delta: Option<Value>,
    /// The starting radius failed containment and was halved into `delta`.
    pub refined: bool,
    pub halvings: u32,
    pub checked: usize,
    pub evidence: Evidence,
}

/// Upper limit of the least-index searches.
pub const INDEX_SEARCH_CAP: u64 = 1_000_000;
/// How many times a failing radius is halved before giving up.
pub const MAX_HALVINGS: u32 = 200;
/// Evenly spaced points over the range and around `y` on interval domains.
const LINE_POINTS: usize = 2000;
const EDGE_BISECTIONS: usize = 60;

/// Least `n ≥ 1` with `pred(n)`, or `None` if the search reaches the cap.
fn least_index(mut pred: impl FnMut(u64) -> bool) -> Option<u64> {
    (1..=INDEX_SEARCH_CAP).find(|&n| pred(n))
}

/// A radius `δ > 0` with `B(y; δ) ⊆ B(x; ε)` for `y ∈ B(x; ε)`.
///
/// The candidate comes from the constructive case analysis, capped by the
/// QPbl4 radius when that one is positive; it is then checked against every
/// point of the evaluation set (plus `x` and `y`) and, on intervals, at the
/// edges of the inner ball located by bisection.
/// If the check fails the radius is halved until it passes, and
/// `ContainmentFailed` is returned when no halving does.
pub fn inner_delta(space: &Space, x: &Point, eps: Value, y: &Point, plan: &SamplePlan) -> Result<InnerDelta> {
    let outer = ball(space, x, eps)?;
    if !outer.contains(y) {
        return Err(Error::NotInBall { center: space.label(x), y: space.label(y) });
    }
    let s = space.coefficient();
    let s_is_one = s == Value::ONE;
    let two = Value::int(2);
    let (dxx, dxy, dyx, dyy) = (space.dist(x, x), space.dist(x, y), space.dist(y, x), space.dist(y, y));
    let fallback_delta = eps.div(two.mul(s));

    let (case, formula, index, fallback) = if x == y {
        (DeltaCase::Center, eps, None, false)
    } else if dxx == dxy && dxy == dyy {
        if s_is_one {
            (DeltaCase::EqualDistances, eps, None, false)
        } else {
            // least n with d(x,x) > ε / (2 s^{n+1} (2s − 1))
            let k = two.mul(s).sub(Value::ONE);
            match least_index(|n| eps.div(two.mul(s.powi(n as u32 + 1)).mul(k)).lt(&dxx)) {
                Some(m) => (DeltaCase::EqualDistances, eps.div(two.mul(s.powi(m as u32 + 1))), Some(m), false),
                None => (DeltaCase::EqualDistances, fallback_delta, None, true),
            }
        }
    } else if s_is_one {
        // least n with d(x,y) + d(y,x) − d(x,x) > ε / 2^{n+2}
        let q = dxy.add(dyx).sub(dxx);
        match least_index(|n| eps.div(two.powi(n as u32 + 2)).lt(&q)) {
            Some(p) => (DeltaCase::General, eps.div(two.powi(p as u32 + 1)), Some(p), false),
            None => (DeltaCase::General, fallback_delta, None, true),
        }
    } else {
        // least n with d(x,y) + d(y,x) − d(x,x)/s > ε / (2 s^{n+2})
        let q = dxy.add(dyx).sub(dxx.div(s));
        match least_index(|n| eps.div(two.mul(s.powi(n as u32 + 2))).lt(&q)) {
            Some(r) => (DeltaCase::General, eps.div(two.mul(s.powi(r as u32 + 1))), Some(r), false),
            None => (DeltaCase::General, fallback_delta, None, true),
        }
    };

    // QPbl4 through y: z ∈ B(y; δ) gives d(x,z) < s[d(x,y) + d(y,y) + δ] − d(y,y),
    // and likewise for d(z,x), so this δ needs no sampling when positive.
    let bound = |dist: Value| dxx.add(eps).sub(s.mul(dist)).sub(s.sub(Value::ONE).mul(dyy)).div(s);
    let triangle = bound(dxy).min(bound(dyx));
    let triangle_delta = Value::ZERO.lt(&triangle).then_some(triangle);
    let start = match triangle_delta {
        Some(t) if t.lt(&formula) => t,
        _ => formula,
    };

    let mut set = space.eval_set(plan);
    set.points.push(*x);
    set.points.push(*y);
    let mut line = Vec::new();
    if let (Some(c), Domain::Interval { lower, upper }) = (y.as_real(), space.domain()) {
        let (lo, hi) = plan.interval_range(*lower, *upper);
        let r = start.to_f64().min(1.0);
        line = (0..=LINE_POINTS)
            .map(|i| lo + (hi - lo) * i as f64 / LINE_POINTS as f64)
            .chain((0..=LINE_POINTS).map(|i| c - r + 2.0 * r * i as f64 / LINE_POINTS as f64))
            .chain(set.points.iter().filter_map(Point::as_real))
            .filter(|t| (*lower..=*upper).contains(t))
            .collect();
        line.sort_by(f64::total_cmp);
        line.dedup();
    }
    let contained = |delta: Value| -> Result<bool> {
        let inner = ball(space, y, delta)?;
        if !set.points.iter().all(|z| !inner.contains(z) || outer.contains(z)) {
            return Ok(false);
        }
        // On a line a too-large radius shows first just inside the inner
        // ball's edge, so bisect to each edge between neighbouring points.
        let inside = |t: f64| inner.contains(&Point::Real(t));
        for w in line.windows(2) {
            let (mut a, mut b) = (w[0], w[1]);
            if inside(a) == inside(b) {
                continue;
            }
            if !inside(a) {
                std::mem::swap(&mut a, &mut b);
            }
            for _ in 0..EDGE_BISECTIONS {
                let mid = 0.5 * (a + b);
                if inside(mid) {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            if !outer.contains(&Point::Real(a)) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut delta = start;
    let mut halvings = 0;
    while !contained(delta)? {
        if halvings == MAX_HALVINGS || !Value::ZERO.lt(&delta) {
            return Err(Error::ContainmentFailed(format!(
                "B({}; δ) ⊄ B({}; {eps}) on the evaluation set for δ down to {delta}",
                space.label(y),
                space.label(x)
            )));
        }
        delta = delta.div(two);
        halvings += 1;
    }
    Ok(InnerDelta {
        delta,
        formula_delta: formula,
        triangle_delta,
        case,
        index,
        fallback,
        refined: halvings > 0,
        halvings,
        checked: set.points.len() + line.len(),
        evidence: Evidence::of(&set),
    })
}

/// Largest finite domain handled by the bitmask enumeration.
pub const MAX_FINITE_POINTS: usize = 64;
/// Cap on the number of generated open sets.
pub const MAX_OPEN_SETS: usize = 1 << 20;

fn mask_of(idx: impl IntoIterator<Item = usize>) -> u64 {
    idx.into_iter().fold(0, |m, i| m | (1u64 << i))
}

fn members_of(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Every distinct open ball of a finite space, as bitmasks over the labels.
///
/// With `g(y) = max(d(x,y), d(y,x)) − d(x,x)` the ball `B(x; ε)` is
/// `{ y : g(y) < ε }`, so as `ε` ranges over `(0, ∞)` the only sets that
/// occur are `{ y : g(y) ≤ v }` for `v ∈ {0} ∪ { g(y) }`.
pub fn finite_balls(space: &Space) -> Result<Vec<u64>> {
    let pts = space.domain().finite_points().ok_or(Error::InfiniteDomain)?;
    let n = pts.len();
    if n > MAX_FINITE_POINTS {
        return Err(Error::DomainTooLarge(n, MAX_FINITE_POINTS));
    }
    let mut out = BTreeSet::new();
    for x in &pts {
        let dxx = space.dist(x, x);
        let gaps: Vec<Value> = pts.iter().map(|y| space.dist(x, y).max(space.dist(y, x)).sub(dxx)).collect();
        for v in std::iter::once(Value::ZERO).chain(gaps.iter().copied()) {
            if v.lt(&Value::ZERO) {
                continue;
            }
            out.insert(mask_of((0..n).filter(|&j| gaps[j].le(&v))));
        }
    }
    Ok(out.into_iter().collect())
}

/// A topology on a finite ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTopology {
    pub labels: Vec<String>,
    /// Open sets as bitmasks, sorted by size then by member indices.
    pub open_sets: Vec<u64>,
}

impl FiniteTopology {
    /// Validates that `open_sets` contains `∅` and the ground set and is closed
    /// under pairwise union and intersection.
    pub fn new(labels: Vec<String>, open_sets: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if n > MAX_FINITE_POINTS {
            return Err(Error::DomainTooLarge(n, MAX_FINITE_POINTS));
        }
        if let Some(bad) = open_sets.iter().flatten().find(|&&i| i >= n) {
            return Err(Error::BadParams(format!("index {bad} out of range for {n} points")));
        }
        let top = FiniteTopology::from_masks(labels, open_sets.into_iter().map(mask_of));
        if !top.is_valid() {
            return Err(Error::BadParams("open sets do not form a topology".into()));
        }
        Ok(top)
    }

    fn from_masks(labels: Vec<String>, masks: impl IntoIterator<Item = u64>) -> Self {
        let mut open_sets: Vec<u64> = masks.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let n = labels.len();
        open_sets.sort_by_key(|&m| (m.count_ones(), members_of(m, n)));
        FiniteTopology { labels, open_sets }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn ground(&self) -> u64 {
        full_mask(self.n())
    }

    pub fn is_open(&self, mask: u64) -> bool {
        self.open_sets.contains(&mask)
    }

    /// Contains `∅` and `X`, closed under pairwise unions and intersections.
    /// For a finite family this is the full topology axiom set.
    pub fn is_valid(&self) -> bool {
        let set: HashSet<u64> = self.open_sets.iter().copied().collect();
        set.contains(&0)
            && set.contains(&self.ground())
            && self.open_sets.iter().all(|a| {
                self.open_sets.iter().all(|b| set.contains(&(a | b)) && set.contains(&(a & b)))
            })
    }

    pub fn open_set_labels(&self) -> Vec<Vec<String>> {
        self.open_sets
            .iter()
            .map(|&m| members_of(m, self.n()).into_iter().map(|i| self.labels[i].clone()).collect())
            .collect()
    }

    /// Open sets as sets of labels, for order-independent comparison.
    pub fn as_label_sets(&self) -> BTreeSet<BTreeSet<String>> {
        self.open_set_labels().into_iter().map(|s| s.into_iter().collect()).collect()
    }
}

impl Serialize for FiniteTopology {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("FiniteTopology", 3)?;
        st.serialize_field("ground_set", &self.labels)?;
        st.serialize_field("open_sets", &self.open_set_labels())?;
        st.serialize_field("count", &self.open_sets.len())?;
        st.end()
    }
}

/// The topology generated by the open balls of a finite space: the balls
/// and their finite intersections, closed under unions, plus `∅`.
pub fn enumerate_topology(space: &Space) -> Result<FiniteTopology> {
    let labels = match space.domain() {
        Domain::Finite { labels } => labels.clone(),
        _ => return Err(Error::InfiniteDomain),
    };
    let n = labels.len();
    let balls = finite_balls(space)?;
    // Intersections are added so the result is a topology even when the
    // balls fail the basis property; `basis_check` reports that separately.
    let mut basis: BTreeSet<u64> = balls.iter().copied().collect();
    loop {
        let cur: Vec<u64> = basis.iter().copied().collect();
        let before = basis.len();
        for &a in &cur {
            for &b in &cur {
                if a & b != 0 {
                    basis.insert(a & b);
                }
            }
        }
        if basis.len() == before {
            break;
        }
    }
    let basis: Vec<u64> = basis.into_iter().collect();
    let mut opens: HashSet<u64> = HashSet::from([0u64]);
    let mut frontier: Vec<u64> = vec![0];
    while let Some(o) = frontier.pop() {
        for &b in &basis {
            let u = o | b;
            if opens.insert(u) {
                if opens.len() > MAX_OPEN_SETS {
                    return Err(Error::DomainTooLarge(opens.len(), MAX_OPEN_SETS));
                }
                frontier.push(u);
            }
        }
    }
    // Each point lies in its own balls, so the union of all balls is X.
    debug_assert!(opens.contains(&full_mask(n)));
    Ok(FiniteTopology::from_masks(labels, opens))
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisReport {
    pub holds: bool,
    pub balls: usize,
    pub pairs_checked: usize,
    /// `(B₁, B₂, z)` where no ball through `z` fits inside `B₁ ∩ B₂`.
    pub witness: Option<(Vec<String>, Vec<String>, String)>,
}

/// Checks that every point of every pairwise ball intersection has a ball
/// around it inside the intersection.
pub fn basis_check(space: &Space) -> Result<BasisReport> {
    let balls = finite_balls(space)?;
    let labels = match space.domain() {
        Domain::Finite { labels } => labels.clone(),
        _ => return Err(Error::InfiniteDomain),
    };
    let n = labels.len();
    let names = |m: u64| members_of(m, n).into_iter().map(|i| labels[i].clone()).collect::<Vec<_>>();
    let mut pairs = 0;
    for &a in &balls {
        for &b in &balls {
            pairs += 1;
            let inter = a & b;
            for z in members_of(inter, n) {
                let ok = balls.iter().any(|&c| c >> z & 1 == 1 && c & !inter == 0);
                if !ok {
                    return Ok(BasisReport {
                        holds: false,
                        balls: balls.len(),
                        pairs_checked: pairs,
                        witness: Some((names(a), names(b), labels[z].clone())),
                    });
                }
            }
        }
    }
    Ok(BasisReport { holds: true, balls: balls.len(), pairs_checked: pairs, witness: None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum SeparationClass {
    #[serde(rename = "not-T0")]
    NotT0,
    #[serde(rename = "T0-only")]
    T0Only,
    #[serde(rename = "T1-only")]
    T1Only,
    T2,
}

#[derive(Clone, Debug, Serialize)]
pub struct Separation {
    pub class: SeparationClass,
    pub t0: bool,
    pub t1: bool,
    pub t2: bool,
    /// First pair (in label order) that fails the next axiom up.
    pub witness: Option<(String, String)>,
}

/// Strongest of T0, T1, T2 the topology satisfies, checked over all pairs.
pub fn separation_class(top: &FiniteTopology) -> Separation {
    let n = top.n();
    let opens = &top.open_sets;
    let has = |x: usize, y: usize| opens.iter().any(|&o| o >> x & 1 == 1 && o >> y & 1 == 0);
    let t0_pair = |x: usize, y: usize| has(x, y) || has(y, x);
    let t1_pair = |x: usize, y: usize| has(x, y) && has(y, x);
    let t2_pair = |x: usize, y: usize| {
        opens.iter().any(|&u| {
            u >> x & 1 == 1 && u >> y & 1 == 0 && opens.iter().any(|&v| v >> y & 1 == 1 && u & v == 0)
        })
    };
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect();
    let first_fail = |f: &dyn Fn(usize, usize) -> bool| pairs.iter().copied().find(|&(x, y)| !f(x, y));
    let w0 = first_fail(&t0_pair);
    let w1 = first_fail(&t1_pair);
    let w2 = first_fail(&t2_pair);
    let (class, witness) = match (w0, w1, w2) {
        (Some(w), _, _) => (SeparationClass::NotT0, Some(w)),
        (None, Some(w), _) => (SeparationClass::T0Only, Some(w)),
        (None, None, Some(w)) => (SeparationClass::T1Only, Some(w)),
        (None, None, None) => (SeparationClass::T2, None),
    };
    Separation {
        class,
        t0: w0.is_none(),
        t1: w1.is_none(),
        t2: w2.is_none(),
        witness: witness.map(|(x, y)| (top.labels[x].clone(), top.labels[y].clone())),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub center: String,
    pub eps: Value,
    /// `ε/2`.
    pub inner_radius: Value,
    /// `s[ε + 2d(x,x)]`.
    pub outer_radius: Value,
    pub inner_holds: bool,
    pub outer_holds: bool,
    pub inner_counterexample: Option<String>,
    pub outer_counterexample: Option<String>,
    pub d_ball_size: usize,
    pub checked: usize,
    pub evidence: Evidence,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.inner_holds && self.outer_holds
    }
}

/// `B_D(x; ε) = { y : |D(x,y) − D(x,x)| < ε }` with `D = d + dᵀ`.
pub fn d_ball_contains(space: &Space, x: &Point, eps: Value, y: &Point) -> bool {
    let d = |a: &Point, b: &Point| space.dist(a, b).add(space.dist(b, a));
    let diff = d(x, y).sub(d(x, x));
    let abs = if diff.lt(&Value::ZERO) { Value::ZERO.sub(diff) } else { diff };
    abs.lt(&eps)
}

/// Checks `B(x; ε/2) ⊆ B_D(x; ε) ⊆ B(x; s[ε + 2d(x,x)])` pointwise on the
/// evaluation set.
pub fn dball_sandwich_check(space: &Space, x: &Point, eps: Value, plan: &SamplePlan) -> Result<SandwichReport> {
    let set = space.eval_set(plan);
    dball_sandwich_on(space, x, eps, &set)
}

pub fn dball_sandwich_on(space: &Space, x: &Point, eps: Value, set: &EvalSet) -> Result<SandwichReport> {
    let half = eps.div(Value::int(2));
    let inner = ball(space, x, half)?;
    let outer_radius = space.coefficient().mul(eps.add(Value::int(2).mul(space.dist(x, x))));
    let outer = ball(space, x, outer_radius)?;
    let mut pts = set.points.clone();
    pts.push(*x);
    let mut inner_cx = None;
    let mut outer_cx = None;
    let mut size = 0;
    for y in &pts {
        let in_d = d_ball_contains(space, x, eps, y);
        size += usize::from(in_d);
        if inner_cx.is_none() && inner.contains(y) && !in_d {
            inner_cx = Some(space.label(y));
        }
        if outer_cx.is_none() && in_d && !outer.contains(y) {
            outer_cx = Some(space.label(y));
        }
    }
    Ok(SandwichReport {
        center: space.label(x),
        eps,
        inner_radius: half,
        outer_radius,
        inner_holds: inner_cx.is_none(),
        outer_holds: outer_cx.is_none(),
        inner_counterexample: inner_cx,
        outer_counterexample: outer_cx,
        d_ball_size: size,
        checked: pts.len(),
        evidence: Evidence::of(set),
    })
}
