//! Spaces: a domain, an asymmetric distance evaluator and a claimed
//! coefficient `s`.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Value};

/// A point of some domain. Which variants are valid depends on the domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Point {
    /// Index into the labels of a finite domain.
    Label(usize),
    Real(f64),
    /// A positive integer of the extended naturals.
    Nat(u64),
    /// The distinguished `+∞` of the extended naturals.
    Infinity,
}

impl Point {
    fn rank(&self) -> u8 {
        match self {
            Point::Label(_) => 0,
            Point::Real(_) => 1,
            Point::Nat(_) => 2,
            Point::Infinity => 3,
        }
    }

    /// Total order used for deterministic witness selection.
    pub fn order(&self, other: &Point) -> Ordering {
        match (self, other) {
            (Point::Label(a), Point::Label(b)) => a.cmp(b),
            (Point::Real(a), Point::Real(b)) => a.total_cmp(b),
            (Point::Nat(a), Point::Nat(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            Point::Real(x) => Some(*x),
            _ => None,
        }
    }
}

pub(crate) fn order_tuples(a: &[Point], b: &[Point]) -> Ordering {
    for (p, q) in a.iter().zip(b) {
        match p.order(q) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    Finite { labels: Vec<String> },
    /// `[lower, upper]`; `upper` may be `f64::INFINITY`.
    Interval { lower: f64, upper: f64 },
    /// `{1, 2, 3, …} ∪ {+∞}`.
    ExtendedNaturals,
}

impl Domain {
    pub fn contains(&self, p: &Point) -> bool {
        match (self, p) {
            (Domain::Finite { labels }, Point::Label(i)) => *i < labels.len(),
            (Domain::Interval { lower, upper }, Point::Real(x)) => {
                x.is_finite() && *x >= *lower && *x <= *upper
            }
            (Domain::ExtendedNaturals, Point::Nat(n)) => *n >= 1,
            (Domain::ExtendedNaturals, Point::Infinity) => true,
            _ => false,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Domain::Finite { .. })
    }

    /// All points of a finite domain, in declaration order.
    pub fn finite_points(&self) -> Option<Vec<Point>> {
        match self {
            Domain::Finite { labels } => Some((0..labels.len()).map(Point::Label).collect()),
            _ => None,
        }
    }

    pub fn label(&self, p: &Point) -> String {
        match (self, p) {
            (Domain::Finite { labels }, Point::Label(i)) if *i < labels.len() => labels[*i].clone(),
            (_, Point::Label(i)) => format!("#{i}"),
            (_, Point::Real(x)) => format!("{x}"),
            (_, Point::Nat(n)) => n.to_string(),
            (_, Point::Infinity) => "inf".to_string(),
        }
    }

    /// Parses a CLI/JSON point literal: labels for finite domains, decimals for
    /// intervals, integers or `inf` for the extended naturals.
    pub fn parse_point(&self, text: &str) -> Result<Point> {
        let t = text.trim();
        let p = match self {
            Domain::Finite { labels } => labels
                .iter()
                .position(|l| l == t)
                .map(Point::Label)
                .ok_or_else(|| Error::PointOutsideDomain(t.to_string()))?,
            Domain::Interval { .. } => {
                let v: Value = t.parse()?;
                Point::Real(v.to_f64())
            }
            Domain::ExtendedNaturals => match t {
                "inf" | "+inf" | "∞" | "+∞" | "infinity" => Point::Infinity,
                _ => Point::Nat(t.parse().map_err(|_| Error::Parse(format!("not a natural: {t:?}")))?),
            },
        };
        if !self.contains(&p) {
            return Err(Error::PointOutsideDomain(t.to_string()));
        }
        Ok(p)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Finite { labels } => write!(f, "{{{}}}", labels.join(", ")),
            Domain::Interval { lower, upper } if upper.is_infinite() => write!(f, "[{lower}, +inf)"),
            Domain::Interval { lower, upper } => write!(f, "[{lower}, {upper}]"),
            Domain::ExtendedNaturals => write!(f, "N ∪ {{+inf}}"),
        }
    }
}

pub type Evaluator = Arc<dyn Fn(&Point, &Point) -> Value + Send + Sync>;

#[derive(Clone)]
enum Metric {
    Table(Arc<Vec<Vec<Value>>>),
    Function(Evaluator),
}

/// A domain with a nonnegative, possibly asymmetric distance and a claimed
/// coefficient `s ≥ 1`. Immutable once built.
#[derive(Clone)]
pub struct Space {
    name: String,
    domain: Domain,
    metric: Metric,
    coefficient: Value,
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Space")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("coefficient", &self.coefficient)
            .finish_non_exhaustive()
    }
}

pub(crate) fn validate_coefficient(s: Value) -> Result<()> {
    let f = s.to_f64();
    if f.is_nan() || !Value::ONE.le(&s) {
        return Err(Error::InvalidCoefficient(s.to_string()));
    }
    Ok(())
}

impl Space {
    /// Finite space from a row-major table; `matrix[i][j] = dist(labels[i], labels[j])`.
    pub fn finite(
        name: impl Into<String>,
        labels: Vec<String>,
        matrix: Vec<Vec<Value>>,
        s: Value,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::BadParams("finite space needs at least one point".into()));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::BadParams(format!("duplicate label {l:?}")));
            }
        }
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::BadParams(format!("matrix must be {n}x{n}")));
        }
        for (i, row) in matrix.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let f = v.to_f64();
                if f.is_nan() || f.is_infinite() || v.lt(&Value::ZERO) {
                    return Err(Error::BadParams(format!(
                        "entry [{i}][{j}] = {v} is not a finite nonnegative number"
                    )));
                }
            }
        }
        validate_coefficient(s)?;
        Ok(Space {
            name: name.into(),
            domain: Domain::Finite { labels },
            metric: Metric::Table(Arc::new(matrix)),
            coefficient: s,
        })
    }

    /// Space backed by a closed-form evaluator. The evaluator must be pure.
    pub fn from_fn(
        name: impl Into<String>,
        domain: Domain,
        s: Value,
        f: impl Fn(&Point, &Point) -> Value + Send + Sync + 'static,
    ) -> Result<Self> {
        validate_coefficient(s)?;
        Ok(Space { name: name.into(), domain, metric: Metric::Function(Arc::new(f)), coefficient: s })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn coefficient(&self) -> Value {
        self.coefficient
    }

    pub fn with_coefficient(&self, s: Value) -> Result<Space> {
        validate_coefficient(s)?;
        Ok(Space { coefficient: s, ..self.clone() })
    }

    pub fn with_name(&self, name: impl Into<String>) -> Space {
        Space { name: name.into(), ..self.clone() }
    }

    pub fn is_table(&self) -> bool {
        matches!(self.metric, Metric::Table(_))
    }

    /// `dist(x, y)` after checking both points belong to the domain.
    pub fn eval(&self, x: &Point, y: &Point) -> Result<Value> {
        for p in [x, y] {
            if !self.domain.contains(p) {
                return Err(Error::PointOutsideDomain(self.domain.label(p)));
            }
        }
        Ok(self.dist(x, y))
    }

    /// Unchecked evaluation; callers guarantee domain membership.
    pub(crate) fn dist(&self, x: &Point, y: &Point) -> Value {
        match (&self.metric, x, y) {
            (Metric::Table(m), Point::Label(i), Point::Label(j)) => m[*i][*j],
            (Metric::Function(f), _, _) => f(x, y),
            (Metric::Table(_), _, _) => Value::Approx(f64::NAN),
        }
    }

    pub fn label(&self, p: &Point) -> String {
        self.domain.label(p)
    }

    pub fn labels(&self, pts: &[Point]) -> Vec<String> {
        pts.iter().map(|p| self.label(p)).collect()
    }

    pub fn parse_point(&self, text: &str) -> Result<Point> {
        self.domain.parse_point(text)
    }

    /// Points the verification sweeps run over.
    pub fn eval_set(&self, plan: &SamplePlan) -> EvalSet {
        plan.sample(&self.domain)
    }

    pub(crate) fn matrix(&self, pts: &[Point]) -> DistMatrix {
        let n = pts.len();
        let mut vals = Vec::with_capacity(n * n);
        for x in pts {
            for y in pts {
                vals.push(self.dist(x, y));
            }
        }
        DistMatrix::from_values(n, vals)
    }

    pub fn from_json_str(text: &str) -> Result<Space> {
        let file: SpaceFile = serde_json::from_str(text)?;
        file.into_space()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Space> {
        Space::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// Serializes a finite space to the table file format.
    pub fn to_file(&self) -> Result<SpaceFile> {
        let (labels, table) = match (&self.domain, &self.metric) {
            (Domain::Finite { labels }, Metric::Table(m)) => (labels.clone(), m.clone()),
            (Domain::Finite { labels }, Metric::Function(f)) => {
                let pts: Vec<Point> = (0..labels.len()).map(Point::Label).collect();
                let m = pts.iter().map(|x| pts.iter().map(|y| f(x, y)).collect()).collect();
                (labels.clone(), Arc::new(m))
            }
            _ => return Err(Error::InfiniteDomain),
        };
        Ok(SpaceFile {
            name: self.name.clone(),
            points: labels,
            matrix: table.iter().map(|row| row.iter().map(number_json).collect()).collect(),
            s: number_json(&self.coefficient),
        })
    }
}

/// On-disk format of a finite space.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpaceFile {
    pub name: String,
    pub points: Vec<String>,
    /// `matrix[i][j] = dist(points[i], points[j])`. Entries are JSON numbers,
    /// or strings such as `"8/7"` for rationals without a short decimal form.
    pub matrix: Vec<Vec<serde_json::Value>>,
    pub s: serde_json::Value,
}

impl SpaceFile {
    pub fn into_space(self) -> Result<Space> {
        let matrix = self
            .matrix
            .iter()
            .map(|row| row.iter().map(json_number).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Space::finite(self.name, self.points, matrix, json_number(&self.s)?)
    }
}

fn json_number(v: &serde_json::Value) -> Result<Value> {
    match v {
        // serde_json prints the shortest round-trip decimal, which we read
        // back as an exact decimal fraction.
        serde_json::Value::Number(n) => n.to_string().parse(),
        serde_json::Value::String(s) => s.parse(),
        other => Err(Error::Parse(format!("expected a number, got {other}"))),
    }
}

fn terminating_decimal(r: &Rational) -> bool {
    let mut d = *r.denom();
    for p in [2, 5] {
        while d % p == 0 {
            d /= p;
        }
    }
    d == 1
}

fn number_json(v: &Value) -> serde_json::Value {
    match v {
        Value::Exact(r) if *r.denom() == 1 && r.numer().unsigned_abs() < (1u128 << 53) => {
            serde_json::Value::from(*r.numer() as i64)
        }
        Value::Exact(r) if terminating_decimal(r) => {
            let f = v.to_f64();
            match (serde_json::Number::from_f64(f), crate::scalar::parse_rational(&f.to_string())) {
                (Some(n), Some(back)) if back == *r => serde_json::Value::Number(n),
                _ => serde_json::Value::String(v.to_string()),
            }
        }
        Value::Exact(_) => serde_json::Value::String(v.to_string()),
        Value::Approx(f) => serde_json::Number::from_f64(*f)
            .map(serde_json::Value::Number)
            .unwrap_or_else(|| serde_json::Value::String(f.to_string())),
    }
}

/// Row-major distance matrix over an evaluation set; exact when every entry is.
#[derive(Clone, Debug)]
pub(crate) enum DistMatrix {
    Exact { n: usize, d: Vec<Rational> },
    Approx { n: usize, d: Vec<f64> },
}

impl DistMatrix {
    pub(crate) fn from_values(n: usize, vals: Vec<Value>) -> Self {
        if vals.iter().all(Value::is_exact) {
            DistMatrix::Exact { n, d: vals.iter().map(|v| v.exact().unwrap()).collect() }
        } else {
            DistMatrix::Approx { n, d: vals.iter().map(Value::to_f64).collect() }
        }
    }

    pub(crate) fn to_approx(&self) -> DistMatrix {
        match self {
            DistMatrix::Exact { n, d } => DistMatrix::Approx {
                n: *n,
                d: d.iter().map(crate::scalar::rational_to_f64).collect(),
            },
            other => other.clone(),
        }
    }
}

/// Deterministic sampling policy for domains that cannot be enumerated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    /// Evenly spaced points, endpoints included.
    pub grid_points_per_axis: usize,
    pub random_points: usize,
    pub seed: u64,
    /// Absolute slack for floating-point inequality checks.
    pub tolerance: f64,
    /// Sampling stops here when the interval is unbounded above.
    pub truncation: f64,
    /// Extended naturals are sampled as `1..=natural_cutoff` plus `+∞`.
    pub natural_cutoff: u64,
}

pub const DEFAULT_SEED: u64 = 0x5eed_0001;

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan {
            grid_points_per_axis: 101,
            random_points: 1000,
            seed: DEFAULT_SEED,
            tolerance: 1e-9,
            truncation: 10.0,
            natural_cutoff: 40,
        }
    }
}

impl SamplePlan {
    pub fn grid_only(n: usize) -> Self {
        SamplePlan { grid_points_per_axis: n, random_points: 0, ..Default::default() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// The closed sampling range of an interval domain.
    pub fn interval_range(&self, lower: f64, upper: f64) -> (f64, f64) {
        let hi = if upper.is_finite() { upper } else { lower.max(0.0) + self.truncation };
        (lower, hi)
    }

    pub fn grid(&self, lo: f64, hi: f64) -> Vec<f64> {
        let n = self.grid_points_per_axis.max(1);
        if n == 1 {
            return vec![lo];
        }
        (0..n)
            .map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
            .collect()
    }

    pub fn sample(&self, domain: &Domain) -> EvalSet {
        match domain {
            Domain::Finite { labels } => EvalSet {
                points: (0..labels.len()).map(Point::Label).collect(),
                grid_len: labels.len(),
                exhaustive: true,
            },
            Domain::Interval { lower, upper } => {
                let (lo, hi) = self.interval_range(*lower, *upper);
                let mut points: Vec<Point> = self.grid(lo, hi).into_iter().map(Point::Real).collect();
                let grid_len = points.len();
                let mut rng = self.rng();
                for _ in 0..self.random_points {
                    let x = if hi > lo { rng.random_range(lo..=hi) } else { lo };
                    points.push(Point::Real(x));
                }
                EvalSet { points, grid_len, exhaustive: false }
            }
            Domain::ExtendedNaturals => {
                let cutoff = self.natural_cutoff.max(1);
                let mut points: Vec<Point> = (1..=cutoff).map(Point::Nat).collect();
                points.push(Point::Infinity);
                let grid_len = points.len();
                let mut rng = self.rng();
                let extra = self.random_points.min(64);
                let top = (cutoff + 1).max(1000);
                for _ in 0..extra {
                    points.push(Point::Nat(rng.random_range(cutoff + 1..=top)));
                }
                EvalSet { points, grid_len, exhaustive: false }
            }
        }
    }

    /// Random domain points used as restart seeds by the solvers.
    pub fn random_domain_points(&self, domain: &Domain, count: usize) -> Vec<Point> {
        let mut rng = self.rng();
        (0..count)
            .map(|_| match domain {
                Domain::Finite { labels } => Point::Label(rng.random_range(0..labels.len())),
                Domain::Interval { lower, upper } => {
                    let (lo, hi) = self.interval_range(*lower, *upper);
                    Point::Real(if hi > lo { rng.random_range(lo..=hi) } else { lo })
                }
                Domain::ExtendedNaturals => {
                    if rng.random_bool(0.1) {
                        Point::Infinity
                    } else {
                        Point::Nat(rng.random_range(1..=self.natural_cutoff.max(1)))
                    }
                }
            })
            .collect()
    }
}

/// An evaluation set: a grid part (`points[..grid_len]`) and a random part.
///
/// Pair sweeps cover every ordered pair of points. Triple sweeps cover every
/// triple with at most one coordinate from the random part, which keeps
/// sweeps over 101 grid + 1000 random points near 3·10⁷ triples.
#[derive(Clone, Debug)]
pub struct EvalSet {
    pub points: Vec<Point>,
    pub grid_len: usize,
    /// True when `points` is the whole domain.
    pub exhaustive: bool,
}

impl EvalSet {
    pub fn from_points(points: Vec<Point>, exhaustive: bool) -> Self {
        let grid_len = points.len();
        EvalSet { points, grid_len, exhaustive }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Calls `f(x, z, y)` for every triple in the sweep, where `z` is the
    /// intermediate point of the generalized triangle inequality.
    pub(crate) fn for_each_triple(&self, mut f: impl FnMut(usize, usize, usize)) {
        let g = self.grid_len;
        let n = self.points.len();
        for x in 0..g {
            for z in 0..g {
                for y in 0..g {
                    f(x, z, y);
                }
            }
        }
        for r in g..n {
            for a in 0..g {
                for b in 0..g {
                    f(r, a, b);
                    f(a, r, b);
                    f(a, b, r);
                }
            }
        }
    }

    pub(crate) fn triple_count(&self) -> usize {
        let g = self.grid_len;
        g * g * g + 3 * (self.points.len() - g) * g * g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Space {
        let m = vec![
            vec![Value::int(0), Value::int(2)],
            vec![Value::int(2), Value::ratio(1, 2)],
        ];
        Space::finite("t", vec!["a".into(), "b".into()], m, Value::ONE).unwrap()
    }

    #[test]
    fn rejects_duplicate_labels_and_bad_shapes() {
        let m = vec![vec![Value::ZERO; 2]; 2];
        assert!(Space::finite("d", vec!["a".into(), "a".into()], m.clone(), Value::ONE).is_err());
        assert!(Space::finite("d", vec!["a".into()], m, Value::ONE).is_err());
    }

    #[test]
    fn rejects_negative_entries_and_small_coefficient() {
        let m = vec![vec![Value::int(-1)]];
        assert!(Space::finite("n", vec!["a".into()], m, Value::ONE).is_err());
        let m = vec![vec![Value::ZERO]];
        let err = Space::finite("n", vec!["a".into()], m, Value::ratio(1, 2)).unwrap_err();
        assert_eq!(err.code(), "InvalidCoefficient");
    }

    #[test]
    fn eval_checks_domain() {
        let s = table();
        assert_eq!(s.eval(&Point::Label(1), &Point::Label(0)).unwrap(), Value::int(2));
        assert_eq!(s.eval(&Point::Label(2), &Point::Label(0)).unwrap_err().code(), "PointOutsideDomain");
        assert!(s.eval(&Point::Real(0.0), &Point::Label(0)).is_err());
    }

    #[test]
    fn file_round_trip_keeps_exact_entries() {
        let s = table().with_coefficient(Value::ratio(8, 7)).unwrap();
        let json = serde_json::to_string(&s.to_file().unwrap()).unwrap();
        assert!(json.contains("0.5"));
        assert!(json.contains("\"8/7\""));
        let back = Space::from_json_str(&json).unwrap();
        assert_eq!(back.coefficient().exact(), Some(Rational::new(8, 7)));
        assert_eq!(back.eval(&Point::Label(1), &Point::Label(1)).unwrap().exact(), Some(Rational::new(1, 2)));
    }

    #[test]
    fn decimal_entries_parse_exactly() {
        let text = r#"{"name":"x","points":["p","q"],"matrix":[[0,0.1],[0.1,0]],"s":1}"#;
        let s = Space::from_json_str(text).unwrap();
        assert_eq!(s.eval(&Point::Label(0), &Point::Label(1)).unwrap().exact(), Some(Rational::new(1, 10)));
    }

    #[test]
    fn grid_includes_endpoints_and_sampling_is_deterministic() {
        let plan = SamplePlan::default();
        let dom = Domain::Interval { lower: 0.0, upper: 1.0 };
        let a = plan.sample(&dom);
        let b = plan.sample(&dom);
        assert_eq!(a.points, b.points);
        assert_eq!(a.grid_len, 101);
        assert_eq!(a.points[0], Point::Real(0.0));
        assert_eq!(a.points[100], Point::Real(1.0));
        assert_eq!(a.len(), 1101);
        assert!(a.points.iter().all(|p| dom.contains(p)));
        let c = plan.clone().with_seed(9).sample(&dom);
        assert_ne!(a.points, c.points);
    }

    #[test]
    fn unbounded_interval_is_truncated() {
        let plan = SamplePlan::grid_only(11);
        let set = plan.sample(&Domain::Interval { lower: 0.0, upper: f64::INFINITY });
        assert_eq!(set.points.last(), Some(&Point::Real(10.0)));
    }

    #[test]
    fn triple_sweep_count_matches_enumeration() {
        let set = EvalSet { points: (0..7).map(|i| Point::Real(i as f64)).collect(), grid_len: 4, exhaustive: false };
        let mut count = 0;
        set.for_each_triple(|_, _, _| count += 1);
        assert_eq!(count, set.triple_count());
        assert_eq!(count, 64 + 3 * 3 * 16);
    }

    #[test]
    fn parses_points_per_domain() {
        assert_eq!(Domain::ExtendedNaturals.parse_point("inf").unwrap(), Point::Infinity);
        assert_eq!(Domain::ExtendedNaturals.parse_point("7").unwrap(), Point::Nat(7));
        assert!(Domain::ExtendedNaturals.parse_point("0").is_err());
        let dom = Domain::Interval { lower: 0.0, upper: 1.0 };
        assert_eq!(dom.parse_point("1/2").unwrap(), Point::Real(0.5));
        assert!(dom.parse_point("1.5").is_err());
    }
}
