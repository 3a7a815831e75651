//! Built-in spaces and mappings, keyed by stable identifiers.
//!
//! Identifiers accept `key=value` parameters after a colon, e.g.
//! `ex2.5:q=3` or `ex2.2:upper=inf`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mapping::Mapping;
use crate::scalar::{Rational, Value};
use crate::space::{Domain, Point, Space};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogId {
    pub id: String,
    pub params: BTreeMap<String, String>,
}

impl CatalogId {
    pub fn new(id: impl Into<String>) -> Self {
        CatalogId { id: id.into(), params: BTreeMap::new() }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    fn get_value(&self, key: &str) -> Result<Option<Value>> {
        self.params
            .get(key)
            .map(|v| v.parse::<Value>().map_err(|_| Error::BadParams(format!("{key}={v} is not a number"))))
            .transpose()
    }

    fn upper(&self, default: f64) -> Result<f64> {
        let upper = self.get_value("upper")?.map_or(default, |v| v.to_f64());
        if !(upper > 0.0) {
            return Err(Error::BadParams(format!("upper must be positive, got {upper}")));
        }
        Ok(upper)
    }

    fn reject_unknown_params(&self, allowed: &[&str]) -> Result<()> {
        match self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::BadParams(format!("{} does not take parameter {k:?}", self.id))),
            None => Ok(()),
        }
    }
}

impl FromStr for CatalogId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (id, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut out = CatalogId::new(id.trim());
        for kv in rest.split(',').filter(|t| !t.trim().is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::BadParams(format!("expected key=value, got {kv:?}")))?;
            out.params.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(out)
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)?;
        for (i, (k, v)) in self.params.iter().enumerate() {
            write!(f, "{}{k}={v}", if i == 0 { ':' } else { ',' })?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryKind {
    Space,
    Mapping,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub kind: EntryKind,
    pub description: &'static str,
    pub reference: &'static str,
    pub params: &'static str,
}

pub const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        id: "ex2.2",
        kind: EntryKind::Space,
        description: "(x+y)^2 for x != y, 0 on the diagonal, on [0,1]; s = 2",
        reference: "Example 2.2",
        params: "upper (default 1, accepts inf)",
    },
    CatalogEntry {
        id: "ex2.3",
        kind: EntryKind::Space,
        description: "max{x,y} + |x-y| on [0,inf); s = 1",
        reference: "Example 2.3",
        params: "upper (default inf)",
    },
    CatalogEntry {
        id: "ex2.4",
        kind: EntryKind::Space,
        description: "|x-y| + x on [0,1]; s = 1",
        reference: "Example 2.4",
        params: "",
    },
    CatalogEntry {
        id: "ex2.5",
        kind: EntryKind::Space,
        description: "|x-y|^q on [0,1] for q > 1; s = 2^(q-1)",
        reference: "Example 2.5",
        params: "q (default 2), upper (default 1)",
    },
    CatalogEntry {
        id: "sec2-counterexample",
        kind: EntryKind::Space,
        description: "3-point asymmetric table that is qpbl but not qpb; s = 1",
        reference: "counterexample after the symmetric-space definition",
        params: "",
    },
    CatalogEntry {
        id: "remark1",
        kind: EntryKind::Space,
        description: "3-point table whose ball topology is not T0; s = 1",
        reference: "Remark 1",
        params: "",
    },
    CatalogEntry {
        id: "ex3.9",
        kind: EntryKind::Space,
        description: "max{x,y} + |x-y| on [0,1]; s = 1",
        reference: "Example 3.9",
        params: "",
    },
    CatalogEntry {
        id: "ex3.10",
        kind: EntryKind::Space,
        description: "(x+y)^2 off the diagonal on [0,1]; s = 2",
        reference: "Example 3.10",
        params: "",
    },
    CatalogEntry {
        id: "ex3.14",
        kind: EntryKind::Space,
        description: "five-case distance on N ∪ {+inf}, discontinuous in each variable; s = 2",
        reference: "Example 3.14",
        params: "",
    },
    CatalogEntry {
        id: "ex5.10",
        kind: EntryKind::Space,
        description: "3-point asymmetric table; s = 8/7",
        reference: "Example 5.10",
        params: "",
    },
    CatalogEntry {
        id: "map-half",
        kind: EntryKind::Mapping,
        description: "T x = x/2 on [0,1]",
        reference: "Example 5.6",
        params: "",
    },
    CatalogEntry {
        id: "map-quarter",
        kind: EntryKind::Mapping,
        description: "T x = x/4 on [0,1]",
        reference: "contraction demo",
        params: "",
    },
    CatalogEntry {
        id: "map-ex5.10",
        kind: EntryKind::Mapping,
        description: "T0 = 0, T1 = 0, T2 = 1 on {0,1,2}",
        reference: "Example 5.10",
        params: "",
    },
    CatalogEntry {
        id: "map-expansive",
        kind: EntryKind::Mapping,
        description: "T x = 3x sqrt(1+x^2) on [0,inf), numeric inverse by bisection",
        reference: "Example 5.15",
        params: "",
    },
];

pub fn lookup(id: &str) -> Option<&'static CatalogEntry> {
    ENTRIES.iter().find(|e| e.id == id)
}

/// The space each catalog mapping is studied in.
pub fn home_space(map_id: &str) -> Option<&'static str> {
    match map_id {
        "map-half" | "map-quarter" => Some("ex2.2"),
        "map-ex5.10" => Some("ex5.10"),
        "map-expansive" => Some("ex2.2:upper=inf"),
        _ => None,
    }
}

pub fn space_ids() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().filter(|e| e.kind == EntryKind::Space).map(|e| e.id)
}

pub fn mapping_ids() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().filter(|e| e.kind == EntryKind::Mapping).map(|e| e.id)
}

fn labels3() -> Vec<String> {
    vec!["0".into(), "1".into(), "2".into()]
}

fn rational_table(rows: [[(i128, i128); 3]; 3]) -> Vec<Vec<Value>> {
    rows.iter().map(|r| r.iter().map(|&(p, q)| Value::ratio(p, q)).collect()).collect()
}

fn real_pair(x: &Point, y: &Point) -> (f64, f64) {
    (x.as_real().unwrap_or(f64::NAN), y.as_real().unwrap_or(f64::NAN))
}

/// `(x+y)^2` off the diagonal, `0` on it.
pub fn sum_squared(name: &str, upper: f64) -> Result<Space> {
    Space::from_fn(name, Domain::Interval { lower: 0.0, upper }, Value::int(2), |x, y| {
        let (x, y) = real_pair(x, y);
        Value::Approx(if x == y { 0.0 } else { (x + y) * (x + y) })
    })
}

/// `max{x,y} + |x-y|`.
pub fn max_plus_gap(name: &str, upper: f64) -> Result<Space> {
    Space::from_fn(name, Domain::Interval { lower: 0.0, upper }, Value::ONE, |x, y| {
        let (x, y) = real_pair(x, y);
        Value::Approx(x.max(y) + (x - y).abs())
    })
}

/// `d'(x,y)^q` for a metric `d'` given as a space, with `s = 2^(q-1)`.
/// The base is assumed to be a metric; it is not re-verified here.
pub fn power_of_metric(base: &Space, q: Value) -> Result<Space> {
    if !Value::ONE.lt(&q) {
        return Err(Error::BadParams(format!("q must exceed 1, got {q}")));
    }
    let s = match q.exact() {
        Some(r) if r.is_integer() && *r.numer() <= 120 => Value::int(2).powi((*r.numer() - 1) as u32),
        _ => Value::Approx(2f64.powf(q.to_f64() - 1.0)),
    };
    let inner = base.clone();
    let int_q = q.exact().filter(|r| r.is_integer()).map(|r| *r.numer() as u32);
    Space::from_fn(format!("{}^{q}", base.name()), base.domain().clone(), s, move |x, y| {
        let d = inner.dist(x, y);
        match int_q {
            Some(k) => d.powi(k),
            None => Value::Approx(d.to_f64().powf(q.to_f64())),
        }
    })
}

fn ext_nat_distance(x: &Point, y: &Point) -> Value {
    let odd = |p: &Point| matches!(p, Point::Nat(n) if n % 2 == 1);
    let nat = |p: &Point| match p {
        Point::Nat(n) => *n as i128,
        _ => 0,
    };
    match (x, y) {
        (Point::Infinity, Point::Infinity) => Value::ZERO,
        _ if odd(x) && odd(y) => Value::Exact((Rational::new(1, nat(x)) - Rational::new(1, nat(y))).abs()),
        (_, Point::Infinity) if odd(x) => Value::ratio(1, nat(x)),
        (Point::Infinity, _) if odd(y) => Value::ratio(1, 2 * nat(y)),
        _ => Value::ONE,
    }
}

pub fn make_space(id: &CatalogId) -> Result<Space> {
    let name = id.to_string();
    match id.id.as_str() {
        "ex2.2" => {
            id.reject_unknown_params(&["upper"])?;
            sum_squared(&name, id.upper(1.0)?)
        }
        "ex3.10" => {
            id.reject_unknown_params(&[])?;
            sum_squared(&name, 1.0)
        }
        "ex2.3" => {
            id.reject_unknown_params(&["upper"])?;
            max_plus_gap(&name, id.upper(f64::INFINITY)?)
        }
        "ex3.9" => {
            id.reject_unknown_params(&[])?;
            max_plus_gap(&name, 1.0)
        }
        "ex2.4" => {
            id.reject_unknown_params(&[])?;
            Space::from_fn(name, Domain::Interval { lower: 0.0, upper: 1.0 }, Value::ONE, |x, y| {
                let (x, y) = real_pair(x, y);
                Value::Approx((x - y).abs() + x)
            })
        }
        "ex2.5" => {
            id.reject_unknown_params(&["q", "upper"])?;
            let q = id.get_value("q")?.unwrap_or(Value::int(2));
            let upper = id.upper(1.0)?;
            let base = Space::from_fn("|x-y|", Domain::Interval { lower: 0.0, upper }, Value::ONE, |x, y| {
                let (x, y) = real_pair(x, y);
                Value::Approx((x - y).abs())
            })?;
            Ok(power_of_metric(&base, q)?.with_name(name))
        }
        "sec2-counterexample" => {
            id.reject_unknown_params(&[])?;
            let m = rational_table([
                [(0, 1), (1, 1), (1, 1)],
                [(2, 1), (1, 2), (1, 2)],
                [(3, 1), (3, 1), (1, 2)],
            ]);
            Space::finite(name, labels3(), m, Value::ONE)
        }
        "remark1" => {
            id.reject_unknown_params(&[])?;
            let m = rational_table([
                [(0, 1), (1, 1), (1, 1)],
                [(1, 1), (1, 1), (1, 1)],
                [(1, 1), (1, 1), (1, 1)],
            ]);
            Space::finite(name, labels3(), m, Value::ONE)
        }
        "ex5.10" => {
            id.reject_unknown_params(&[])?;
            let m = rational_table([
                [(0, 1), (2, 1), (6, 1)],
                [(2, 1), (1, 1), (5, 1)],
                [(5, 1), (8, 1), (2, 1)],
            ]);
            Space::finite(name, labels3(), m, Value::ratio(8, 7))
        }
        "ex3.14" => {
            id.reject_unknown_params(&[])?;
            Space::from_fn(name, Domain::ExtendedNaturals, Value::int(2), ext_nat_distance)
        }
        other if lookup(other).is_some() => Err(Error::UnknownId(format!("{other} is a mapping, not a space"))),
        other => Err(Error::UnknownId(other.to_string())),
    }
}

fn scale_real(factor: f64) -> impl Fn(&Point) -> Point + Send + Sync {
    move |p| match p {
        Point::Real(x) => Point::Real(x * factor),
        other => *other,
    }
}

/// `T x = c·x` on `[0, ∞)` with exact inverse `x / c`.
pub fn linear_scaling(c: f64) -> Result<Mapping> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::BadParams(format!("scale factor must be positive, got {c}")));
    }
    Ok(Mapping::new(format!("scale:{c}"), Domain::Interval { lower: 0.0, upper: f64::INFINITY }, scale_real(c))
        .with_inverse(move |p| Ok(scale_real(1.0 / c)(p))))
}

pub fn make_mapping(id: &CatalogId) -> Result<Mapping> {
    id.reject_unknown_params(&[])?;
    let unit = Domain::Interval { lower: 0.0, upper: 1.0 };
    match id.id.as_str() {
        "map-half" => Ok(Mapping::new("map-half", unit, scale_real(0.5))),
        "map-quarter" => Ok(Mapping::new("map-quarter", unit, scale_real(0.25))),
        "map-ex5.10" => {
            let table = [0usize, 0, 1];
            Ok(Mapping::new("map-ex5.10", Domain::Finite { labels: labels3() }, move |p| match p {
                Point::Label(i) if *i < 3 => Point::Label(table[*i]),
                other => *other,
            }))
        }
        "map-expansive" => Ok(Mapping::monotone_real("map-expansive", 0.0, f64::INFINITY, |x| {
            3.0 * x * (1.0 + x * x).sqrt()
        })),
        other if other.starts_with("scale=") => {
            let c: Value = other["scale=".len()..].parse()?;
            linear_scaling(c.to_f64())
        }
        other if lookup(other).is_some() => Err(Error::UnknownId(format!("{other} is a space, not a mapping"))),
        other => Err(Error::UnknownId(other.to_string())),
    }
}

pub fn space(id: &str) -> Result<Space> {
    make_space(&id.parse()?)
}

pub fn mapping(id: &str) -> Result<Mapping> {
    make_mapping(&id.parse()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_id_constructs_with_defaults() {
        for id in space_ids() {
            space(id).unwrap_or_else(|e| panic!("{id}: {e}"));
        }
        for id in mapping_ids() {
            mapping(id).unwrap_or_else(|e| panic!("{id}: {e}"));
        }
    }

    #[test]
    fn unknown_and_misused_ids_are_rejected() {
        assert_eq!(space("ex9.9").unwrap_err().code(), "UnknownId");
        assert_eq!(space("map-half").unwrap_err().code(), "UnknownId");
        assert_eq!(mapping("ex2.2").unwrap_err().code(), "UnknownId");
        assert_eq!(space("ex2.4:q=2").unwrap_err().code(), "BadParams");
    }

    #[test]
    fn ex2_5_rejects_small_q() {
        assert_eq!(space("ex2.5:q=1").unwrap_err().code(), "BadParams");
        assert_eq!(space("ex2.5:q=0.5").unwrap_err().code(), "BadParams");
        let s = space("ex2.5:q=3").unwrap();
        assert_eq!(s.coefficient().exact(), Some(Rational::from_integer(4)));
        let s = space("ex2.5:q=2.5").unwrap();
        assert!((s.coefficient().to_f64() - 2f64.powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn power_of_table_metric_is_exact_for_integer_q() {
        let base = Space::finite(
            "discrete",
            vec!["a".into(), "b".into()],
            vec![vec![Value::ZERO, Value::int(3)], vec![Value::int(3), Value::ZERO]],
            Value::ONE,
        )
        .unwrap();
        let s = power_of_metric(&base, Value::int(2)).unwrap();
        assert_eq!(s.eval(&Point::Label(0), &Point::Label(1)).unwrap().exact(), Some(Rational::from_integer(9)));
        assert_eq!(s.coefficient(), Value::int(2));
    }

    #[test]
    fn catalog_id_round_trips_through_text() {
        let id: CatalogId = "ex2.2:upper=inf".parse().unwrap();
        assert_eq!(id.params.get("upper").map(String::as_str), Some("inf"));
        assert_eq!(id.to_string(), "ex2.2:upper=inf");
        assert!("ex2.2:upper".parse::<CatalogId>().is_err());
    }

    #[test]
    fn ext_nat_distance_cases() {
        let s = space("ex3.14").unwrap();
        let d = |x, y| s.eval(&x, &y).unwrap();
        assert_eq!(d(Point::Nat(3), Point::Nat(5)), Value::ratio(2, 15));
        assert_eq!(d(Point::Nat(2), Point::Nat(2)), Value::ONE);
        assert_eq!(d(Point::Nat(2), Point::Infinity), Value::ONE);
        assert_eq!(d(Point::Nat(3), Point::Nat(3)), Value::ZERO);
    }

    #[test]
    fn scale_mapping_parses() {
        let m = mapping("scale=20").unwrap();
        assert_eq!(m.forward(&Point::Real(0.5)), Point::Real(10.0));
        assert_eq!(m.inverse(&Point::Real(10.0)).unwrap(), Point::Real(0.5));
    }
}
