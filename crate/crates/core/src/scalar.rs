//! Distance values that stay exact for rational tables and fall back to `f64`
//! everywhere else.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::Error;

/// Exact rational used for finite tables and rational-valued evaluators.
pub type Rational = Ratio<i128>;

/// A nonnegative real as produced by a distance evaluator.
///
/// Arithmetic between two `Exact` values stays exact; any overflow or any
/// `Approx` operand demotes the result to `Approx`.
#[derive(Clone, Copy, Debug)]
pub enum Value {
    Exact(Rational),
    Approx(f64),
}

impl Value {
    pub const ZERO: Value = Value::Exact(Ratio::new_raw(0, 1));
    pub const ONE: Value = Value::Exact(Ratio::new_raw(1, 1));

    pub fn int(n: i128) -> Self {
        Value::Exact(Rational::from_integer(n))
    }

    pub fn ratio(num: i128, den: i128) -> Self {
        Value::Exact(Rational::new(num, den))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn exact(&self) -> Option<Rational> {
        match self {
            Value::Exact(r) => Some(*r),
            Value::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => rational_to_f64(r),
            Value::Approx(v) => *v,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact(r) => r.is_zero(),
            Value::Approx(v) => *v == 0.0,
        }
    }

    fn combine(
        self,
        other: Value,
        exact: impl Fn(&Rational, &Rational) -> Option<Rational>,
        approx: impl Fn(f64, f64) -> f64,
    ) -> Value {
        if let (Value::Exact(a), Value::Exact(b)) = (self, other) {
            if let Some(r) = exact(&a, &b) {
                return Value::Exact(r);
            }
        }
        Value::Approx(approx(self.to_f64(), other.to_f64()))
    }

    pub fn add(self, other: Value) -> Value {
        self.combine(other, |a, b| a.checked_add(b), |a, b| a + b)
    }

    pub fn sub(self, other: Value) -> Value {
        self.combine(other, |a, b| a.checked_sub(b), |a, b| a - b)
    }

    pub fn mul(self, other: Value) -> Value {
        self.combine(other, |a, b| a.checked_mul(b), |a, b| a * b)
    }

    /// Division; an exact zero divisor demotes to `f64` semantics (±inf/NaN).
    pub fn div(self, other: Value) -> Value {
        self.combine(
            other,
            |a, b| if b.is_zero() { None } else { a.checked_div(b) },
            |a, b| a / b,
        )
    }

    pub fn powi(self, n: u32) -> Value {
        let mut acc = Value::ONE;
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn max(self, other: Value) -> Value {
        if self.cmp_value(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Value) -> Value {
        if self.cmp_value(&other) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    /// Total comparison: exact when both sides are exact, `f64::total_cmp`
    /// otherwise.
    pub fn cmp_value(&self, other: &Value) -> Ordering {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => a.cmp(b),
            _ => self.to_f64().total_cmp(&other.to_f64()),
        }
    }

    pub fn lt(&self, other: &Value) -> bool {
        self.cmp_value(other) == Ordering::Less
    }

    pub fn le(&self, other: &Value) -> bool {
        self.cmp_value(other) != Ordering::Greater
    }

    /// `self ≤ other`, exactly when both are exact and with absolute slack
    /// `tol` otherwise.
    pub fn le_tol(&self, other: &Value, tol: f64) -> bool {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => a <= b,
            _ => self.to_f64() <= other.to_f64() + tol,
        }
    }

    /// Equality, exact when possible and within `tol` otherwise.
    pub fn eq_tol(&self, other: &Value, tol: f64) -> bool {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() <= tol,
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Approx(v)
    }
}

impl From<Rational> for Value {
    fn from(r: Rational) -> Self {
        Value::Exact(r)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Value::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Value::Approx(v) => write!(f, "{v}"),
        }
    }
}

/// Exact values serialize as strings (`"19/8"`, `"0"`) so nothing is lost;
/// approximate values serialize as JSON numbers.
impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Exact(_) => serializer.serialize_str(&self.to_string()),
            Value::Approx(v) if v.is_finite() => serializer.serialize_f64(*v),
            Value::Approx(v) => serializer.serialize_str(&v.to_string()),
        }
    }
}

impl FromStr for Value {
    type Err = Error;

    /// Parses `p/q`, integers and plain decimals exactly; anything else `f64`
    /// can read (exponents, `inf`) becomes approximate.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Some(r) = parse_rational(t) {
            return Ok(Value::Exact(r));
        }
        t.parse::<f64>()
            .map(Value::Approx)
            .map_err(|_| Error::Parse(format!("not a number: {s:?}")))
    }
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) => n / d,
        _ => f64::NAN,
    }
}

/// Reads `p/q`, `-12`, `0.125` style literals into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.trim().parse().ok()?;
        let d: i128 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    if frac_part.len() > 30 {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: i128 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    let denom = 10i128.checked_pow(frac_part.len() as u32)?;
    let r = Rational::new(numer, denom);
    Some(if neg { -r } else { r })
}

/// Arithmetic used by the hot verification loops, implemented for `f64` and
/// for exact rationals (where overflow surfaces as `None`).
pub(crate) trait Scalar: Copy + PartialOrd + Send + Sync {
    fn zero() -> Self;
    fn add(self, o: Self) -> Option<Self>;
    fn sub(self, o: Self) -> Option<Self>;
    fn mul(self, o: Self) -> Option<Self>;
    fn div(self, o: Self) -> Option<Self>;
    fn into_value(self) -> Value;
    fn is_zero(self) -> bool;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, o: Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(self, o: Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(self, o: Self) -> Option<Self> {
        Some(self * o)
    }
    fn div(self, o: Self) -> Option<Self> {
        Some(self / o)
    }
    fn into_value(self) -> Value {
        Value::Approx(self)
    }
    fn is_zero(self) -> bool {
        self == 0.0
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational::from_integer(0)
    }
    fn add(self, o: Self) -> Option<Self> {
        self.checked_add(&o)
    }
    fn sub(self, o: Self) -> Option<Self> {
        self.checked_sub(&o)
    }
    fn mul(self, o: Self) -> Option<Self> {
        self.checked_mul(&o)
    }
    fn div(self, o: Self) -> Option<Self> {
        if o.is_zero() {
            None
        } else {
            self.checked_div(&o)
        }
    }
    fn into_value(self) -> Value {
        Value::Exact(self)
    }
    fn is_zero(self) -> bool {
        Zero::is_zero(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_literals() {
        assert_eq!("8/7".parse::<Value>().unwrap().exact(), Some(Rational::new(8, 7)));
        assert_eq!("0.125".parse::<Value>().unwrap().exact(), Some(Rational::new(1, 8)));
        assert_eq!("-3".parse::<Value>().unwrap().exact(), Some(Rational::from_integer(-3)));
        assert_eq!(".5".parse::<Value>().unwrap().exact(), Some(Rational::new(1, 2)));
        assert!(!"1e-3".parse::<Value>().unwrap().is_exact());
        assert!("abc".parse::<Value>().is_err());
        assert!("1/0".parse::<Value>().is_err());
    }

    #[test]
    fn exact_arithmetic_stays_exact() {
        let s = Value::ratio(8, 7);
        let rhs = s.mul(Value::int(5).add(Value::int(2))).sub(Value::ZERO);
        assert_eq!(rhs.exact(), Some(Rational::from_integer(8)));
        assert_eq!(rhs.to_string(), "8");
        assert_eq!(Value::ratio(19, 8).to_string(), "19/8");
    }

    #[test]
    fn overflow_demotes_to_float() {
        let big = Value::int(i128::MAX / 2);
        let v = big.mul(Value::int(4));
        assert!(!v.is_exact());
        assert!(v.to_f64() > 1e38);
    }

    #[test]
    fn mixed_comparison_uses_float() {
        assert!(Value::ratio(1, 2).lt(&Value::Approx(0.5000001)));
        assert!(Value::Approx(0.5).le_tol(&Value::ratio(1, 2), 0.0));
        assert!(!Value::ratio(1, 2).le_tol(&Value::ratio(1, 3), 1.0));
    }

    #[test]
    fn serializes_exact_as_string() {
        let json = serde_json::to_string(&vec![Value::ratio(5, 8), Value::Approx(0.25)]).unwrap();
        assert_eq!(json, r#"["5/8",0.25]"#);
    }
}
