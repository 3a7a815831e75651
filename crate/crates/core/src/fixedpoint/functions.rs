use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use super::HypothesisCheck;
use crate::axioms::Evidence;
use crate::error::{Error, Result};
use crate::scalar::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Continuous,
    MonotoneNondecreasing,
    Linear,
    ZeroIffZero,
    Subadditive,
}

#[derive(Clone)]
enum Kind {
    Linear(Value),
    /// `coef · min(t, cap)²`; no cap when `None`.
    CappedQuadratic { coef: Value, cap: Option<Value> },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// A nonnegative function on `[0, ∞)` with declared properties that can be
/// spot-checked on a grid.
#[derive(Clone)]
pub struct ScalarFunction {
    name: String,
    kind: Kind,
    declared: Vec<Property>,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction").field("name", &self.name).field("declared", &self.declared).finish()
    }
}

/// Number of grid points used by [`ScalarFunction::verify_properties`].
pub const PROPERTY_GRID: usize = 1000;

impl ScalarFunction {
    pub fn linear(slope: Value) -> Self {
        use Property::*;
        let mut declared = vec![Continuous, MonotoneNondecreasing, Linear, Subadditive];
        if !slope.is_zero() {
            declared.push(ZeroIffZero);
        }
        ScalarFunction { name: format!("linear:{slope}"), kind: Kind::Linear(slope), declared }
    }

    pub fn capped_quadratic(coef: Value, cap: Option<Value>) -> Self {
        use Property::*;
        let name = match cap {
            Some(c) => format!("capped-quadratic:{coef}:{c}"),
            None => format!("quadratic:{coef}"),
        };
        ScalarFunction {
            name,
            kind: Kind::CappedQuadratic { coef, cap },
            declared: vec![Continuous, MonotoneNondecreasing, ZeroIffZero],
        }
    }

    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static, declared: Vec<Property>) -> Self {
        ScalarFunction { name: name.into(), kind: Kind::Custom(Arc::new(f)), declared }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn declared(&self) -> &[Property] {
        &self.declared
    }

    pub fn declares(&self, p: Property) -> bool {
        self.declared.contains(&p)
    }

    pub fn slope(&self) -> Option<Value> {
        match self.kind {
            Kind::Linear(c) => Some(c),
            _ => None,
        }
    }

    pub fn eval(&self, t: Value) -> Value {
        match &self.kind {
            Kind::Linear(c) => c.mul(t),
            Kind::CappedQuadratic { coef, cap } => {
                let u = cap.map_or(t, |c| t.min(c));
                coef.mul(u.mul(u))
            }
            Kind::Custom(f) => Value::Approx(f(t.to_f64())),
        }
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.eval(Value::Approx(t)).to_f64()
    }

    /// Spot-checks each declared property on a grid of [`PROPERTY_GRID`]
    /// points over `[0, upper]`.
    pub fn verify_properties(&self, upper: f64, tol: f64) -> Vec<HypothesisCheck> {
        let upper = if upper > 0.0 && upper.is_finite() { upper } else { 1.0 };
        let grid: Vec<f64> = (0..PROPERTY_GRID).map(|i| upper * i as f64 / (PROPERTY_GRID - 1) as f64).collect();
        let f = |t: f64| self.eval_f64(t);
        let label = |t: &f64| vec![t.to_string()];
        let ev = Evidence::Sampled;
        self.declared
            .iter()
            .map(|p| {
                let name = format!("{}:{}", self.name, serde_json::to_value(p).unwrap().as_str().unwrap());
                match p {
                    Property::MonotoneNondecreasing => HypothesisCheck::inequality(
                        &name,
                        ev,
                        tol,
                        grid.windows(2).map(|w| (w[0], w[1])),
                        |(a, b)| vec![a.to_string(), b.to_string()],
                        |(a, b)| (Value::Approx(f(*a)), Value::Approx(f(*b))),
                    ),
                    Property::Linear => HypothesisCheck::inequality(
                        &name,
                        ev,
                        tol,
                        grid.iter().flat_map(|&t| [0.5, 2.0, 3.0].map(|a| (a, t))),
                        |(a, t)| vec![a.to_string(), t.to_string()],
                        |(a, t)| {
                            let dev = (f(a * t) - a * f(*t)).abs();
                            (Value::Approx(dev), Value::Approx(tol * (1.0 + f(a * t).abs())))
                        },
                    ),
                    Property::ZeroIffZero => {
                        let at_zero = f(0.0) == 0.0;
                        let bad = grid.iter().skip(1).find(|&&t| !(f(t) > 0.0));
                        HypothesisCheck {
                            name,
                            passed: at_zero && bad.is_none(),
                            evidence: ev,
                            checked: grid.len(),
                            worst_slack: None,
                            witness: match (at_zero, bad) {
                                (false, _) => Some(vec!["0".into()]),
                                (_, Some(t)) => Some(label(t)),
                                _ => None,
                            },
                            detail: None,
                        }
                    }
                    Property::Subadditive => {
                        let coarse: Vec<f64> = grid.iter().step_by(20).copied().collect();
                        let pairs: Vec<(f64, f64)> =
                            coarse.iter().flat_map(|&a| coarse.iter().map(move |&b| (a, b))).collect();
                        HypothesisCheck::inequality(
                            &name,
                            ev,
                            tol,
                            pairs,
                            |(a, b)| vec![a.to_string(), b.to_string()],
                            |(a, b)| (Value::Approx(f(a + b)), Value::Approx(f(*a) + f(*b))),
                        )
                    }
                    Property::Continuous => {
                        // a jump of this size within 1e-9 counts as discontinuous
                        let h = 1e-9;
                        HypothesisCheck::inequality(&name, ev, tol, grid.clone(), label, |t| {
                            (Value::Approx((f(t + h) - f(*t)).abs()), Value::Approx(1e-6))
                        })
                    }
                }
            })
            .collect()
    }
}

impl FromStr for ScalarFunction {
    type Err = Error;

    /// `linear:<c>`, `quadratic:<c>` or `capped-quadratic:<c>:<cap>`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| -> Result<Value> {
            let v: Value = t.parse()?;
            if v.lt(&Value::ZERO) {
                return Err(Error::BadParams(format!("{t} must be nonnegative")));
            }
            Ok(v)
        };
        match parts.as_slice() {
            ["linear", c] => Ok(ScalarFunction::linear(num(c)?)),
            ["quadratic", c] => Ok(ScalarFunction::capped_quadratic(num(c)?, None)),
            ["capped-quadratic", c, cap] => Ok(ScalarFunction::capped_quadratic(num(c)?, Some(num(cap)?))),
            _ => Err(Error::BadParams(format!(
                "unknown function {s:?}; expected linear:<c>, quadratic:<c> or capped-quadratic:<c>:<cap>"
            ))),
        }
    }
}
