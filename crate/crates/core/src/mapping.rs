//! Self-maps on a domain, optionally with an inverse.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::{Domain, Point, SamplePlan};

type Forward = Arc<dyn Fn(&Point) -> Point + Send + Sync>;
type Inverse = Arc<dyn Fn(&Point) -> Result<Point> + Send + Sync>;

#[derive(Clone)]
pub struct Mapping {
    name: String,
    domain: Domain,
    forward: Forward,
    inverse: Option<Inverse>,
}

impl fmt::Debug for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Mapping")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("invertible", &self.inverse.is_some())
            .finish()
    }
}

impl Mapping {
    pub fn new(
        name: impl Into<String>,
        domain: Domain,
        forward: impl Fn(&Point) -> Point + Send + Sync + 'static,
    ) -> Self {
        Mapping { name: name.into(), domain, forward: Arc::new(forward), inverse: None }
    }

    pub fn with_inverse(mut self, inverse: impl Fn(&Point) -> Result<Point> + Send + Sync + 'static) -> Self {
        self.inverse = Some(Arc::new(inverse));
        self
    }

    /// Real map on an interval with a numeric inverse by bracketed bisection.
    /// `f` must be continuous and strictly increasing on the interval.
    pub fn monotone_real(
        name: impl Into<String>,
        lower: f64,
        upper: f64,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let f = Arc::new(f);
        let g = f.clone();
        let domain = Domain::Interval { lower, upper };
        Mapping::new(name, domain, move |p| match p {
            Point::Real(x) => Point::Real(f(*x)),
            other => *other,
        })
        .with_inverse(move |p| match p {
            Point::Real(y) => bisect_inverse(&*g, *y, lower, upper, INVERSE_TOL).map(Point::Real),
            _ => Err(Error::NoInverse),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn has_inverse(&self) -> bool {
        self.inverse.is_some()
    }

    pub fn forward(&self, p: &Point) -> Point {
        (self.forward)(p)
    }

    pub fn inverse(&self, p: &Point) -> Result<Point> {
        match &self.inverse {
            Some(inv) => inv(p),
            None => Err(Error::NoInverse),
        }
    }

    /// Sampled points whose image leaves the mapping's domain.
    pub fn range_violations(&self, plan: &SamplePlan) -> Vec<Point> {
        plan.sample(&self.domain)
            .points
            .into_iter()
            .filter(|p| !self.domain.contains(&self.forward(p)))
            .collect()
    }
}

/// Absolute tolerance of the numeric inverse.
pub const INVERSE_TOL: f64 = 1e-12;

/// Solves `f(x) = y` on `[lower, upper]` for continuous strictly increasing
/// `f`, returning a point within `tol` of the root.
pub fn bisect_inverse(f: &dyn Fn(f64) -> f64, y: f64, lower: f64, upper: f64, tol: f64) -> Result<f64> {
    let at_lo = f(lower);
    if !(y >= at_lo) {
        return Err(Error::PointOutsideDomain(format!("{y} is below f({lower}) = {at_lo}")));
    }
    if y == at_lo {
        return Ok(lower);
    }
    let mut lo = lower;
    let mut hi = if upper.is_finite() { upper } else { lower + 1.0 };
    while f(hi) < y {
        if upper.is_finite() {
            return Err(Error::PointOutsideDomain(format!("{y} is above f({upper})")));
        }
        lo = hi;
        hi = lower + 2.0 * (hi - lower);
        if !hi.is_finite() {
            return Err(Error::PointOutsideDomain(format!("no bracket for {y}")));
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Clone, Debug, Serialize)]
pub struct MappingSummary {
    pub name: String,
    pub domain: String,
    pub invertible: bool,
}

impl From<&Mapping> for MappingSummary {
    fn from(m: &Mapping) -> Self {
        MappingSummary { name: m.name.clone(), domain: m.domain.to_string(), invertible: m.has_inverse() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_inverts_cubic() {
        let f = |x: f64| x * x * x;
        let x = bisect_inverse(&f, 27.0, 0.0, f64::INFINITY, 1e-12).unwrap();
        assert!((x - 3.0).abs() < 1e-11);
        assert_eq!(bisect_inverse(&f, 0.0, 0.0, f64::INFINITY, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn bisection_rejects_values_out_of_range() {
        let f = |x: f64| x + 1.0;
        assert!(bisect_inverse(&f, 0.5, 0.0, 1.0, 1e-12).is_err());
        assert!(bisect_inverse(&f, 2.5, 0.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn mapping_without_inverse_errors() {
        let m = Mapping::new("id", Domain::Interval { lower: 0.0, upper: 1.0 }, |p| *p);
        assert_eq!(m.inverse(&Point::Real(0.5)).unwrap_err().code(), "NoInverse");
    }
}
