//! Quasi-partial b-metric-like spaces: axiom checks, ball topology,
//! sequence diagnostics and fixed-point solvers.

pub mod axioms;
pub mod catalog;
pub mod error;
pub mod fixedpoint;
pub mod mapping;
pub mod reproduce;
pub mod scalar;
pub mod sequences;
pub mod space;
pub mod topology;

pub use error::{Error, Result};
pub use mapping::Mapping;
pub use scalar::{Rational, Value};
pub use space::{Domain, EvalSet, Point, SamplePlan, Space};
