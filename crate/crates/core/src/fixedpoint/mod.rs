//! Fixed-point solvers whose hypotheses are checked before iterating, plus
//! the orbit lemmas they rest on.

mod functions;
mod lemmas;
mod solve;

use serde::Serialize;

use crate::axioms::Evidence;
use crate::scalar::Value;
use crate::space::{Point, Space};

pub use functions::{Property, ScalarFunction};
pub use lemmas::{chain_bound, decay_bound, orbit, weight_witness, ChainBound, DecayBound, WeightWitness};
pub use solve::{
    expansive_k_solve, expansive_solve, lambda_solve, phi_contraction_solve, phi_psi_solve, phi_psi_table,
    series_probe, ExpansiveParams, FixedPointCertificate, InequalityRow, RestartOutcome, SolveOptions, Theorem,
};

/// Result of one named hypothesis check.
#[derive(Clone, Debug, Serialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub passed: bool,
    pub evidence: Evidence,
    pub checked: usize,
    /// Smallest `rhs − lhs` seen, for inequality checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_slack: Option<Value>,
    /// Inputs attaining `worst_slack`, or the first failing input.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl HypothesisCheck {
    pub(crate) fn verdict(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        HypothesisCheck {
            name: name.to_string(),
            passed,
            evidence: Evidence::Exhaustive,
            checked: 1,
            worst_slack: None,
            witness: None,
            detail: Some(detail.into()),
        }
    }

    /// Checks `lhs ≤ rhs` at every input; exact pairs get no slack.
    pub(crate) fn inequality<T>(
        name: &str,
        evidence: Evidence,
        tol: f64,
        inputs: impl IntoIterator<Item = T>,
        label: impl Fn(&T) -> Vec<String>,
        sides: impl Fn(&T) -> (Value, Value),
    ) -> Self {
        let mut checked = 0;
        let mut worst: Option<(Value, Vec<String>)> = None;
        let mut passed = true;
        let mut first_fail = None;
        for input in inputs {
            checked += 1;
            let (lhs, rhs) = sides(&input);
            let slack = rhs.sub(lhs);
            let ok = if lhs.is_exact() && rhs.is_exact() { lhs.le(&rhs) } else { lhs.le_tol(&rhs, tol) };
            if !ok && first_fail.is_none() {
                first_fail = Some(label(&input));
            }
            passed &= ok;
            if worst.as_ref().is_none_or(|(w, _)| slack.lt(w)) {
                worst = Some((slack, label(&input)));
            }
        }
        let (worst_slack, worst_at) = worst.unzip();
        HypothesisCheck {
            name: name.to_string(),
            passed,
            evidence,
            checked,
            worst_slack,
            witness: first_fail.or(worst_at),
            detail: None,
        }
    }
}

pub(crate) fn pair_labels(space: &Space) -> impl Fn(&(Point, Point)) -> Vec<String> + '_ {
    move |(x, y)| vec![space.label(x), space.label(y)]
}
