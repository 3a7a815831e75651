use serde::Serialize;

use crate::error::{Error, Result};
use crate::mapping::Mapping;
use crate::scalar::Value;
use crate::sequences::SequenceSpec;
use crate::space::{Point, Space};

/// `x₀, Tx₀, …, Tⁿx₀`, indexed from 0.
pub fn orbit(map: &Mapping, x0: &Point, n: usize) -> Result<SequenceSpec> {
    if n < 1 {
        return Err(Error::BadParams("orbit length must be at least 1".into()));
    }
    let dom = map.domain();
    if !dom.contains(x0) {
        return Err(Error::PointOutsideDomain(dom.label(x0)));
    }
    let mut terms = Vec::with_capacity(n + 1);
    terms.push(*x0);
    for k in 1..=n {
        let next = map.forward(&terms[k - 1]);
        if !dom.contains(&next) {
            return Err(Error::DomainEscape(format!("T^{k}({}) = {}", dom.label(x0), dom.label(&next))));
        }
        terms.push(next);
    }
    Ok(SequenceSpec { name: format!("orbit:{}:{}", map.name(), dom.label(x0)), first_index: 0, terms })
}

fn pos(seq: &SequenceSpec, k: usize) -> Result<Point> {
    seq.terms
        .get(k)
        .copied()
        .ok_or_else(|| Error::IndexError(format!("position {k} beyond {} terms", seq.len())))
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainBound {
    pub n: usize,
    pub m: usize,
    /// `Σ_{k=n}^{m−1} s^k d(x_k, x_{k+1})`.
    pub bound_forward: Value,
    /// `Σ_{k=n}^{m−1} s^k d(x_{k+1}, x_k)`.
    pub bound_backward: Value,
    /// `d(x_n, x_m)`.
    pub actual_forward: Value,
    /// `d(x_m, x_n)`.
    pub actual_backward: Value,
    pub holds: bool,
    /// Same sums with `s^{k−n+1}` in place of `s^k`, which is what chaining
    /// QPbl4 from `x_n` actually yields. They agree with the stated bounds
    /// up to a factor `s^{n−1}`, so for `n = 0` the stated ones are smaller.
    pub chained_forward: Value,
    pub chained_backward: Value,
    pub chained_holds: bool,
}

/// Both chained triangle bounds between positions `n < m`, counted from the
/// first term of the sequence.
pub fn chain_bound(space: &Space, seq: &SequenceSpec, n: usize, m: usize, tol: f64) -> Result<ChainBound> {
    if m <= n {
        return Err(Error::IndexError(format!("need m > n, got n = {n}, m = {m}")));
    }
    pos(seq, m)?;
    let s = space.coefficient();
    let (mut bf, mut bb, mut cf, mut cb) = (Value::ZERO, Value::ZERO, Value::ZERO, Value::ZERO);
    let mut sk = s.powi(n as u32);
    let mut ck = s;
    for k in n..m {
        let (a, b) = (pos(seq, k)?, pos(seq, k + 1)?);
        let (fwd, bwd) = (space.eval(&a, &b)?, space.eval(&b, &a)?);
        bf = bf.add(sk.mul(fwd));
        bb = bb.add(sk.mul(bwd));
        cf = cf.add(ck.mul(fwd));
        cb = cb.add(ck.mul(bwd));
        sk = sk.mul(s);
        ck = ck.mul(s);
    }
    let (xn, xm) = (pos(seq, n)?, pos(seq, m)?);
    let (af, ab) = (space.eval(&xn, &xm)?, space.eval(&xm, &xn)?);
    Ok(ChainBound {
        n,
        m,
        bound_forward: bf,
        bound_backward: bb,
        actual_forward: af,
        actual_backward: ab,
        holds: af.le_tol(&bf, tol) && ab.le_tol(&bb, tol),
        chained_forward: cf,
        chained_backward: cb,
        chained_holds: af.le_tol(&cf, tol) && ab.le_tol(&cb, tol),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayBound {
    pub lambda: Value,
    pub n: usize,
    pub m: usize,
    pub premise_holds: bool,
    /// First position `k` where a premise inequality fails.
    pub premise_failure: Option<usize>,
    /// `(2sλ)ⁿ/(1 − 2sλ) · (d(y₀,y₁) + d(y₁,y₀))/2`.
    pub bound: Value,
    /// `d(y_n, y_m)`.
    pub actual: Value,
    pub holds: bool,
}

/// Geometric bound on `d(y_n, y_m)` for sequences whose consecutive
/// displacements shrink by `λ` relative to the previous two-way displacement.
pub fn decay_bound(space: &Space, seq: &SequenceSpec, lambda: Value, n: usize, m: usize, tol: f64) -> Result<DecayBound> {
    let s = space.coefficient();
    let two_s = Value::int(2).mul(s);
    let bound_hi = Value::ONE.div(two_s);
    if !(Value::ZERO.lt(&lambda) && lambda.lt(&bound_hi)) {
        return Err(Error::LambdaOutOfRange { lambda: lambda.to_f64(), bound: bound_hi.to_f64() });
    }
    if m <= n {
        return Err(Error::IndexError(format!("need m > n, got n = {n}, m = {m}")));
    }
    pos(seq, m)?;
    let d = |a: &Point, b: &Point| space.dist(a, b);
    let mut premise_failure = None;
    for k in 1..seq.len() - 1 {
        let (prev, cur, next) = (seq.terms[k - 1], seq.terms[k], seq.terms[k + 1]);
        let back = lambda.mul(d(&prev, &cur).add(d(&cur, &prev)));
        if !(d(&cur, &next).le_tol(&back, tol) && d(&next, &cur).le_tol(&back, tol)) {
            premise_failure = Some(k);
            break;
        }
    }
    let q = two_s.mul(lambda);
    let (y0, y1) = (seq.terms[0], seq.terms[1]);
    let bound = q
        .powi(n as u32)
        .div(Value::ONE.sub(q))
        .mul(d(&y0, &y1).add(d(&y1, &y0)))
        .div(Value::int(2));
    let actual = d(&seq.terms[n], &seq.terms[m]);
    let premise_holds = premise_failure.is_none();
    Ok(DecayBound {
        lambda,
        n,
        m,
        premise_holds,
        premise_failure,
        bound,
        actual,
        holds: premise_holds && actual.le_tol(&bound, tol),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightWitness {
    /// Partial sum plus the geometric tail estimate.
    pub series_value: f64,
    pub partial_sum: f64,
    pub tail_estimate: f64,
    /// Ratio of the last two nonzero terms; 0 when the orbit stops moving.
    pub ratio: f64,
    pub terms: usize,
    /// `φ(Tᵏx₀) = Σ_{j≥k} d(Tʲx₀, Tʲ⁺¹x₀)` for `k = 0..=terms`.
    pub phi_witness: Vec<f64>,
    /// `d(x,Tx) ≤ φ(x) − φ(Tx)` held at every orbit point (up to rounding).
    pub inequality_verified: bool,
    /// `|Σ_{k<K} d(Tᵏx, Tᵏ⁺¹x) − (φ(x) − φ(Tᴷx))|` at `K = terms`.
    pub telescoping_error: f64,
}

/// Sums the orbit displacements `d(Tⁿx₀, Tⁿ⁺¹x₀)` and builds the weight
/// function `φ` that makes `d(x,Tx) ≤ φ(x) − φ(Tx)` hold along the orbit.
pub fn weight_witness(space: &Space, map: &Mapping, x0: &Point, n_terms: usize) -> Result<WeightWitness> {
    if n_terms < 10 {
        return Err(Error::BadParams("n_terms must be at least 10".into()));
    }
    let orb = orbit(map, x0, n_terms)?;
    for p in &orb.terms {
        if !space.domain().contains(p) {
            return Err(Error::DomainEscape(space.label(p)));
        }
    }
    let a: Vec<f64> = orb.terms.windows(2).map(|w| space.dist(&w[0], &w[1]).to_f64()).collect();
    let nonzero: Vec<f64> = a.iter().copied().filter(|&v| v != 0.0).collect();
    let ratio = match (a.last(), nonzero.len()) {
        (Some(0.0), _) => 0.0,
        (_, k) if k >= 2 => nonzero[k - 1] / nonzero[k - 2],
        _ => 0.0,
    };
    if !(ratio < 1.0) {
        return Err(Error::SeriesDiverging(ratio));
    }
    let last = *a.last().unwrap();
    let tail_estimate = if last == 0.0 { 0.0 } else { last * ratio / (1.0 - ratio) };
    let mut phi = vec![0.0; n_terms + 1];
    phi[n_terms] = tail_estimate;
    for k in (0..n_terms).rev() {
        phi[k] = a[k] + phi[k + 1];
    }
    let partial_sum: f64 = a.iter().sum();
    let scale = |k: usize| 1e-9 * (k.max(1) as f64) * phi[0].max(1.0);
    let inequality_verified = (0..n_terms).all(|k| a[k] <= phi[k] - phi[k + 1] + scale(k));
    let telescoping_error = (partial_sum - (phi[0] - phi[n_terms])).abs();
    Ok(WeightWitness {
        series_value: phi[0],
        partial_sum,
        tail_estimate,
        ratio,
        terms: n_terms,
        phi_witness: phi,
        inequality_verified,
        telescoping_error,
    })
}
