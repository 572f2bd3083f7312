//! Real-valued quantities: the q-ary entropy, the admissibility margin and the
//! closed-form tail bounds for the random ensembles. Generic over the float type.

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn cast<T: Float>(x: f64) -> T {
    T::from(x).expect("float conversion")
}

fn log_q<T: Float>(q: u64, x: T) -> T {
    x.ln() / cast::<T>(q as f64).ln()
}

/// `x log_q x` with the convention `0 log 0 = 0`.
fn xlogx<T: Float>(q: u64, x: T) -> T {
    if x == T::zero() {
        T::zero()
    } else {
        x * log_q(q, x)
    }
}

/// The q-ary entropy `h_q(delta)` on `[0, 1 - 1/q]`.
pub fn q_entropy<T: Float>(q: u64, delta: T) -> Result<T> {
    if q < 2 {
        return Err(Error::DomainError(format!("q = {q} must be at least 2")));
    }
    let top = T::one() - cast::<T>(1.0 / q as f64);
    if delta.is_nan() || delta < T::zero() || delta > top {
        return Err(Error::DomainError(format!(
            "delta = {} outside [0, 1 - 1/q]",
            delta.to_f64().unwrap_or(f64::NAN)
        )));
    }
    let qm1 = cast::<T>((q - 1) as f64);
    let first = if q == 2 {
        T::zero()
    } else {
        delta * log_q(q, qm1)
    };
    Ok(first - xlogx(q, delta) - xlogx(q, T::one() - delta))
}

/// `1/4 - h_q(delta) - log_q(n) / lambda`. Positive means the tail bounds are
/// decaying in `lambda`.
pub fn margin_from_lambda<T: Float>(n: u64, q: u64, lambda: u64, delta: T) -> Result<T> {
    let h = q_entropy(q, delta)?;
    let quarter = cast::<T>(0.25);
    Ok(quarter - h - log_q(q, cast::<T>(n as f64)) / cast::<T>(lambda as f64))
}

/// An upper bound on a probability, kept both as a value and as `log_q` of it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundEstimate<T> {
    pub value: T,
    pub log_q: T,
    /// True when the bound is at least one and so says nothing.
    pub vacuous: bool,
}

impl<T: Float> BoundEstimate<T> {
    fn from_log(q: u64, log_q: T) -> Self {
        let value = cast::<T>(q as f64).powf(log_q);
        BoundEstimate {
            value,
            log_q,
            vacuous: log_q >= T::zero(),
        }
    }
}

/// `q^(-2 lambda margin + 4)`, bounding `Pr(Delta <= delta)` for the rate `1/2 - 1/(2n)` family.
pub fn bound_rate_half_minus_from<T: Float>(q: u64, lambda: u64, margin: T) -> BoundEstimate<T> {
    let exponent = cast::<T>(-2.0 * lambda as f64) * margin + cast::<T>(4.0);
    BoundEstimate::from_log(q, exponent)
}

/// `(1 + q^2) q^(-2 lambda margin + 4)`, the same for the rate `1/2` family.
pub fn bound_rate_half_from<T: Float>(q: u64, lambda: u64, margin: T) -> BoundEstimate<T> {
    let base = bound_rate_half_minus_from(q, lambda, margin);
    let extra = log_q(q, cast::<T>(1.0 + (q as f64) * (q as f64)));
    BoundEstimate::from_log(q, base.log_q + extra)
}
