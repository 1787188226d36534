//! The nested default-insurance multiplier.
//!
//! Each level lends out a geometric cascade of deposits; every loan in the
//! cascade is insured, and `(O - I) * T` of its value comes back as synthetic
//! capital that seeds the level below. Written out literally this is a
//! k-fold nested summation with `n^k` terms. Because the inner summation does
//! not depend on the outer index it factors out, leaving the recurrence
//!
//! ```text
//! m_0 = 1,    m_j = A * (1 + c * m_{j-1}),    A = sum_{i=1..n} (1-R)^i,  c = (O-I)*T
//! ```
//!
//! [`kraken_eval`] uses the recurrence; [`kraken_nested_oracle`] keeps the
//! literal summation so the two can be checked against each other.

use crate::curve::MultiplierCurve;
use crate::error::{Error, Result};
use crate::params::MultiplierParams;

/// Largest `n^k` the brute-force evaluator will attempt.
pub const ORACLE_TERM_BUDGET: u64 = 10_000_000;

/// Evaluates the k-level nested summation term by term, re-evaluating the
/// inner summation for every outer index. The deepest factor is 1.
pub fn kraken_nested_oracle(params: &MultiplierParams) -> Result<f64> {
    let terms = u128::from(params.iterations()).checked_pow(params.depth());
    match terms {
        Some(t) if t <= u128::from(ORACLE_TERM_BUDGET) => {}
        other => {
            return Err(Error::OracleBudget {
                terms: other.unwrap_or(u128::MAX),
                budget: ORACLE_TERM_BUDGET,
            })
        }
    }
    Ok(nested_level(params, params.depth()))
}

fn nested_level(p: &MultiplierParams, remaining: u32) -> f64 {
    if remaining == 0 {
        return 1.0;
    }
    let retained = 1.0 - p.reserve();
    (1..=p.iterations())
        .map(|i| {
            let deposit = retained.powi(i as i32);
            deposit
                + deposit
                    * (p.origination() - p.insurance())
                    * p.tranche()
                    * nested_level(p, remaining - 1)
        })
        .sum()
}

/// Multipliers `m_1 ..= m_k` via the level recurrence. O(k) after the
/// geometric sum.
pub fn kraken_eval(params: &MultiplierParams) -> Result<MultiplierCurve> {
    let factors = params.factors();
    let mut m = 1.0;
    let mut values = Vec::with_capacity(params.depth() as usize);
    for level in 1..=params.depth() {
        m = factors.step(m);
        if !m.is_finite() {
            return Err(Error::Overflow { level });
        }
        values.push(m);
    }
    Ok(MultiplierCurve::from_values(values))
}

/// Natural logarithms `ln m_1 ..= ln m_k`, carried in log space so the
/// recurrence never overflows.
pub fn kraken_eval_ln(params: &MultiplierParams) -> Vec<f64> {
    let factors = params.factors();
    let ln_a = factors.geometric_sum.ln();
    let ln_c = factors.coupling.ln();
    let mut ln_m = 0.0;
    (0..params.depth())
        .map(|_| {
            // ln(A (1 + c m)) = ln A + softplus(ln c + ln m)
            ln_m = if factors.coupling > 0.0 {
                ln_a + softplus(ln_c + ln_m)
            } else {
                ln_a
            };
            ln_m
        })
        .collect()
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Limit of `m_{j+1} / m_j`, which is `A * c`. Fails when the coupling is
/// zero because the curve is then flat at `A`.
pub fn growth_factor(params: &MultiplierParams) -> Result<f64> {
    let factors = params.factors();
    if factors.coupling > 0.0 {
        Ok(factors.growth_ratio())
    } else {
        Err(Error::domain(
            "coupling",
            "(O - I) * T is zero; the multiplier does not grow with depth",
        ))
    }
}
