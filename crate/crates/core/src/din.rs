//! Ratios between default-insurance-note capital and the deposits it creates.

use crate::error::{Error, Result};
use crate::params::{check_reserve, SkipSpec};

/// `1 / ((O - I) * T)` for a chain in which every new loan is insured.
pub fn din_ratio(origination: f64, insurance: f64, tranche: f64) -> Result<f64> {
    let denom = (origination - insurance) * tranche;
    if denom.is_finite() && denom > 0.0 {
        Ok(1.0 / denom)
    } else {
        Err(Error::domain(
            "(O - I) * T",
            format!("{denom} must be positive"),
        ))
    }
}

/// `1 / ((O - I) + sum_{i=s..n} (1-R)^i)` for a chain in which the loans at
/// iterations `s..=n` are not insured in turn.
pub fn din_ratio_skipped(
    origination: f64,
    insurance: f64,
    reserve: f64,
    skip: SkipSpec,
) -> Result<f64> {
    let margin = origination - insurance;
    if !(margin.is_finite() && margin > 0.0) {
        return Err(Error::domain("O - I", format!("{margin} must be positive")));
    }
    check_reserve(reserve)?;
    let retained = 1.0 - reserve;
    let uninsured: f64 = (skip.start()..=skip.limit())
        .map(|i| retained.powi(i as i32))
        .sum();
    Ok(1.0 / (margin + uninsured))
}
