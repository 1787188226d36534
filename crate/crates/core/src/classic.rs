//! The classic fractional-reserve multiplier: the `1/R` limit, the partial
//! sums of `(1-R)^i`, and the closed form of those partial sums.

use crate::curve::MultiplierCurve;
use crate::error::{Error, Result};
use crate::params::{check_count, check_reserve};

/// Textbook multiplier `1 / R`. `R = 1` (full reserve) is allowed.
pub fn classic_limit(reserve: f64) -> Result<f64> {
    if reserve.is_finite() && reserve > 0.0 && reserve <= 1.0 {
        Ok(1.0 / reserve)
    } else {
        Err(Error::domain(
            "reserve",
            format!("{reserve} must satisfy 0 < R <= 1"),
        ))
    }
}

/// Partial sum `sum_{i=1..n} (1-R)^i`, evaluated term by term.
///
/// The initial deposit (`i = 0`) is not counted, so the partial sums approach
/// `(1-R)/R` rather than `1/R`; see [`classic_asymptote`].
pub fn classic_series(reserve: f64, iterations: u32) -> Result<f64> {
    check_reserve(reserve)?;
    check_count("iterations", iterations)?;
    let retained = 1.0 - reserve;
    let mut sum = NeumaierSum::default();
    for i in 1..=iterations {
        sum.add(retained.powi(i as i32));
    }
    Ok(sum.total())
}

/// Closed form of [`classic_series`]: `(1-R) * (1 - (1-R)^n) / R`.
pub fn geometric_sum(reserve: f64, iterations: u32) -> Result<f64> {
    check_reserve(reserve)?;
    check_count("iterations", iterations)?;
    // 1 - (1-R)^n without cancellation for small R.
    let tail = -(f64::from(iterations) * (-reserve).ln_1p()).exp_m1();
    Ok((1.0 - reserve) * tail / reserve)
}

/// Value the classic partial sums converge to.
///
/// Without the initial deposit this is `(1-R)/R`; with it, `1/R`.
pub fn classic_asymptote(reserve: f64, include_initial_deposit: bool) -> Result<f64> {
    check_reserve(reserve)?;
    let loans_only = (1.0 - reserve) / reserve;
    Ok(if include_initial_deposit {
        loans_only + 1.0
    } else {
        loans_only
    })
}

/// Partial sums for `n = 1..=max_iterations`, built incrementally.
pub fn classic_curve(reserve: f64, max_iterations: u32) -> Result<MultiplierCurve> {
    check_reserve(reserve)?;
    check_count("max iterations", max_iterations)?;
    let retained = 1.0 - reserve;
    let mut sum = NeumaierSum::default();
    let values = (1..=max_iterations).map(|i| {
        sum.add(retained.powi(i as i32));
        sum.total()
    });
    Ok(MultiplierCurve::from_values(values.collect::<Vec<_>>()))
}

/// Compensated (Kahan-Babuska-Neumaier) running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}
