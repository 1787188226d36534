//! Straight-line fits on semi-log axes.

use crate::curve::MultiplierCurve;

/// Ordinary least-squares line `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination.
    pub r_squared: f64,
    /// Largest absolute residual.
    pub max_residual: f64,
}

/// Fits a line through `points`. Returns `None` for fewer than two points or
/// when all `x` coincide.
pub fn fit_line(points: &[(f64, f64)]) -> Option<LineFit> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let residuals = points.iter().map(|p| p.1 - (intercept + slope * p.0));
    let (ss_res, max_residual) =
        residuals.fold((0.0, 0.0_f64), |(ss, mx), r| (ss + r * r, mx.max(r.abs())));
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Some(LineFit {
        slope,
        intercept,
        r_squared,
        max_residual,
    })
}

/// Fits `log10 m` against level over the levels `from..=curve.len()`.
pub fn fit_semilog(curve: &MultiplierCurve, from: u32) -> Option<LineFit> {
    let points: Vec<(f64, f64)> = curve
        .points()
        .iter()
        .filter(|p| p.level >= from)
        .map(|p| (f64::from(p.level), p.multiplier.log10()))
        .collect();
    fit_line(&points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let fit = fit_line(&[(1.0, 3.0), (2.0, 5.0), (3.0, 7.0)]).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!((fit.intercept - 1.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(fit.max_residual < 1e-12);
    }

    #[test]
    fn noisy_line() {
        // y = x with residuals +-0.5 around the middle: slope 1, intercept 0
        let fit = fit_line(&[(0.0, 0.0), (1.0, 1.5), (2.0, 1.5), (3.0, 3.0)]).unwrap();
        assert!((fit.slope - 0.9).abs() < 1e-12);
        assert!(fit.r_squared < 1.0);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(fit_line(&[(1.0, 1.0)]).is_none());
        assert!(fit_line(&[(1.0, 1.0), (1.0, 2.0)]).is_none());
    }

    #[test]
    fn semilog_of_pure_exponential() {
        let curve = MultiplierCurve::from_values((1..=10).map(|k| 3.0 * 10f64.powi(k)));
        let fit = fit_semilog(&curve, 3).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-12);
        assert!((fit.intercept - 3f64.log10()).abs() < 1e-12);
    }
}
