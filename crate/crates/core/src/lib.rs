//! Money multipliers for fractional-reserve lending and for lending that
//! recycles insured loans into new capital through default insurance notes.
//!
//! - [`classic`]: the `1/R` limit and the geometric partial sums behind it.
//! - [`nested`]: the nested insurance multiplier, both as a literal nested
//!   summation and as an O(k) recurrence.
//! - [`din`]: ratios of insurance-note capital to deposits created.
//! - [`sweep`]: parameter sweeps over the nested multiplier.
//! - [`sim`]: a ledger-level simulation whose emergent multiplier reproduces
//!   the analytic one.

pub mod classic;
pub mod curve;
pub mod din;
pub mod error;
pub mod nested;
pub mod params;
pub mod semilog;
pub mod sim;
pub mod sweep;

pub use classic::{classic_asymptote, classic_curve, classic_limit, classic_series, geometric_sum};
pub use curve::{CurvePoint, MultiplierCurve};
pub use din::{din_ratio, din_ratio_skipped};
pub use error::{Error, Result};
pub use nested::{growth_factor, kraken_eval, kraken_eval_ln, kraken_nested_oracle};
pub use params::{DerivedFactors, MultiplierParams, SkipSpec};
pub use sim::{empirical_curve, replay_ledger, run_simulation, SimConfig, SimResult};
pub use sweep::{sweep, Axis};
