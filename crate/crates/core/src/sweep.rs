use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::MultiplierCurve;
use crate::error::{Error, Result};
use crate::nested::kraken_eval;
use crate::params::MultiplierParams;

/// Parameter varied by [`sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    Reserve,
    Insurance,
    Origination,
    Tranche,
    Iterations,
    Depth,
}

impl Axis {
    pub const ALL: [Axis; 6] = [
        Axis::Reserve,
        Axis::Insurance,
        Axis::Origination,
        Axis::Tranche,
        Axis::Iterations,
        Axis::Depth,
    ];

    /// Single-letter symbol, also the CLI short flag.
    pub fn symbol(self) -> &'static str {
        match self {
            Axis::Reserve => "R",
            Axis::Insurance => "I",
            Axis::Origination => "O",
            Axis::Tranche => "T",
            Axis::Iterations => "n",
            Axis::Depth => "k",
        }
    }

    pub fn apply(self, base: MultiplierParams, value: f64) -> Result<MultiplierParams> {
        match self {
            Axis::Reserve => base.with_reserve(value),
            Axis::Insurance => base.with_insurance(value),
            Axis::Origination => base.with_origination(value),
            Axis::Tranche => base.with_tranche(value),
            Axis::Iterations => base.with_iterations(as_count("iterations", value)?),
            Axis::Depth => base.with_depth(as_count("depth", value)?),
        }
    }
}

fn as_count(param: &'static str, value: f64) -> Result<u32> {
    if value.fract() == 0.0 && value >= 1.0 && value <= f64::from(u32::MAX) {
        Ok(value as u32)
    } else {
        Err(Error::Domain {
            param,
            reason: format!("{value} is not a positive integer"),
        })
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "R" | "reserve" => Axis::Reserve,
            "I" | "insurance" => Axis::Insurance,
            "O" | "origination" => Axis::Origination,
            "T" | "tranche" => Axis::Tranche,
            "n" | "iterations" => Axis::Iterations,
            "k" | "depth" => Axis::Depth,
            other => {
                return Err(Error::Domain {
                    param: "axis",
                    reason: format!("unknown axis {other:?}; expected one of R, I, O, T, n, k"),
                })
            }
        })
    }
}

/// Evaluates the nested multiplier once per value along `axis`.
///
/// Every parameter set is validated before any evaluation starts. Curves are
/// computed in parallel; output order follows `values`.
pub fn sweep(
    base: &MultiplierParams,
    axis: Axis,
    values: &[f64],
) -> Result<Vec<(f64, MultiplierCurve)>> {
    let sets = values
        .iter()
        .map(|&v| axis.apply(*base, v).map(|p| (v, p)))
        .collect::<Result<Vec<_>>>()?;
    sets.into_par_iter()
        .map(|(v, p)| kraken_eval(&p).map(|curve| (v, curve)))
        .collect()
}
