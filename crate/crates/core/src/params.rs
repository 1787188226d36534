//! Parameter vector of the nested default-insurance multiplier and the
//! factors it reduces to.

use serde::{Deserialize, Serialize};

use crate::classic::geometric_sum;
use crate::error::{Error, Result};

/// Full parameter set of the nested multiplier.
///
/// | field         | meaning                                         |
/// |---------------|-------------------------------------------------|
/// | `reserve`     | fraction of each deposit held back, `0 < R < 1` |
/// | `insurance`   | insurance note price as a fraction of the loan  |
/// | `origination` | `1 +` origination fee fraction ("points")       |
/// | `tranche`     | fraction of the loan covered by insurance       |
/// | `iterations`  | deposit-to-loan cycles per nesting level        |
/// | `depth`       | number of nested insurance generations          |
///
/// Fields are private so every value in circulation has passed validation;
/// use [`MultiplierParams::new`] or the `with_*` builders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct MultiplierParams {
    reserve: f64,
    insurance: f64,
    origination: f64,
    tranche: f64,
    iterations: u32,
    depth: u32,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    reserve: f64,
    insurance: f64,
    origination: f64,
    tranche: f64,
    iterations: u32,
    depth: u32,
}

impl TryFrom<RawParams> for MultiplierParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        MultiplierParams::new(
            raw.reserve,
            raw.insurance,
            raw.origination,
            raw.tranche,
            raw.iterations,
            raw.depth,
        )
    }
}

impl From<MultiplierParams> for RawParams {
    fn from(p: MultiplierParams) -> Self {
        RawParams {
            reserve: p.reserve,
            insurance: p.insurance,
            origination: p.origination,
            tranche: p.tranche,
            iterations: p.iterations,
            depth: p.depth,
        }
    }
}

pub(crate) fn check_reserve(reserve: f64) -> Result<()> {
    if reserve.is_finite() && reserve > 0.0 && reserve < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(
            "reserve",
            format!("{reserve} must satisfy 0 < R < 1"),
        ))
    }
}

pub(crate) fn check_count(param: &'static str, value: u32) -> Result<()> {
    if value >= 1 {
        Ok(())
    } else {
        Err(Error::domain(param, "must be at least 1"))
    }
}

impl MultiplierParams {
    /// Validates and builds a parameter set.
    ///
    /// `insurance == origination` is accepted (the coupling vanishes and the
    /// nested multiplier collapses to the classic series); `insurance >
    /// origination` is rejected.
    pub fn new(
        reserve: f64,
        insurance: f64,
        origination: f64,
        tranche: f64,
        iterations: u32,
        depth: u32,
    ) -> Result<Self> {
        check_reserve(reserve)?;
        if !(insurance.is_finite() && insurance >= 0.0) {
            return Err(Error::domain(
                "insurance",
                format!("{insurance} must be finite and non-negative"),
            ));
        }
        if !(origination.is_finite() && origination >= 1.0) {
            return Err(Error::domain(
                "origination",
                format!("{origination} must be at least 1"),
            ));
        }
        if insurance > origination {
            return Err(Error::domain(
                "insurance",
                format!("{insurance} exceeds origination factor {origination}"),
            ));
        }
        if !(tranche.is_finite() && (0.0..=1.0).contains(&tranche)) {
            return Err(Error::domain(
                "tranche",
                format!("{tranche} must lie in [0, 1]"),
            ));
        }
        check_count("iterations", iterations)?;
        check_count("depth", depth)?;
        Ok(MultiplierParams {
            reserve,
            insurance,
            origination,
            tranche,
            iterations,
            depth,
        })
    }

    pub fn reserve(&self) -> f64 {
        self.reserve
    }

    pub fn insurance(&self) -> f64 {
        self.insurance
    }

    pub fn origination(&self) -> f64 {
        self.origination
    }

    pub fn tranche(&self) -> f64 {
        self.tranche
    }

    pub fn iterations(&self) -> u32 {
        self.iterations
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn with_reserve(self, reserve: f64) -> Result<Self> {
        Self { reserve, ..self }.revalidate()
    }

    pub fn with_insurance(self, insurance: f64) -> Result<Self> {
        Self { insurance, ..self }.revalidate()
    }

    pub fn with_origination(self, origination: f64) -> Result<Self> {
        Self {
            origination,
            ..self
        }
        .revalidate()
    }

    pub fn with_tranche(self, tranche: f64) -> Result<Self> {
        Self { tranche, ..self }.revalidate()
    }

    pub fn with_iterations(self, iterations: u32) -> Result<Self> {
        Self { iterations, ..self }.revalidate()
    }

    pub fn with_depth(self, depth: u32) -> Result<Self> {
        Self { depth, ..self }.revalidate()
    }

    fn revalidate(self) -> Result<Self> {
        Self::new(
            self.reserve,
            self.insurance,
            self.origination,
            self.tranche,
            self.iterations,
            self.depth,
        )
    }

    /// Per-loan fraction of value reborn as synthetic capital, `(O - I) * T`.
    pub fn coupling(&self) -> f64 {
        (self.origination - self.insurance) * self.tranche
    }

    pub fn factors(&self) -> DerivedFactors {
        DerivedFactors {
            geometric_sum: geometric_sum(self.reserve, self.iterations)
                .expect("validated params always have a valid geometric sum"),
            coupling: self.coupling(),
        }
    }
}

/// The two numbers the nested multiplier actually depends on.
///
/// `geometric_sum` is `A = sum_{i=1..n} (1-R)^i`, the loans generated by one
/// unit of capital within a single level; `coupling` is `c = (O-I)*T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedFactors {
    pub geometric_sum: f64,
    pub coupling: f64,
}

impl DerivedFactors {
    /// One step of the level recurrence, `m_j = A * (1 + c * m_{j-1})`.
    #[inline]
    pub fn step(&self, previous: f64) -> f64 {
        self.geometric_sum * (1.0 + self.coupling * previous)
    }

    /// Asymptotic ratio between consecutive levels, `A * c`.
    pub fn growth_ratio(&self) -> f64 {
        self.geometric_sum * self.coupling
    }
}

/// Range of iterations whose loans are left uninsured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkipSpec {
    start: u32,
    limit: u32,
}

impl SkipSpec {
    pub fn new(start: u32, limit: u32) -> Result<Self> {
        check_count("skip start", start)?;
        if start > limit {
            return Err(Error::domain(
                "skip limit",
                format!("limit {limit} is below start {start}"),
            ));
        }
        Ok(SkipSpec { start, limit })
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn limit(&self) -> u32 {
        self.limit
    }
}
