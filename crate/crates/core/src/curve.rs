use serde::{Deserialize, Serialize};

/// One point of a multiplier curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub level: u32,
    pub multiplier: f64,
}

/// Multiplier as a function of iteration count or nesting level.
///
/// Levels always run `1, 2, ..., len` with no gaps.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MultiplierCurve {
    points: Vec<CurvePoint>,
}

impl MultiplierCurve {
    /// Builds a curve whose j-th value (0-based) sits at level `j + 1`.
    pub fn from_values<I: IntoIterator<Item = f64>>(values: I) -> Self {
        let points = values
            .into_iter()
            .zip(1u32..)
            .map(|(multiplier, level)| CurvePoint { level, multiplier })
            .collect();
        MultiplierCurve { points }
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.multiplier)
    }

    /// Multiplier at `level` (1-based), if present.
    pub fn at(&self, level: u32) -> Option<f64> {
        level
            .checked_sub(1)
            .and_then(|i| self.points.get(i as usize))
            .map(|p| p.multiplier)
    }

    pub fn last(&self) -> Option<f64> {
        self.points.last().map(|p| p.multiplier)
    }

    /// Adds `delta` to every value; used to count the initial deposit.
    pub fn shifted(mut self, delta: f64) -> Self {
        for p in &mut self.points {
            p.multiplier += delta;
        }
        self
    }
}
