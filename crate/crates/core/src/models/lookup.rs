use serde::{Deserialize, Serialize};

use crate::model::ModelError;

/// Piecewise-linear lookup with clamped extrapolation.
///
/// Serialized as an array of `[abscissa, value]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct Lookup1d {
    knots: Vec<(f64, f64)>,
}

impl Lookup1d {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self, ModelError> {
        if knots.len() < 2 {
            return Err(ModelError::InvalidTable(
                "a lookup table needs at least two knots".into(),
            ));
        }
        if knots.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(ModelError::InvalidTable("non-finite knot".into()));
        }
        if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(ModelError::InvalidTable(
                "abscissa must be strictly increasing".into(),
            ));
        }
        Ok(Lookup1d { knots })
    }

    /// A two-knot table returning `value` everywhere.
    pub fn constant(value: f64) -> Self {
        Lookup1d {
            knots: vec![(0.0, value), (1.0, value)],
        }
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn eval(&self, x: f64) -> f64 {
        let first = self.knots[0];
        let last = self.knots[self.knots.len() - 1];
        if x <= first.0 {
            return first.1;
        }
        if x >= last.0 {
            return last.1;
        }
        let hi = self.knots.partition_point(|&(k, _)| k <= x);
        let (x0, y0) = self.knots[hi - 1];
        let (x1, y1) = self.knots[hi];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

impl TryFrom<Vec<(f64, f64)>> for Lookup1d {
    type Error = ModelError;

    fn try_from(knots: Vec<(f64, f64)>) -> Result<Self, Self::Error> {
        Lookup1d::new(knots)
    }
}

impl From<Lookup1d> for Vec<(f64, f64)> {
    fn from(table: Lookup1d) -> Self {
        table.knots
    }
}
