use serde::{Deserialize, Serialize};

use super::FuzzyError;

/// Piecewise-linear membership shapes.
///
/// Breakpoints are in the units of the owning variable's universe and must be
/// nondecreasing. Every shape maps any real input to a grade in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum MembershipFunction {
    /// 0 at or below `a`, 1 at or above `b`.
    RampUp {
        a: f64,
        b: f64,
    },
    /// 1 at or below `a`, 0 at or above `b`.
    RampDown {
        a: f64,
        b: f64,
    },
    Triangle {
        a: f64,
        b: f64,
        c: f64,
    },
    Trapezoid {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    },
}

impl MembershipFunction {
    pub fn ramp_up(a: f64, b: f64) -> Result<Self, FuzzyError> {
        Self::RampUp { a, b }.validated()
    }

    pub fn ramp_down(a: f64, b: f64) -> Result<Self, FuzzyError> {
        Self::RampDown { a, b }.validated()
    }

    pub fn triangle(a: f64, b: f64, c: f64) -> Result<Self, FuzzyError> {
        Self::Triangle { a, b, c }.validated()
    }

    pub fn trapezoid(a: f64, b: f64, c: f64, d: f64) -> Result<Self, FuzzyError> {
        Self::Trapezoid { a, b, c, d }.validated()
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            Self::RampUp { a, b } | Self::RampDown { a, b } => vec![a, b],
            Self::Triangle { a, b, c } => vec![a, b, c],
            Self::Trapezoid { a, b, c, d } => vec![a, b, c, d],
        }
    }

    /// Checks that breakpoints are finite, nondecreasing and span a
    /// nonempty interval.
    pub fn validated(self) -> Result<Self, FuzzyError> {
        let points = self.breakpoints();
        let ordered = points.windows(2).all(|w| w[0] <= w[1]);
        let finite = points.iter().all(|p| p.is_finite());
        let spans = points.first() < points.last();
        if finite && ordered && spans {
            Ok(self)
        } else {
            Err(FuzzyError::InvalidShape(format!("{self:?}")))
        }
    }

    pub fn grade(&self, x: f64) -> f64 {
        match *self {
            Self::RampUp { a, b } => rising(x, a, b),
            Self::RampDown { a, b } => falling(x, a, b),
            Self::Triangle { a, b, c } => rising(x, a, b).min(falling(x, b, c)),
            Self::Trapezoid { a, b, c, d } => rising(x, a, b).min(falling(x, c, d)),
        }
    }
}

// Zero-width edges are steps that include the plateau end point.
fn rising(x: f64, lo: f64, hi: f64) -> f64 {
    if x < lo {
        0.0
    } else if x >= hi {
        1.0
    } else {
        (x - lo) / (hi - lo)
    }
}

fn falling(x: f64, lo: f64, hi: f64) -> f64 {
    if x <= lo {
        1.0
    } else if x > hi {
        0.0
    } else {
        (hi - x) / (hi - lo)
    }
}
