use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SimError;
use crate::controller::{PatientPosition, TrackBounds};

/// Ordered waypoints a simulated patient walks toward.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackPath {
    waypoints: Vec<PatientPosition>,
}

impl TrackPath {
    pub fn new(waypoints: Vec<PatientPosition>) -> Result<Self, SimError> {
        if waypoints.len() < 2 {
            return Err(SimError::Track(format!("need at least 2 waypoints, got {}", waypoints.len())));
        }
        if let Some(p) = waypoints.iter().find(|p| !(p.x.is_finite() && p.y.is_finite())) {
            return Err(SimError::Track(format!("non-finite waypoint ({}, {})", p.x, p.y)));
        }
        if let Some(i) = waypoints.windows(2).position(|w| w[0] == w[1]) {
            return Err(SimError::Track(format!("waypoints {} and {} coincide", i, i + 1)));
        }
        Ok(Self { waypoints })
    }

    pub fn waypoints(&self) -> &[PatientPosition] {
        &self.waypoints
    }

    pub fn len(&self) -> usize {
        self.waypoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waypoints.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrackKind {
    /// Straight walk from the center out through the right boundary.
    DriftOut,
    /// Rectangular circuit inset from every boundary.
    Lap,
    /// Legs alternating between the left and right insets while advancing
    /// toward the front.
    Zigzag,
}

impl TrackKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::DriftOut => "drift_out",
            Self::Lap => "lap",
            Self::Zigzag => "zigzag",
        }
    }
}

impl fmt::Display for TrackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TrackKind {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "drift_out" => Ok(Self::DriftOut),
            "lap" => Ok(Self::Lap),
            "zigzag" => Ok(Self::Zigzag),
            other => Err(SimError::Track(format!("unknown track kind `{other}`"))),
        }
    }
}

const INSET: f64 = 60.0;
const OVERSHOOT: f64 = 20.0;
const ZIGZAG_LEGS: usize = 8;
const ZIGZAG_ADVANCE: f64 = 50.0;

/// Builds one of the stand-in tracks. Every kind is fully determined by its
/// geometry, so `seed` does not change the result.
pub fn generate_dummy_track(kind: TrackKind, bounds: TrackBounds, _seed: u64) -> TrackPath {
    let (w, d) = (bounds.width(), bounds.depth());
    let p = PatientPosition::new;
    let waypoints = match kind {
        TrackKind::DriftOut => vec![p(w / 2.0, d / 2.0), p(w + OVERSHOOT, d / 2.0)],
        TrackKind::Lap => vec![
            p(w / 2.0, INSET),
            p(w - INSET, INSET),
            p(w - INSET, d - INSET),
            p(INSET, d - INSET),
            p(INSET, INSET),
            p(w / 2.0, INSET),
        ],
        TrackKind::Zigzag => (0..ZIGZAG_LEGS)
            .map(|k| {
                let x = if k % 2 == 0 { INSET } else { w - INSET };
                p(x, INSET + ZIGZAG_ADVANCE * k as f64)
            })
            .collect(),
    };
    TrackPath::new(waypoints).expect("generated tracks are well formed")
}
