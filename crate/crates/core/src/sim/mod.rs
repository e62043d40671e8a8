//! Closed-loop patient simulation on the treadmill field.
//!
//! Each tick: observe the position (distances, steering, correction), record
//! it, compute the patient's walking intent, apply intent plus correction, and
//! stop if the new position has left the field.

mod rng;
mod track;

pub use rng::SplitMix64;
pub use track::{generate_dummy_track, TrackKind, TrackPath};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::controller::{
    command_to_correction, default_paper_controller, distances_from_position, steer, ControllerError, CorrectionVector,
    PatientPosition, SteeringCommand, TrackBounds, DEFAULT_GAIN,
};
use crate::fuzzy::MamdaniEngine;

pub const DEFAULT_STEPS: usize = 1000;
pub const DEFAULT_SPEED: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("invalid track: {0}")]
    Track(String),
    #[error(transparent)]
    Controller(#[from] ControllerError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub bounds: TrackBounds,
    pub path: TrackPath,
    pub steps: usize,
    /// Walking speed in track units per tick.
    pub speed: f64,
    /// Per-axis standard deviation of the intent noise.
    pub noise_sigma: f64,
    pub seed: u64,
    pub controller_enabled: bool,
    pub gain: f64,
}

impl SimulationConfig {
    pub fn new(path: TrackPath) -> Self {
        Self {
            bounds: TrackBounds::default(),
            path,
            steps: DEFAULT_STEPS,
            speed: DEFAULT_SPEED,
            noise_sigma: 0.0,
            seed: 0,
            controller_enabled: true,
            gain: DEFAULT_GAIN,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |msg: String| Err(SimError::InvalidConfig(msg));
        if self.steps == 0 {
            return bad("steps must be at least 1".into());
        }
        if !(self.speed.is_finite() && self.speed > 0.0) {
            return bad(format!("speed must be positive, got {}", self.speed));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return bad(format!("noise sigma must be non-negative, got {}", self.noise_sigma));
        }
        if !(self.gain.is_finite() && self.gain > 0.0) {
            return bad(format!("gain must be positive, got {}", self.gain));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatientState {
    pub position: PatientPosition,
    pub waypoint_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TrackStatus {
    Ok,
    OffTrack,
}

impl TrackStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ok => "OK",
            Self::OffTrack => "OFF_TRACK",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub step: usize,
    pub x: f64,
    pub y: f64,
    pub d_front: f64,
    pub d_rear: f64,
    pub d_left: f64,
    pub d_right: f64,
    pub steer_x: f64,
    pub steer_y: f64,
    pub cx: f64,
    pub cy: f64,
    pub status: TrackStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimulationResult {
    Completed,
    OffTrack { step: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationOutcome {
    pub result: SimulationResult,
    pub trace: Vec<TraceRecord>,
}

/// Moves the waypoint cursor past every waypoint within `speed` of the
/// current position, stopping at the last one.
fn advance_waypoint(state: &mut PatientState, path: &TrackPath, speed: f64) {
    let last = path.len() - 1;
    while state.waypoint_index < last && distance(state.position, path.waypoints()[state.waypoint_index]) <= speed {
        state.waypoint_index += 1;
    }
}

fn distance(a: PatientPosition, b: PatientPosition) -> f64 {
    (b.x - a.x).hypot(b.y - a.y)
}

/// Walking intent for this tick: `speed` toward the current waypoint plus
/// Gaussian noise. Once the final waypoint is within `speed`, only the noise
/// remains. Noise is drawn (x first, then y) only when `noise_sigma > 0`.
pub fn intent_velocity(
    state: &mut PatientState,
    path: &TrackPath,
    speed: f64,
    noise_sigma: f64,
    rng: &mut SplitMix64,
) -> (f64, f64) {
    advance_waypoint(state, path, speed);
    let target = path.waypoints()[state.waypoint_index];
    let dist = distance(state.position, target);
    let (mut vx, mut vy) = if state.waypoint_index == path.len() - 1 && dist <= speed {
        (0.0, 0.0)
    } else {
        (speed * (target.x - state.position.x) / dist, speed * (target.y - state.position.y) / dist)
    };
    if noise_sigma > 0.0 {
        vx += noise_sigma * rng.next_normal();
        vy += noise_sigma * rng.next_normal();
    }
    (vx, vy)
}

/// Additive position update; waypoint bookkeeping happens in
/// [`intent_velocity`].
pub fn step(state: PatientState, intent: (f64, f64), correction: CorrectionVector) -> PatientState {
    PatientState {
        position: PatientPosition::new(
            state.position.x + intent.0 + correction.cx,
            state.position.y + intent.1 + correction.cy,
        ),
        waypoint_index: state.waypoint_index,
    }
}

pub fn run_simulation(config: &SimulationConfig) -> Result<SimulationOutcome, SimError> {
    run_simulation_with(config, &default_paper_controller())
}

/// Runs the loop with a caller-supplied treadmill engine.
pub fn run_simulation_with(config: &SimulationConfig, engine: &MamdaniEngine) -> Result<SimulationOutcome, SimError> {
    config.validate()?;
    let observe =
        |step: usize, pos: PatientPosition, status: TrackStatus| -> Result<(TraceRecord, CorrectionVector), SimError> {
            let d = distances_from_position(pos, config.bounds);
            let (cmd, correction) = if config.controller_enabled {
                let cmd = steer(engine, &d)?;
                (cmd, command_to_correction(cmd, config.gain)?)
            } else {
                (SteeringCommand::NEUTRAL, CorrectionVector::default())
            };
            let record = TraceRecord {
                step,
                x: pos.x,
                y: pos.y,
                d_front: d.front,
                d_rear: d.rear,
                d_left: d.left,
                d_right: d.right,
                steer_x: cmd.steer_x,
                steer_y: cmd.steer_y,
                cx: correction.cx,
                cy: correction.cy,
                status,
            };
            Ok((record, correction))
        };

    let mut state = PatientState { position: config.path.waypoints()[0], waypoint_index: 0 };
    let mut rng = SplitMix64::new(config.seed);
    let mut trace = Vec::with_capacity(config.steps + 1);

    if !config.bounds.contains(state.position) {
        trace.push(observe(0, state.position, TrackStatus::OffTrack)?.0);
        return Ok(SimulationOutcome { result: SimulationResult::OffTrack { step: 0 }, trace });
    }

    for k in 0..config.steps {
        let (record, correction) = observe(k, state.position, TrackStatus::Ok)?;
        trace.push(record);
        let intent = intent_velocity(&mut state, &config.path, config.speed, config.noise_sigma, &mut rng);
        state = step(state, intent, correction);
        if !config.bounds.contains(state.position) {
            trace.push(observe(k + 1, state.position, TrackStatus::OffTrack)?.0);
            return Ok(SimulationOutcome { result: SimulationResult::OffTrack { step: k + 1 }, trace });
        }
    }
    trace.push(observe(config.steps, state.position, TrackStatus::Ok)?.0);
    Ok(SimulationOutcome { result: SimulationResult::Completed, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(x: f64, y: f64, i: usize) -> PatientState {
        PatientState { position: PatientPosition::new(x, y), waypoint_index: i }
    }

    fn path(points: &[(f64, f64)]) -> TrackPath {
        TrackPath::new(points.iter().map(|&(x, y)| PatientPosition::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn intent_points_at_waypoint() {
        let p = path(&[(250.0, 250.0), (250.0, 450.0)]);
        let mut s = state(250.0, 250.0, 1);
        let mut rng = SplitMix64::new(0);
        assert_eq!(intent_velocity(&mut s, &p, 4.0, 0.0, &mut rng), (0.0, 4.0));
        assert_eq!(intent_velocity(&mut s, &p, 4.0, 0.0, &mut rng), (0.0, 4.0));
    }

    #[test]
    fn arrival_advances_to_next_waypoint() {
        let p = path(&[(250.0, 250.0), (450.0, 250.0), (450.0, 450.0)]);
        let mut s = state(450.0, 250.0, 1);
        let v = intent_velocity(&mut s, &p, 4.0, 0.0, &mut SplitMix64::new(0));
        assert_eq!(s.waypoint_index, 2);
        assert_eq!(v, (0.0, 4.0));
    }

    #[test]
    fn final_waypoint_leaves_only_noise() {
        let p = path(&[(0.0, 0.0), (10.0, 0.0)]);
        let mut s = state(9.0, 0.0, 1);
        assert_eq!(intent_velocity(&mut s, &p, 4.0, 0.0, &mut SplitMix64::new(0)), (0.0, 0.0));
        let noisy = intent_velocity(&mut s, &p, 4.0, 1.0, &mut SplitMix64::new(5));
        let mut rng = SplitMix64::new(5);
        assert_eq!(noisy, (rng.next_normal(), rng.next_normal()));
    }

    #[test]
    fn step_is_additive() {
        let s = step(state(250.0, 250.0, 0), (0.0, 4.0), CorrectionVector::default());
        assert_eq!(s.position, PatientPosition::new(250.0, 254.0));
        let s = step(state(498.0, 250.0, 0), (4.0, 0.0), CorrectionVector { cx: -6.0, cy: 0.0 });
        assert_eq!(s.position, PatientPosition::new(496.0, 250.0));
    }

    #[test]
    fn config_validation() {
        let base = SimulationConfig::new(generate_dummy_track(TrackKind::Lap, TrackBounds::default(), 0));
        assert!(base.validate().is_ok());
        for broken in [
            SimulationConfig { steps: 0, ..base.clone() },
            SimulationConfig { speed: 0.0, ..base.clone() },
            SimulationConfig { noise_sigma: -1.0, ..base.clone() },
            SimulationConfig { gain: 0.0, ..base.clone() },
        ] {
            assert!(matches!(run_simulation(&broken), Err(SimError::InvalidConfig(_))));
        }
    }

    #[test]
    fn single_step_trace() {
        let cfg = SimulationConfig {
            steps: 1,
            ..SimulationConfig::new(generate_dummy_track(TrackKind::Lap, TrackBounds::default(), 0))
        };
        let out = run_simulation(&cfg).unwrap();
        assert_eq!(out.result, SimulationResult::Completed);
        assert_eq!(out.trace.len(), 2);
        assert_eq!(out.trace[1].step, 1);
    }

    #[test]
    fn start_outside_field_is_immediately_off_track() {
        let cfg = SimulationConfig::new(path(&[(-5.0, 10.0), (100.0, 100.0)]));
        let out = run_simulation(&cfg).unwrap();
        assert_eq!(out.result, SimulationResult::OffTrack { step: 0 });
        assert_eq!(out.trace.len(), 1);
        assert_eq!(out.trace[0].status, TrackStatus::OffTrack);
    }
}
