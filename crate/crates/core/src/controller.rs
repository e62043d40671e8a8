//! The treadmill support controller: four boundary-distance inputs, two
//! steering outputs, and the ten-rule base shipped in `assets/`.
//!
//! Geometry: `x` grows from the left boundary to the right, `y` from the rear
//! boundary to the front. Each input is the distance from the patient to one
//! boundary. Each output lives on `[0, 500]` with 250 meaning "no push";
//! lower `steer_x` pushes left, higher pushes right, and likewise lower
//! `steer_y` pushes toward the rear, higher toward the front.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsl::{parse_rule_file, RuleFileError, SymbolTable};
use crate::fuzzy::{FuzzyError, LinguisticVariable, MamdaniEngine, MembershipFunction, Universe};

/// The ten support rules, one per line.
pub const TREADMILL_RULES: &str = include_str!("../assets/treadmill_rules.txt");

pub const UNIVERSE_MAX: f64 = 500.0;
pub const NEUTRAL: f64 = 250.0;
pub const DEFAULT_GAIN: f64 = 6.0;

pub const LATERAL: &str = "steer_x";
pub const LONGITUDINAL: &str = "steer_y";
const INPUT_NAMES: [&str; 4] = ["front", "rear", "left", "right"];

// Output terms are shoulders over the outer quarter of the universe. With
// full-width ramps the centroid cannot move far enough from 250 for the
// correction to outrun a walking patient (see README).
const OUTPUT_SHOULDER: f64 = 125.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ControllerError {
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error(transparent)]
    Rules(#[from] RuleFileError),
    #[error("engine does not have the treadmill shape: {0}")]
    EngineShape(String),
    #[error("gain must be positive and finite, got {0}")]
    InvalidGain(f64),
    #[error("track bounds must be positive, got {width} x {depth}")]
    InvalidBounds { width: f64, depth: f64 },
    #[error("surface resolution must be at least 2, got {0}")]
    Resolution(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackBounds {
    width: f64,
    depth: f64,
}

impl TrackBounds {
    pub fn new(width: f64, depth: f64) -> Result<Self, ControllerError> {
        if width.is_finite() && depth.is_finite() && width > 0.0 && depth > 0.0 {
            Ok(Self { width, depth })
        } else {
            Err(ControllerError::InvalidBounds { width, depth })
        }
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn contains(&self, pos: PatientPosition) -> bool {
        (0.0..=self.width).contains(&pos.x) && (0.0..=self.depth).contains(&pos.y)
    }
}

impl Default for TrackBounds {
    fn default() -> Self {
        Self { width: 500.0, depth: 500.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatientPosition {
    pub x: f64,
    pub y: f64,
}

impl PatientPosition {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryDistances {
    pub front: f64,
    pub rear: f64,
    pub left: f64,
    pub right: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteeringCommand {
    pub steer_x: f64,
    pub steer_y: f64,
}

impl SteeringCommand {
    pub const NEUTRAL: Self = Self { steer_x: NEUTRAL, steer_y: NEUTRAL };
}

/// Displacement applied by the support belt in one tick, in track units.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CorrectionVector {
    pub cx: f64,
    pub cy: f64,
}

/// One cell of the controller's response surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub x: f64,
    pub y: f64,
    pub steer_x: f64,
    pub steer_y: f64,
}

/// Distances to each boundary, clamped to `[0, span]`.
pub fn distances_from_position(pos: PatientPosition, bounds: TrackBounds) -> BoundaryDistances {
    let (w, d) = (bounds.width, bounds.depth);
    BoundaryDistances {
        front: (d - pos.y).clamp(0.0, d),
        rear: pos.y.clamp(0.0, d),
        left: pos.x.clamp(0.0, w),
        right: (w - pos.x).clamp(0.0, w),
    }
}

/// `front`, `rear`, `left`, `right` on `[0, 500]`, each with complementary
/// `near`/`far` ramps.
pub fn treadmill_inputs() -> Vec<LinguisticVariable> {
    let universe = Universe::new(0.0, UNIVERSE_MAX).expect("static universe");
    INPUT_NAMES
        .iter()
        .map(|name| {
            LinguisticVariable::new(
                *name,
                universe,
                [
                    ("near", MembershipFunction::RampDown { a: 0.0, b: UNIVERSE_MAX }),
                    ("far", MembershipFunction::RampUp { a: 0.0, b: UNIVERSE_MAX }),
                ],
            )
            .expect("static input variable")
        })
        .collect()
}

/// `steer_x` (`left`, `right`) and `steer_y` (`rear`, `front`).
pub fn treadmill_outputs() -> Vec<LinguisticVariable> {
    let universe = Universe::new(0.0, UNIVERSE_MAX).expect("static universe");
    let low = MembershipFunction::RampDown { a: 0.0, b: OUTPUT_SHOULDER };
    let high = MembershipFunction::RampUp { a: UNIVERSE_MAX - OUTPUT_SHOULDER, b: UNIVERSE_MAX };
    vec![
        LinguisticVariable::new(LATERAL, universe, [("left", low), ("right", high)]).expect("static output"),
        LinguisticVariable::new(LONGITUDINAL, universe, [("rear", low), ("front", high)]).expect("static output"),
    ]
}

pub fn treadmill_symbols() -> SymbolTable {
    SymbolTable::from_variables(&treadmill_inputs(), LATERAL, LONGITUDINAL)
}

/// Builds a treadmill engine from rule-file text.
pub fn engine_from_rules(text: &str) -> Result<MamdaniEngine, ControllerError> {
    let rules = parse_rule_file(text, &treadmill_symbols())?;
    Ok(MamdaniEngine::new(treadmill_inputs(), treadmill_outputs(), rules)?)
}

pub fn default_paper_controller() -> MamdaniEngine {
    engine_from_rules(TREADMILL_RULES).expect("shipped rule file is valid")
}

/// Evaluates the engine on boundary distances.
pub fn steer(engine: &MamdaniEngine, d: &BoundaryDistances) -> Result<SteeringCommand, ControllerError> {
    if engine.inputs().len() != INPUT_NAMES.len() {
        return Err(ControllerError::EngineShape(format!("{} inputs, expected 4", engine.inputs().len())));
    }
    let mut values = [0.0; 4];
    for (name, value) in INPUT_NAMES.iter().zip([d.front, d.rear, d.left, d.right]) {
        let i =
            engine.input_index(name).ok_or_else(|| ControllerError::EngineShape(format!("missing input `{name}`")))?;
        values[i] = value;
    }
    let index = |name: &str| {
        engine.output_index(name).ok_or_else(|| ControllerError::EngineShape(format!("missing output `{name}`")))
    };
    let (ix, iy) = (index(LATERAL)?, index(LONGITUDINAL)?);
    let out = engine.evaluate_ordered(&values)?;
    Ok(SteeringCommand { steer_x: out[ix], steer_y: out[iy] })
}

/// Linear map of the steering offset from neutral onto `[-gain, gain]`.
pub fn command_to_correction(cmd: SteeringCommand, gain: f64) -> Result<CorrectionVector, ControllerError> {
    if !(gain.is_finite() && gain > 0.0) {
        return Err(ControllerError::InvalidGain(gain));
    }
    Ok(CorrectionVector { cx: gain * (cmd.steer_x - NEUTRAL) / NEUTRAL, cy: gain * (cmd.steer_y - NEUTRAL) / NEUTRAL })
}

/// Steering over a `resolution` × `resolution` grid spanning the track, row
/// major with `y` outer and `x` inner.
pub fn surface_grid(
    engine: &MamdaniEngine,
    bounds: TrackBounds,
    resolution: usize,
) -> Result<Vec<SurfacePoint>, ControllerError> {
    if resolution < 2 {
        return Err(ControllerError::Resolution(resolution));
    }
    let coord = |span: f64, i: usize| span * i as f64 / (resolution - 1) as f64;
    let mut grid = Vec::with_capacity(resolution * resolution);
    for j in 0..resolution {
        let y = coord(bounds.depth, j);
        for i in 0..resolution {
            let x = coord(bounds.width, i);
            let cmd = steer(engine, &distances_from_position(PatientPosition::new(x, y), bounds))?;
            grid.push(SurfacePoint { x, y, steer_x: cmd.steer_x, steer_y: cmd.steer_y });
        }
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn near(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1.0
    }

    #[test]
    fn distance_examples() {
        let b = TrackBounds::default();
        let d = distances_from_position(PatientPosition::new(250.0, 250.0), b);
        assert_eq!(d, BoundaryDistances { front: 250.0, rear: 250.0, left: 250.0, right: 250.0 });
        let d = distances_from_position(PatientPosition::new(0.0, 0.0), b);
        assert_eq!(d, BoundaryDistances { front: 500.0, rear: 0.0, left: 0.0, right: 500.0 });
        let d = distances_from_position(PatientPosition::new(600.0, 250.0), b);
        assert_eq!(d, BoundaryDistances { front: 250.0, rear: 250.0, left: 500.0, right: 0.0 });
    }

    #[test]
    fn default_engine_shape() {
        let e = default_paper_controller();
        assert_eq!(e.inputs().len(), 4);
        assert_eq!(e.outputs().len(), 2);
        assert_eq!(e.rule_base().len(), 10);
        let consequents: Vec<usize> = e.rule_base().rules().iter().map(|r| r.consequent().len()).collect();
        assert_eq!(consequents, [1, 1, 2, 2, 2, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn steering_examples() {
        let e = default_paper_controller();
        let center = steer(&e, &BoundaryDistances { front: 250.0, rear: 250.0, left: 250.0, right: 250.0 }).unwrap();
        assert!(near(center.steer_x, 250.0) && near(center.steer_y, 250.0), "{center:?}");

        let rear_edge = steer(&e, &BoundaryDistances { front: 500.0, rear: 0.0, left: 250.0, right: 250.0 }).unwrap();
        assert!(rear_edge.steer_y > 300.0 && near(rear_edge.steer_x, 250.0), "{rear_edge:?}");

        let quadrant = steer(&e, &BoundaryDistances { front: 400.0, rear: 100.0, left: 400.0, right: 100.0 }).unwrap();
        assert!(quadrant.steer_x < 250.0 && quadrant.steer_y > 250.0, "{quadrant:?}");
    }

    #[test]
    fn steer_rejects_foreign_engines() {
        let inputs = treadmill_inputs();
        let outputs = treadmill_outputs();
        let rules = crate::fuzzy::RuleBase::new(vec![crate::fuzzy::FuzzyRule::new(
            vec![crate::fuzzy::FuzzyClause::new("front", "far")],
            vec![crate::fuzzy::FuzzyClause::new("steer_y", "front")],
        )
        .unwrap()])
        .unwrap();
        let three = MamdaniEngine::new(inputs[..3].to_vec(), outputs, rules).unwrap();
        let d = BoundaryDistances { front: 1.0, rear: 1.0, left: 1.0, right: 1.0 };
        assert!(matches!(steer(&three, &d), Err(ControllerError::EngineShape(_))));
    }

    #[test]
    fn correction_examples() {
        let c = command_to_correction(SteeringCommand::NEUTRAL, 6.0).unwrap();
        assert_eq!(c, CorrectionVector { cx: 0.0, cy: 0.0 });
        let c = command_to_correction(SteeringCommand { steer_x: 500.0, steer_y: 250.0 }, 6.0).unwrap();
        assert_eq!(c, CorrectionVector { cx: 6.0, cy: 0.0 });
        let c = command_to_correction(SteeringCommand { steer_x: 250.0, steer_y: 375.0 }, 4.0).unwrap();
        assert_eq!(c, CorrectionVector { cx: 0.0, cy: 2.0 });
        for bad in [0.0, -1.0, f64::NAN] {
            assert!(command_to_correction(SteeringCommand::NEUTRAL, bad).is_err());
        }
    }

    #[test]
    fn surface_grid_layout() {
        let e = default_paper_controller();
        let g = surface_grid(&e, TrackBounds::default(), 2).unwrap();
        let corners: Vec<(f64, f64)> = g.iter().map(|p| (p.x, p.y)).collect();
        assert_eq!(corners, [(0.0, 0.0), (500.0, 0.0), (0.0, 500.0), (500.0, 500.0)]);

        let g = surface_grid(&e, TrackBounds::default(), 5).unwrap();
        let mid = g[2 * 5 + 2];
        assert_eq!((mid.x, mid.y), (250.0, 250.0));
        assert!(near(mid.steer_x, 250.0) && near(mid.steer_y, 250.0));
        assert!(surface_grid(&e, TrackBounds::default(), 1).is_err());
    }

    #[test]
    fn bounds_validation() {
        assert!(TrackBounds::new(0.0, 500.0).is_err());
        assert!(TrackBounds::new(500.0, -1.0).is_err());
        assert!(TrackBounds::new(300.0, 200.0).is_ok());
    }
}
