//! C ABI over the treadmill controller and simulator.
//!
//! Engines and traces are opaque heap handles owned by the caller and released
//! with the matching `*_free` function. Fallible calls return an [`FhStatus`];
//! on failure [`fh_last_error`] describes the problem for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fuzzy_harness::controller::{
    command_to_correction, default_paper_controller, distances_from_position, engine_from_rules, steer,
    BoundaryDistances, PatientPosition, SteeringCommand, TrackBounds,
};
use fuzzy_harness::fuzzy::MamdaniEngine;
use fuzzy_harness::sim::{
    generate_dummy_track, run_simulation_with, SimulationConfig, SimulationOutcome, SimulationResult, TrackKind,
    TrackPath, TrackStatus,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    Utf8Error = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FhTrackKind {
    DriftOut = 0,
    Lap = 1,
    Zigzag = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FhDistances {
    pub front: f64,
    pub rear: f64,
    pub left: f64,
    pub right: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FhSteering {
    pub steer_x: f64,
    pub steer_y: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FhCorrection {
    pub cx: f64,
    pub cy: f64,
}

/// Simulation parameters. Start from [`fh_sim_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FhSimConfig {
    /// One of the `FhTrackKind` values.
    pub track: u32,
    pub steps: usize,
    pub speed: f64,
    pub noise_sigma: f64,
    pub seed: u64,
    pub controller_enabled: bool,
    pub gain: f64,
}

/// One trace row. `off_track` is nonzero on the record that left the field.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FhTraceRecord {
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
    pub off_track: bool,
}

/// Opaque treadmill engine.
pub struct FhEngine {
    inner: MamdaniEngine,
}

/// Opaque simulation result.
pub struct FhTrace {
    inner: SimulationOutcome,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(status: FhStatus, msg: impl Into<String>) -> FhStatus {
    set_error(msg);
    status
}

fn guarded(f: impl FnOnce() -> FhStatus) -> FhStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(FhStatus::Panic, "internal panic"))
}

/// Message for the last failed call on this thread. Valid until the next
/// failing call on the same thread; empty if nothing has failed.
#[no_mangle]
pub extern "C" fn fh_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Engine with the built-in ten-rule base. Never null.
#[no_mangle]
pub extern "C" fn fh_engine_new_default() -> *mut FhEngine {
    Box::into_raw(Box::new(FhEngine { inner: default_paper_controller() }))
}

/// Builds an engine from NUL-terminated rule-file text.
///
/// # Safety
/// `rules` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fh_engine_from_rules(rules: *const c_char, out: *mut *mut FhEngine) -> FhStatus {
    guarded(|| {
        if rules.is_null() || out.is_null() {
            return fail(FhStatus::NullPointer, "null argument");
        }
        let Ok(text) = CStr::from_ptr(rules).to_str() else {
            return fail(FhStatus::Utf8Error, "rules are not valid UTF-8");
        };
        match engine_from_rules(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(FhEngine { inner }));
                FhStatus::Ok
            }
            Err(e) => fail(FhStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `engine` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fh_engine_free(engine: *mut FhEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// # Safety
/// `engine` must be a live engine handle or null.
#[no_mangle]
pub unsafe extern "C" fn fh_engine_rule_count(engine: *const FhEngine) -> usize {
    engine.as_ref().map_or(0, |e| e.inner.rule_base().len())
}

/// # Safety
/// `engine` must be a live engine handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fh_engine_steer(
    engine: *const FhEngine,
    distances: FhDistances,
    out: *mut FhSteering,
) -> FhStatus {
    guarded(|| {
        let (Some(engine), false) = (engine.as_ref(), out.is_null()) else {
            return fail(FhStatus::NullPointer, "null argument");
        };
        let d = BoundaryDistances {
            front: distances.front,
            rear: distances.rear,
            left: distances.left,
            right: distances.right,
        };
        match steer(&engine.inner, &d) {
            Ok(cmd) => {
                *out = FhSteering { steer_x: cmd.steer_x, steer_y: cmd.steer_y };
                FhStatus::Ok
            }
            Err(e) => fail(FhStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Steering for a position on the default 500 × 500 field.
///
/// # Safety
/// `engine` must be a live engine handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fh_engine_steer_position(
    engine: *const FhEngine,
    x: f64,
    y: f64,
    out: *mut FhSteering,
) -> FhStatus {
    let d = distances_from_position(PatientPosition::new(x, y), TrackBounds::default());
    fh_engine_steer(engine, FhDistances { front: d.front, rear: d.rear, left: d.left, right: d.right }, out)
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fh_command_to_correction(steering: FhSteering, gain: f64, out: *mut FhCorrection) -> FhStatus {
    guarded(|| {
        if out.is_null() {
            return fail(FhStatus::NullPointer, "null argument");
        }
        let cmd = SteeringCommand { steer_x: steering.steer_x, steer_y: steering.steer_y };
        match command_to_correction(cmd, gain) {
            Ok(c) => {
                *out = FhCorrection { cx: c.cx, cy: c.cy };
                FhStatus::Ok
            }
            Err(e) => fail(FhStatus::InvalidArgument, e.to_string()),
        }
    })
}

#[no_mangle]
pub extern "C" fn fh_sim_config_default() -> FhSimConfig {
    let d = SimulationConfig::new(generate_dummy_track(TrackKind::DriftOut, TrackBounds::default(), 0));
    FhSimConfig {
        track: FhTrackKind::DriftOut as u32,
        steps: d.steps,
        speed: d.speed,
        noise_sigma: d.noise_sigma,
        seed: d.seed,
        controller_enabled: d.controller_enabled,
        gain: d.gain,
    }
}

unsafe fn simulate(
    engine: *const FhEngine,
    config: *const FhSimConfig,
    path: Option<TrackPath>,
    out: *mut *mut FhTrace,
) -> FhStatus {
    let Some(cfg) = config.as_ref() else {
        return fail(FhStatus::NullPointer, "null config");
    };
    if out.is_null() {
        return fail(FhStatus::NullPointer, "null output");
    }
    let bounds = TrackBounds::default();
    let path = match path {
        Some(p) => p,
        None => {
            let kind = match cfg.track {
                t if t == FhTrackKind::DriftOut as u32 => TrackKind::DriftOut,
                t if t == FhTrackKind::Lap as u32 => TrackKind::Lap,
                t if t == FhTrackKind::Zigzag as u32 => TrackKind::Zigzag,
                other => return fail(FhStatus::InvalidArgument, format!("unknown track kind {other}")),
            };
            generate_dummy_track(kind, bounds, cfg.seed)
        }
    };
    let config = SimulationConfig {
        bounds,
        path,
        steps: cfg.steps,
        speed: cfg.speed,
        noise_sigma: cfg.noise_sigma,
        seed: cfg.seed,
        controller_enabled: cfg.controller_enabled,
        gain: cfg.gain,
    };
    let default_engine;
    let engine = match engine.as_ref() {
        Some(e) => &e.inner,
        None => {
            default_engine = default_paper_controller();
            &default_engine
        }
    };
    match run_simulation_with(&config, engine) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(FhTrace { inner }));
            FhStatus::Ok
        }
        Err(e) => fail(FhStatus::InvalidArgument, e.to_string()),
    }
}

/// Runs a simulation on one of the built-in tracks. A null `engine` uses the
/// built-in rules.
///
/// # Safety
/// `engine` must be a live handle or null; `config` and `out` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn fh_simulate(
    engine: *const FhEngine,
    config: *const FhSimConfig,
    out: *mut *mut FhTrace,
) -> FhStatus {
    guarded(|| simulate(engine, config, None, out))
}

/// Like [`fh_simulate`] but walks `n_points` waypoints read from `xy` as
/// interleaved `x, y` pairs; `config.track` is ignored.
///
/// # Safety
/// `xy` must point to `2 * n_points` doubles.
#[no_mangle]
pub unsafe extern "C" fn fh_simulate_waypoints(
    engine: *const FhEngine,
    config: *const FhSimConfig,
    xy: *const f64,
    n_points: usize,
    out: *mut *mut FhTrace,
) -> FhStatus {
    guarded(|| {
        if xy.is_null() {
            return fail(FhStatus::NullPointer, "null waypoints");
        }
        let flat = std::slice::from_raw_parts(xy, n_points * 2);
        let points = flat.chunks_exact(2).map(|p| PatientPosition::new(p[0], p[1])).collect();
        match TrackPath::new(points) {
            Ok(path) => simulate(engine, config, Some(path), out),
            Err(e) => fail(FhStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// # Safety
/// `trace` must be a live trace handle or null.
#[no_mangle]
pub unsafe extern "C" fn fh_trace_len(trace: *const FhTrace) -> usize {
    trace.as_ref().map_or(0, |t| t.inner.trace.len())
}

/// Step at which the patient left the field, or -1 if the run completed.
///
/// # Safety
/// `trace` must be a live trace handle or null.
#[no_mangle]
pub unsafe extern "C" fn fh_trace_off_track_step(trace: *const FhTrace) -> i64 {
    match trace.as_ref().map(|t| t.inner.result) {
        Some(SimulationResult::OffTrack { step }) => step as i64,
        _ => -1,
    }
}

/// # Safety
/// `trace` must be a live trace handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fh_trace_get(trace: *const FhTrace, index: usize, out: *mut FhTraceRecord) -> FhStatus {
    guarded(|| {
        let (Some(trace), false) = (trace.as_ref(), out.is_null()) else {
            return fail(FhStatus::NullPointer, "null argument");
        };
        let Some(r) = trace.inner.trace.get(index) else {
            return fail(FhStatus::InvalidArgument, format!("index {index} out of range"));
        };
        *out = FhTraceRecord {
            step: r.step,
            x: r.x,
            y: r.y,
            d_front: r.d_front,
            d_rear: r.d_rear,
            d_left: r.d_left,
            d_right: r.d_right,
            steer_x: r.steer_x,
            steer_y: r.steer_y,
            cx: r.cx,
            cy: r.cy,
            off_track: r.status == TrackStatus::OffTrack,
        };
        FhStatus::Ok
    })
}

/// # Safety
/// `trace` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fh_trace_free(trace: *mut FhTrace) {
    if !trace.is_null() {
        drop(Box::from_raw(trace));
    }
}
