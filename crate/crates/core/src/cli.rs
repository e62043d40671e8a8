//! `fuzzy-harness` command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 simulation went off track.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::controller::{
    command_to_correction, default_paper_controller, distances_from_position, engine_from_rules, steer, surface_grid,
    treadmill_symbols, BoundaryDistances, ControllerError, PatientPosition, TrackBounds, DEFAULT_GAIN,
};
use crate::dsl::{format_rule_base, parse_rule_file, RuleFileError};
use crate::fuzzy::MamdaniEngine;
use crate::io::{read_waypoints_csv, trajectory_svg, write_atomic, write_surface_csv, write_trace_csv};
use crate::sim::{
    generate_dummy_track, run_simulation_with, SimulationConfig, SimulationResult, TrackKind, DEFAULT_SPEED,
    DEFAULT_STEPS,
};

/// Environment variable naming a default rules file.
pub const RULES_ENV: &str = "FUZZY_HARNESS_RULES";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_OFF_TRACK: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fuzzy-harness", version, about = "Fuzzy support controller for an omni-directional treadmill")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the closed-loop simulation and write a trace CSV.
    Simulate(SimulateArgs),
    /// Export the controller's response surface as CSV.
    Surface(SurfaceArgs),
    /// Evaluate the controller once and print JSON.
    Eval(EvalArgs),
    /// Validate a rule file.
    Parse(ParseArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// drift_out, lap, zigzag, or @path to an `x,y` waypoint CSV.
    #[arg(long, default_value = "drift_out")]
    pub track: String,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    #[arg(long, value_enum, default_value = "on")]
    pub controller: Switch,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = DEFAULT_GAIN)]
    pub gain: f64,
    #[arg(long, default_value_t = DEFAULT_SPEED)]
    pub speed: f64,
    /// Rules file; defaults to $FUZZY_HARNESS_RULES, then the built-in rules.
    #[arg(long)]
    pub rules: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    #[arg(long, default_value_t = 51)]
    pub resolution: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub rules: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub y: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub front: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub rear: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub left: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub right: Option<f64>,
    #[arg(long)]
    pub rules: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ParseArgs {
    #[arg(long)]
    pub rules: PathBuf,
    /// Write the canonical form of the rules here.
    #[arg(long)]
    pub canonical: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Outcome {
    result: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    off_track_step: Option<usize>,
    steps: usize,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct EvalOutput {
    steer_x: f64,
    steer_y: f64,
    cx: f64,
    cy: f64,
}

/// A failure that ends the command with exit code 1. Each line goes to stderr.
#[derive(Debug)]
struct Failure(Vec<String>);

impl Failure {
    fn new(msg: impl Into<String>) -> Self {
        Self(vec![msg.into()])
    }
}

impl From<ControllerError> for Failure {
    fn from(e: ControllerError) -> Self {
        Self::new(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Surface(a) => cmd_surface(&a),
        Command::Eval(a) => cmd_eval(&a),
        Command::Parse(a) => cmd_parse(&a),
    };
    match result {
        Ok(code) => code,
        Err(Failure(lines)) => {
            for line in lines {
                eprintln!("error: {line}");
            }
            EXIT_USAGE
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    write_atomic(path, contents).map_err(|e| Failure::new(format!("cannot write {}: {e}", path.display())))
}

fn rule_errors(path: &Path, err: &RuleFileError) -> Failure {
    match err {
        RuleFileError::EmptyRuleBase => Failure::new(format!("{}: {err}", path.display())),
        RuleFileError::Invalid(errors) => Failure(errors.iter().map(|e| format!("{}:{e}", path.display())).collect()),
    }
}

/// Engine from `--rules`, else `$FUZZY_HARNESS_RULES`, else the built-in rules.
fn load_engine(flag: Option<&Path>) -> Result<MamdaniEngine, Failure> {
    let env = std::env::var_os(RULES_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    let Some(path) = flag.map(Path::to_path_buf).or(env) else {
        return Ok(default_paper_controller());
    };
    let text = read_text(&path)?;
    engine_from_rules(&text).map_err(|e| match e {
        ControllerError::Rules(ref r) => rule_errors(&path, r),
        other => other.into(),
    })
}

fn cmd_simulate(a: &SimulateArgs) -> Result<i32, Failure> {
    let bounds = TrackBounds::default();
    let path = match a.track.strip_prefix('@') {
        Some(file) => {
            read_waypoints_csv(&read_text(Path::new(file))?).map_err(|e| Failure::new(format!("{file}: {e}")))?
        }
        None => {
            let kind: TrackKind = a.track.parse().map_err(|e: crate::sim::SimError| Failure::new(e.to_string()))?;
            generate_dummy_track(kind, bounds, a.seed)
        }
    };
    let config = SimulationConfig {
        bounds,
        path,
        steps: a.steps,
        speed: a.speed,
        noise_sigma: a.sigma,
        seed: a.seed,
        controller_enabled: a.controller == Switch::On,
        gain: a.gain,
    };
    config.validate().map_err(|e| Failure::new(e.to_string()))?;
    let engine = load_engine(a.rules.as_deref())?;
    let outcome = run_simulation_with(&config, &engine).map_err(|e| Failure::new(e.to_string()))?;

    let mut csv = Vec::new();
    write_trace_csv(&outcome.trace, &mut csv).map_err(|e| Failure::new(e.to_string()))?;
    write_file(&a.out, &csv)?;
    if let Some(svg) = &a.svg {
        write_file(svg, trajectory_svg(&outcome.trace, bounds).as_bytes())?;
    }

    let (result, off_track_step, code) = match outcome.result {
        SimulationResult::Completed => ("completed", None, EXIT_OK),
        SimulationResult::OffTrack { step } => ("off_track", Some(step), EXIT_OFF_TRACK),
    };
    let line = Outcome { result, off_track_step, steps: a.steps, seed: a.seed };
    println!("{}", serde_json::to_string(&line).expect("outcome serializes"));
    Ok(code)
}

fn cmd_surface(a: &SurfaceArgs) -> Result<i32, Failure> {
    if a.resolution < 2 {
        return Err(Failure::new(format!("--resolution must be at least 2, got {}", a.resolution)));
    }
    let engine = load_engine(a.rules.as_deref())?;
    let grid = surface_grid(&engine, TrackBounds::default(), a.resolution)?;
    let mut csv = Vec::new();
    write_surface_csv(&grid, &mut csv).map_err(|e| Failure::new(e.to_string()))?;
    write_file(&a.out, &csv)?;
    Ok(EXIT_OK)
}

fn cmd_eval(a: &EvalArgs) -> Result<i32, Failure> {
    let position = [a.x, a.y];
    let distances = [a.front, a.rear, a.left, a.right];
    let any_position = position.iter().any(Option::is_some);
    let any_distance = distances.iter().any(Option::is_some);
    let d = match (any_position, any_distance) {
        (true, true) => return Err(Failure::new("give either --x/--y or --front/--rear/--left/--right, not both")),
        (false, false) => return Err(Failure::new("give --x and --y, or all of --front --rear --left --right")),
        (true, false) => {
            let [Some(x), Some(y)] = position else {
                return Err(Failure::new("position form needs both --x and --y"));
            };
            distances_from_position(PatientPosition::new(x, y), TrackBounds::default())
        }
        (false, true) => {
            let [Some(front), Some(rear), Some(left), Some(right)] = distances else {
                return Err(Failure::new("distance form needs all of --front --rear --left --right"));
            };
            BoundaryDistances { front, rear, left, right }
        }
    };
    let engine = load_engine(a.rules.as_deref())?;
    let cmd = steer(&engine, &d)?;
    let c = command_to_correction(cmd, DEFAULT_GAIN)?;
    let out = EvalOutput { steer_x: cmd.steer_x, steer_y: cmd.steer_y, cx: c.cx, cy: c.cy };
    println!("{}", serde_json::to_string(&out).expect("eval output serializes"));
    Ok(EXIT_OK)
}

fn cmd_parse(a: &ParseArgs) -> Result<i32, Failure> {
    let text = read_text(&a.rules)?;
    let symbols = treadmill_symbols();
    let rules = parse_rule_file(&text, &symbols).map_err(|e| rule_errors(&a.rules, &e))?;
    if let Some(out) = &a.canonical {
        let canonical = format_rule_base(&rules, &symbols).map_err(|e| Failure::new(e.to_string()))?;
        write_file(out, canonical.as_bytes())?;
    }
    println!("{} rules OK", rules.len());
    Ok(EXIT_OK)
}
