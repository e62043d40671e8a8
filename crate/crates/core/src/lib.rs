//! Mamdani fuzzy inference and a closed-loop simulator for a fuzzy support
//! controller on an omni-directional treadmill.
//!
//! - [`fuzzy`]: membership functions, linguistic variables, rules, engine.
//! - [`dsl`]: the `If ... then support is ...` rule language.
//! - [`controller`]: the four-input, two-output treadmill controller.
//! - [`sim`]: deterministic patient simulation with the controller in the loop.
//! - [`io`] and [`cli`]: file formats and the `fuzzy-harness` binary.

pub mod cli;
pub mod controller;
pub mod dsl;
pub mod fuzzy;
pub mod io;
pub mod sim;
