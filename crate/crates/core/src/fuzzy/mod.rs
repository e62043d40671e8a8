//! Mamdani fuzzy inference.
//!
//! Operators are fixed to the classic Mamdani set: `min` for AND and for
//! implication, `max` for aggregation, and a sampled centroid for
//! defuzzification.

mod engine;
mod membership;
mod rule;
mod variable;

pub use engine::{defuzzify_centroid, Aggregate, CrispValues, MamdaniEngine, OutputSet};
pub use membership::MembershipFunction;
pub use rule::{fire_rule, FuzzyClause, FuzzyRule, GradeTable, RuleBase};
pub use variable::{is_identifier, LinguisticVariable, Term, Universe};

use thiserror::Error;

/// Default number of centroid samples across an output universe.
pub const DEFAULT_RESOLUTION: usize = 1001;
/// Smallest accepted centroid sample count.
pub const MIN_RESOLUTION: usize = 101;
/// Below this aggregate mass the centroid is undefined and the fallback is used.
pub const MASS_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuzzyError {
    #[error("invalid membership shape {0}")]
    InvalidShape(String),
    #[error("invalid universe [{lo}, {hi}]")]
    InvalidUniverse { lo: f64, hi: f64 },
    #[error("term `{term}` of `{variable}` has breakpoints outside the universe")]
    OutsideUniverse { variable: String, term: String },
    #[error("`{0}` is not a valid identifier (ASCII letters and underscore only)")]
    InvalidIdentifier(String),
    #[error("variable `{0}` has no terms")]
    NoTerms(String),
    #[error("duplicate term `{term}` in `{variable}`")]
    DuplicateTerm { variable: String, term: String },
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown term `{term}` for variable `{variable}`")]
    UnknownTerm { variable: String, term: String },
    #[error("`{variable}` cannot be used as {expected} here")]
    WrongRole { variable: String, expected: &'static str },
    #[error("rule has an empty antecedent")]
    EmptyAntecedent,
    #[error("rule has an empty consequent")]
    EmptyConsequent,
    #[error("variable `{0}` appears twice in one antecedent")]
    RepeatedAntecedent(String),
    #[error("rule base is empty")]
    EmptyRuleBase,
    #[error("defuzzification resolution {0} is below {MIN_RESOLUTION}")]
    Resolution(usize),
    #[error("expected {expected} values, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("missing input `{0}`")]
    MissingInput(String),
    #[error("input `{0}` is not declared by the engine")]
    UnexpectedInput(String),
    #[error("input `{0}` is not a finite number")]
    NonFiniteInput(String),
}
