use thiserror::Error;

use crate::algebra::Cx;

/// Errors raised anywhere in the crate.
///
/// Variants are deliberately fine-grained: callers (and the CLI) branch on
/// the kind of failure, e.g. a pole hit mid-orbit versus an unknown map name.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("arity mismatch: expected {expected} values, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("evaluation overflowed to a non-finite value")]
    NonFinite,

    #[error("nothing to eliminate: polynomial has degree 0 in `{var}`")]
    NothingToEliminate { var: String },

    #[error("division is not exact; remainder witness: {remainder}")]
    NonExactDivision { remainder: String },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("root finding needs degree >= 1 and a leading coefficient above tolerance")]
    DegenerateRootProblem,

    #[error("root iteration did not converge (max residual {max_residual:e})")]
    RootsNotConverged { max_residual: f64 },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("unknown map `{0}`")]
    UnknownMap(String),

    #[error("map `{map}` requires parameter `{param}`")]
    MissingParameter { map: String, param: String },

    #[error("degenerate parameters for `{map}`: {reason}")]
    DegenerateParameters { map: String, reason: String },

    #[error("pole: denominator vanishes at the point ({context})")]
    Pole { context: String },

    #[error("pole encountered at step {step}")]
    PoleAtStep { step: usize },

    #[error("Hirota-Kimura linear system is singular at the point")]
    SingularLinearSystem,

    #[error("Lotka-Volterra consistency quadratic: no root conserves the invariants")]
    NoConservingRoot,

    #[error("no variety generator for ({map}, period {period}); available periods: {available:?}")]
    UnknownGenerator {
        map: String,
        period: u32,
        available: Vec<u32>,
    },

    #[error("sampling failed after {attempts} draws: {reason}")]
    SamplingFailed { attempts: usize, reason: String },

    #[error("degenerate family: {0}")]
    DegenerateFamily(String),

    #[error("no common factor among the periodicity numerators: {numerators:?}")]
    NoCommonFactor { numerators: Vec<String> },

    #[error("resultant collapsed to zero while eliminating `{var}`; try reordering relations")]
    ResultantCollapsed { var: String },

    /// `samples` are the transitions used; `residuals` the smallest residual
    /// each candidate reached on them.
    #[error("no factor survived filtering against {} transition samples (best residuals {residuals:?})", samples.len())]
    NoFactorSurvives { samples: Vec<Vec<Cx>>, residuals: Vec<f64> },

    #[error("biquadratic composition degenerate: {0}")]
    DegenerateComposition(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("invariant `{invariant}` of `{map}` is not conserved (deviation {deviation:e})")]
    InvariantNotConserved {
        map: String,
        invariant: String,
        deviation: f64,
    },

    #[error("data file error: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
