//! Contextuality analysis on exclusivity graphs.
//!
//! Atomic measurement events are vertices of a graph whose edges mark
//! exclusivity. Complete measurements (contexts) are cliques whose projectors
//! sum to the identity. On top of that structure the crate builds 0-1 state
//! enumeration, Kochen-Specker checks, graph states, and the linear programs
//! behind the noncontextual fraction and inequality bounds.

pub mod assign;
pub mod catalog;
pub mod classify;
pub mod cli;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod scenario;
pub mod selfcheck;
pub mod states;

use thiserror::Error;

/// Crate-wide error type. `exit_code` maps each variant onto the CLI
/// convention: 1 for analysis refusals, 2 for input errors.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a projector: {0}")]
    NotProjector(String),
    #[error("not a density matrix: {0}")]
    NotDensity(String),
    #[error("zero vector cannot define a state or ray")]
    ZeroKet,
    #[error("projectors do not commute (commutator norm {norm:.3e})")]
    NonCommuting { norm: f64 },
    #[error("duplicate ray: inputs {first} and {second} define the same projector")]
    DuplicateAtom { first: usize, second: usize },
    #[error("invalid graph: {0}")]
    BadGraph(String),
    #[error(
        "closure exceeded limits ({elements} elements after {rounds} rounds, caps {max_elements} elements / {max_rounds} rounds)"
    )]
    ClosureLimit {
        elements: usize,
        rounds: usize,
        max_elements: usize,
        max_rounds: usize,
    },
    #[error("operation requires a projector realization: {0}")]
    NoRealization(String),
    #[error("scenario is not complete: {0}")]
    NotValid(String),
    #[error("invalid state: {0}")]
    BadState(String),
    #[error("enumeration truncated at {limit} states; refusing to report a definite answer")]
    Truncated { limit: usize },
    #[error("linear program breakdown: {0}")]
    LpBreakdown(String),
    #[error("unknown builtin scenario '{0}'")]
    UnknownBuiltin(String),
    #[error("unknown label '{0}'")]
    UnknownLabel(String),
    #[error("invalid input: {0}")]
    BadInput(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// CLI exit code for this error: 1 = analysis refusal, 2 = input error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Truncated { .. } | Error::ClosureLimit { .. } | Error::LpBreakdown(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
