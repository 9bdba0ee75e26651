//! Floating-point laboratory for the transfer operator
//!
//! ```text
//! (Tf)(y) = (1/4q) [f(y/q - 1) + f(y/q + 1) + 2 f(y/q)]
//! ```
//!
//! acting on piecewise-linear functions sampled on a uniform grid over
//! `[-Q, Q]`. Exact solutions are fixed points of `T`. Nothing in here makes a
//! mathematical claim; it produces numbers to look at.

mod checks;
mod grid;
mod operator;
mod search;

use thiserror::Error;

pub use checks::{lemma2_check, remark2_check, Remark2Deviation};
pub use grid::{Grid, GridFunction};
pub use operator::{apply_operator, assemble_matrix, OperatorMatrix};
pub use search::{
    min_residual_search, min_residual_search_with, power_iteration, residual, PowerResult,
    SearchResult,
};

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("grid needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("q = {0} is outside (0, 1)")]
    OutOfRange(f64),
    #[error("grid values have length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("the window (Q-1, 1-Q) is empty for q >= 1/2")]
    EmptyWindow,
    #[error("epsilon must be 1 or -1, got {0}")]
    BadEpsilon(i8),
    #[error("malformed grid file: {0}")]
    BadGrid(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
