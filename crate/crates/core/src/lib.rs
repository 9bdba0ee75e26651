//! Exact zero-set propagation for the two-scale functional equation
//!
//! ```text
//! f(qx) = (1/4q) [f(x-1) + f(x+1) + 2 f(x)],   f(x) = 0 for |x| > Q = q/(1-q)
//! ```
//!
//! together with a floating-point transfer-operator laboratory for the same
//! equation.
//!
//! * [`exactq`]: rational arithmetic and regime classification.
//! * [`zeroset`]: unions of rational intervals with open/closed ends.
//! * [`prover`]: propagation rules, scripted replay, saturation, certificates.
//! * [`spectral`]: discretized operator, power iteration, residual search.
//! * [`cli`]: the `schilling` command-line front end.

pub mod cli;
pub mod exactq;
pub mod prover;
pub mod spectral;
pub mod zeroset;

pub use exactq::{Rational, Regime, RegimeTag};
pub use prover::{Certificate, Verdict};
pub use zeroset::ZeroSet;
