//! Zero-set propagation prover.
//!
//! Starting from the support condition, the seed window and the point atoms,
//! the engine repeatedly applies the four vanishing rules implied by the
//! three-term equation `f(qx) = (1/4q)[f(x-1) + f(x+1) + 2f(x)]`:
//!
//! * forward: `f(x-1)`, `f(x)` and `f(x+1)` vanish, so `f(qx)` does;
//! * backward: `f(qx)` and two of the right-hand terms vanish, so the third
//!   does (isolating `x-1`, `x` or `x+1`).
//!
//! Every application is logged as a [`DerivationStep`] in a [`Certificate`]
//! that [`verify_certificate`] re-checks from scratch.

mod certificate;
mod derivation;
mod replay;
mod rules;
mod saturate;
mod verify;

use thiserror::Error;

use crate::exactq::{ExactError, RegimeTag};

pub use certificate::{
    AtomQResolution, AxiomKind, Certificate, ClosureRecord, DerivationStep, GoalSide,
    InequalityRecord, Rule, Seed, Verdict,
};
pub use derivation::{initial_axioms, lemma1_closure, Derivation, InitialState, INDUCTION_TERMS};
pub use replay::{replay_paper_proof, ReplayOptions};
pub use rules::{backward_window, forward_window, rule_backward, rule_forward, Isolate};
pub use saturate::{saturate, saturate_from, Budget, SaturationOutcome, SaturationStatus};
pub use verify::{verify_certificate, Verification};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error("q lies in regime {0}, outside the range the derivation covers")]
    Regime(RegimeTag),
    #[error("the seed axioms need q < 1/2")]
    HalfGuardViolated,
    #[error("step {index} failed: {reason}")]
    StepFailure { index: usize, reason: String },
    #[error("neither (0, q) nor (-q, 0) is contained in the zero set")]
    GoalNotReached,
    #[error("seed epsilon must be -1 or 1, got {0}")]
    BadSeedSign(i8),
    #[error(transparent)]
    Exact(#[from] ExactError),
}
