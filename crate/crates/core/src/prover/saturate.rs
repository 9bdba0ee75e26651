//! Generic fixpoint search: apply every rule on its maximal window until the
//! goal is reached or nothing new appears.

use std::fmt;

use crate::exactq::Rational;
use crate::zeroset::ZeroSet;

use super::certificate::{Certificate, Seed, Verdict};
use super::derivation::Derivation;
use super::rules::{backward_window, forward_window, isolated_image, Isolate};
use super::ProverError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_passes: usize,
    pub max_intervals: usize,
    /// Keep running passes after the goal is first reached, until nothing
    /// grows or the budget runs out. The status stays `Goal` either way.
    pub complete_after_goal: bool,
}

impl Budget {
    pub fn new(max_passes: usize, max_intervals: usize) -> Self {
        Budget {
            max_passes,
            max_intervals,
            ..Budget::default()
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_passes: 64,
            max_intervals: 4096,
            complete_after_goal: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SaturationStatus {
    Goal,
    Stalled,
    Budget,
}

impl fmt::Display for SaturationStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SaturationStatus::Goal => "GOAL",
            SaturationStatus::Stalled => "STALLED",
            SaturationStatus::Budget => "BUDGET",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SaturationOutcome {
    pub set: ZeroSet,
    pub certificate: Certificate,
    pub status: SaturationStatus,
    /// Passes actually run (0 when the axioms already reach the goal).
    pub passes: usize,
    /// Pass after which `(0, q)` or `(-q, 0)` was first covered.
    pub goal_pass: Option<usize>,
    /// Zero set after each pass, starting with the axioms.
    pub history: Vec<ZeroSet>,
}

#[derive(Clone, Copy)]
enum Move {
    Forward,
    Back(Isolate),
    Mirror,
}

const PASS_ORDER: [Move; 5] = [
    Move::Forward,
    Move::Back(Isolate::Center),
    Move::Back(Isolate::Minus),
    Move::Back(Isolate::Plus),
    Move::Mirror,
];

/// Runs the rules to a fixpoint starting from the axioms for `q`.
pub fn saturate(
    q: &Rational,
    seed: Seed,
    budget: Budget,
) -> Result<SaturationOutcome, ProverError> {
    saturate_from(Derivation::start(q, seed)?, budget)
}

/// Runs the rules to a fixpoint starting from an existing derivation, so the
/// certificate keeps the provenance of every piece of the starting set.
pub fn saturate_from(mut d: Derivation, budget: Budget) -> Result<SaturationOutcome, ProverError> {
    let q = &d.q().clone();

    let mut history = vec![d.set().clone()];
    let mut status = None;
    let mut passes = 0;
    let mut goal_pass = None;
    if d.set().goal_reached(q) {
        goal_pass = Some(0);
        if !budget.complete_after_goal {
            status = Some(SaturationStatus::Goal);
        }
    }
    while status.is_none() && passes < budget.max_passes {
        passes += 1;
        let before = d.set().clone();
        for mv in PASS_ORDER {
            let z = d.set().clone();
            match mv {
                Move::Forward => {
                    let window = forward_window(&z);
                    let image = window.scale(q).expect("q is nonzero");
                    if !window.is_empty() && !z.contains_set(&image) {
                        d.forward(window, None, "maximal forward window Z & (Z+1) & (Z-1)")?;
                    }
                }
                Move::Back(iso) => {
                    let window = backward_window(&z, q, iso);
                    if window.is_empty() {
                        continue;
                    }
                    let image = isolated_image(&window, iso);
                    if !z.contains_set(&image) {
                        d.backward(iso, window, None, "maximal backward window")?;
                    }
                }
                Move::Mirror => {
                    let mirrored = z.mirror();
                    if !z.contains_set(&mirrored) {
                        let inputs = (0..d.steps().len()).collect();
                        d.mirror_of(&z, inputs, "reflection x -> -x of the whole zero set")?;
                    }
                }
            }
            if d.set().piece_count() > budget.max_intervals {
                status = Some(SaturationStatus::Budget);
                break;
            }
        }
        history.push(d.set().clone());
        if status.is_some() {
            break;
        }
        if *d.set() == before {
            status = Some(if d.set().goal_reached(q) {
                SaturationStatus::Goal
            } else {
                SaturationStatus::Stalled
            });
        } else if goal_pass.is_none() && d.set().goal_reached(q) {
            goal_pass = Some(passes);
            if !budget.complete_after_goal {
                status = Some(SaturationStatus::Goal);
            }
        }
    }
    let status = match (status, goal_pass) {
        (Some(SaturationStatus::Budget), Some(_)) | (None, Some(_)) => SaturationStatus::Goal,
        (Some(s), _) => s,
        (None, None) => SaturationStatus::Budget,
    };
    let set = d.set().clone();
    let verdict = if status == SaturationStatus::Goal {
        d.close()?;
        Verdict::TrivialOnly
    } else {
        Verdict::Incomplete
    };
    Ok(SaturationOutcome {
        set,
        certificate: d.finish(verdict),
        status,
        passes,
        goal_pass,
        history,
    })
}
