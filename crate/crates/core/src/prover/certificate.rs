use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exactq::{Inequality, Rational, Regime, SeedIndex};
use crate::zeroset::ZeroSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Rule {
    Forward,
    BackMinus,
    BackCenter,
    BackPlus,
    Axiom,
    InequalityCheck,
    Lemma1Closure,
    Symmetrize,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Forward => "FORWARD",
            Rule::BackMinus => "BACK_MINUS",
            Rule::BackCenter => "BACK_CENTER",
            Rule::BackPlus => "BACK_PLUS",
            Rule::Axiom => "AXIOM",
            Rule::InequalityCheck => "INEQUALITY_CHECK",
            Rule::Lemma1Closure => "LEMMA1_CLOSURE",
            Rule::Symmetrize => "SYMMETRIZE",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AxiomKind {
    /// `f = 0` for `|x| > Q`.
    Support,
    /// `f = 0` for `|x| < 1 - Q`, from boundedness near a seed point.
    SeedLemma2,
    /// `f(0) = 0` when `q < 1/2`.
    AtomZero,
    /// `f(+-Q) = 0` when `q != 1/4`.
    AtomQ,
    /// `q = 1/4`: `f(+-Q) = 0` once `f(+-qQ) = 0` is known.
    AtomQConditional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InequalityRecord {
    pub id: Inequality,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GoalSide {
    /// `[0, q)` is covered.
    Right,
    /// `(-q, 0]` is covered; reduced to the right side by reflection.
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AtomQResolution {
    /// `q != 1/4`: `f(Q) = 0` outright.
    Unconditional,
    /// `q = 1/4`: `f(Q) = 0` because `qQ` lies in `[0, Q)`, already zero.
    ViaQq,
}

/// Data the closure step needs so a checker can redo the induction over
/// `A_n = [0, q + ... + q^n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClosureRecord {
    pub side: GoalSide,
    /// Number of induction steps `s_n / q = 1 + s_(n-1)` checked exactly.
    pub induction_terms: u32,
    pub atom_q: AtomQResolution,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DerivationStep {
    pub index: usize,
    pub rule: Rule,
    pub inputs: Vec<usize>,
    /// The `x` window the rule was applied on.
    pub domain: ZeroSet,
    pub produced: ZeroSet,
    #[serde(rename = "paperTag")]
    pub tag: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axiom: Option<AxiomKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inequality: Option<InequalityRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closure: Option<ClosureRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Seed {
    pub n: SeedIndex,
    pub epsilon: i8,
}

impl Default for Seed {
    fn default() -> Self {
        Seed {
            n: SeedIndex::Finite(0),
            epsilon: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    TrivialOnly,
    Incomplete,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::TrivialOnly => "TRIVIAL_ONLY",
            Verdict::Incomplete => "INCOMPLETE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub q: Rational,
    pub regime: Regime,
    pub seed: Seed,
    /// The seed was given with `n = inf` and replaced by a finite index;
    /// the seed window does not depend on `n`.
    #[serde(default)]
    pub finite_reduction: bool,
    pub steps: Vec<DerivationStep>,
    pub verdict: Verdict,
    pub final_set: ZeroSet,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    pub fn steps_with_rule(&self, rule: Rule) -> impl Iterator<Item = &DerivationStep> {
        self.steps.iter().filter(move |s| s.rule == rule)
    }
}
