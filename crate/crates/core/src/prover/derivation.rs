//! Step-by-step construction of a certificate.

use crate::exactq::{
    classify_regime, derived_quantities, partial_geom_sum, QProfile, Rational, SeedIndex,
};
use crate::zeroset::{Interval, Piece, ZeroSet};

use super::certificate::{
    AtomQResolution, AxiomKind, Certificate, ClosureRecord, DerivationStep, GoalSide,
    InequalityRecord, Rule, Seed, Verdict,
};
use super::rules::{apply_on_window, Isolate};
use super::ProverError;
use crate::exactq::{check_inequality, Inequality};

/// How many steps of the `A_n` induction the closure step checks exactly.
pub const INDUCTION_TERMS: u32 = 8;

/// A certificate under construction. `set` is always the union of every
/// produced fragment so far.
#[derive(Debug, Clone)]
pub struct Derivation {
    q: Rational,
    profile: QProfile,
    seed: Seed,
    set: ZeroSet,
    steps: Vec<DerivationStep>,
}

#[derive(Debug, Clone)]
pub struct InitialState {
    pub set: ZeroSet,
    pub steps: Vec<DerivationStep>,
}

/// Support ray, seed window, `f(0) = 0` and (unless `q = 1/4`) `f(+-Q) = 0`.
pub fn initial_axioms(q: &Rational, seed: Seed) -> Result<InitialState, ProverError> {
    let d = Derivation::start(q, seed)?;
    Ok(InitialState {
        set: d.set,
        steps: d.steps,
    })
}

impl Derivation {
    pub fn start(q: &Rational, seed: Seed) -> Result<Self, ProverError> {
        let profile = derived_quantities(q)?;
        if !classify_regime(q).half_guard {
            return Err(ProverError::HalfGuardViolated);
        }
        if seed.epsilon != 1 && seed.epsilon != -1 {
            return Err(ProverError::BadSeedSign(seed.epsilon));
        }
        let mut d = Derivation {
            q: q.clone(),
            profile,
            seed,
            set: ZeroSet::empty(),
            steps: Vec::new(),
        };
        let big_q = d.profile.big_q.clone();
        let radius = d.profile.one_minus_big_q.clone();

        d.axiom(
            AxiomKind::Support,
            ZeroSet::from_pieces([
                Interval::below(-&big_q, false),
                Interval::above(big_q.clone(), false),
            ]),
            "support: f(x) = 0 for |x| > Q",
        );
        let seed_point = match seed.n {
            SeedIndex::Finite(_) => partial_geom_sum(q, seed.n)?,
            SeedIndex::Infinite => big_q.clone(),
        };
        let seed_tag = format!(
            "boundedness near {}{}: f(q^(m+n) x + eps s_n) = 2^-n (2q)^-(m+n) f(x) forces f(x) = 0 for |x| < 1 - Q",
            if seed.epsilon < 0 { "-" } else { "" },
            seed_point
        );
        d.axiom(
            AxiomKind::SeedLemma2,
            ZeroSet::from_interval(
                Interval::open(-&radius, radius).expect("1 - Q > 0 for q < 1/2"),
            ),
            &seed_tag,
        );
        d.axiom(
            AxiomKind::AtomZero,
            ZeroSet::from_pieces([Rational::zero()]),
            "x = 0: f(0) = (1/2q) f(0), so f(0) = 0 for q < 1/2",
        );
        if !d.is_quarter() {
            d.axiom(
                AxiomKind::AtomQ,
                ZeroSet::from_pieces([-&big_q, big_q]),
                "x = Q/q = Q + 1: f(Q) = (1/4q) f(Q), so f(+-Q) = 0 for q != 1/4",
            );
        }
        Ok(d)
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn profile(&self) -> &QProfile {
        &self.profile
    }

    pub fn set(&self) -> &ZeroSet {
        &self.set
    }

    pub fn steps(&self) -> &[DerivationStep] {
        &self.steps
    }

    fn is_quarter(&self) -> bool {
        self.q == Rational::new(1, 4)
    }

    fn next_index(&self) -> usize {
        self.steps.len()
    }

    fn all_inputs(&self) -> Vec<usize> {
        (0..self.steps.len()).collect()
    }

    fn push(&mut self, mut step: DerivationStep) -> usize {
        let index = self.next_index();
        step.index = index;
        self.set = self.set.union(&step.produced);
        self.steps.push(step);
        index
    }

    fn blank(
        rule: Rule,
        inputs: Vec<usize>,
        domain: ZeroSet,
        produced: ZeroSet,
        tag: &str,
    ) -> DerivationStep {
        DerivationStep {
            index: 0,
            rule,
            inputs,
            domain,
            produced,
            tag: tag.to_string(),
            axiom: None,
            inequality: None,
            closure: None,
        }
    }

    fn axiom(&mut self, kind: AxiomKind, payload: ZeroSet, tag: &str) -> usize {
        let mut step = Self::blank(Rule::Axiom, Vec::new(), ZeroSet::empty(), payload, tag);
        step.axiom = Some(kind);
        self.push(step)
    }

    fn fail(&self, reason: impl Into<String>) -> ProverError {
        ProverError::StepFailure {
            index: self.next_index(),
            reason: reason.into(),
        }
    }

    /// Forward rule on `window`; `inputs` defaults to every earlier step.
    pub fn forward(
        &mut self,
        window: ZeroSet,
        inputs: Option<Vec<usize>>,
        tag: &str,
    ) -> Result<usize, ProverError> {
        self.propagate(None, window, inputs, tag)
    }

    pub fn backward(
        &mut self,
        isolate: Isolate,
        window: ZeroSet,
        inputs: Option<Vec<usize>>,
        tag: &str,
    ) -> Result<usize, ProverError> {
        self.propagate(Some(isolate), window, inputs, tag)
    }

    fn propagate(
        &mut self,
        isolate: Option<Isolate>,
        window: ZeroSet,
        inputs: Option<Vec<usize>>,
        tag: &str,
    ) -> Result<usize, ProverError> {
        let produced =
            apply_on_window(&self.set, &self.q, isolate, &window).map_err(|e| self.fail(e))?;
        let rule = isolate.map_or(Rule::Forward, Isolate::rule);
        let inputs = inputs.unwrap_or_else(|| self.all_inputs());
        Ok(self.push(Self::blank(rule, inputs, window, produced, tag)))
    }

    /// Adds the reflection of `fragment`, which must already be proven.
    pub fn mirror_of(
        &mut self,
        fragment: &ZeroSet,
        inputs: Vec<usize>,
        tag: &str,
    ) -> Result<usize, ProverError> {
        if !self.set.contains_set(fragment) {
            return Err(self.fail(format!("cannot reflect {fragment}: not proven")));
        }
        Ok(self.push(Self::blank(
            Rule::Symmetrize,
            inputs,
            fragment.clone(),
            fragment.mirror(),
            tag,
        )))
    }

    /// Records an exact side condition; fails if it does not hold.
    pub fn inequality(&mut self, id: Inequality, tag: &str) -> Result<usize, ProverError> {
        let holds = check_inequality(id, &self.q)?;
        if !holds {
            return Err(self.fail(format!(
                "{id} ({}) is false for q = {}",
                id.statement(),
                self.q
            )));
        }
        let mut step = Self::blank(
            Rule::InequalityCheck,
            Vec::new(),
            ZeroSet::empty(),
            ZeroSet::empty(),
            tag,
        );
        step.inequality = Some(InequalityRecord { id, holds });
        Ok(self.push(step))
    }

    /// Asserts an exact coverage claim without adding a step.
    pub fn require_covered(&self, piece: Piece, what: &str) -> Result<(), ProverError> {
        if self.set.contains(&piece) {
            Ok(())
        } else {
            Err(self.fail(format!("{what} is not covered by the zero set")))
        }
    }

    /// Emits the induction closure, preceded for `q = 1/4` by the conditional
    /// atom at `+-Q`.
    pub fn close(&mut self) -> Result<usize, ProverError> {
        if self.is_quarter() {
            let qq = self.profile.q_big_q.clone();
            if self.set.contains_point(&qq) && self.set.contains_point(&-&qq) {
                let big_q = self.profile.big_q.clone();
                let mut step = Self::blank(
                    Rule::Axiom,
                    Vec::new(),
                    ZeroSet::from_pieces([-&qq, qq]),
                    ZeroSet::from_pieces([-&big_q, big_q]),
                    "q = 1/4: f(Q) = 0 iff f(qQ) = 0, and f(+-qQ) = 0 is proven",
                );
                step.axiom = Some(AxiomKind::AtomQConditional);
                self.push(step);
            }
        }
        let step = lemma1_closure(&self.set, &self.q, self.next_index(), self.all_inputs())?;
        Ok(self.push(step))
    }

    pub fn finish(self, verdict: Verdict) -> Certificate {
        let final_set = self
            .steps
            .iter()
            .filter(|s| s.rule != Rule::Lemma1Closure)
            .fold(ZeroSet::empty(), |acc, s| acc.union(&s.produced));
        Certificate {
            regime: classify_regime(&self.q),
            q: self.q,
            seed: self.seed,
            finite_reduction: self.seed.n == SeedIndex::Infinite,
            steps: self.steps,
            verdict,
            final_set,
        }
    }
}

/// Induction step: `f = 0` on `[0, q)` (or its mirror) spreads to
/// `A_n = [0, s_n)` for every `n`, hence to `[0, Q)`, to `Q`, to `[0, inf)`
/// and finally everywhere.
pub fn lemma1_closure(
    z: &ZeroSet,
    q: &Rational,
    index: usize,
    inputs: Vec<usize>,
) -> Result<DerivationStep, ProverError> {
    let regime = classify_regime(q);
    if !regime.half_guard {
        return Err(ProverError::HalfGuardViolated);
    }
    let p = derived_quantities(q)?;
    let zero = Rational::zero();
    let right = Interval::closed_open(zero.clone(), q.clone()).expect("q > 0");
    let left = Interval::open_closed(-q, zero).expect("q > 0");
    let side = if z.contains(&Piece::Interval(right)) {
        GoalSide::Right
    } else if z.contains(&Piece::Interval(left)) {
        GoalSide::Left
    } else {
        return Err(ProverError::GoalNotReached);
    };

    let fail = |why: &str| ProverError::StepFailure {
        index,
        reason: why.to_string(),
    };
    if p.big_q >= Rational::one() {
        return Err(fail("induction needs Q < 1"));
    }
    for n in 1..=INDUCTION_TERMS {
        let s_n = partial_geom_sum(q, SeedIndex::Finite(n))?;
        let s_prev = partial_geom_sum(q, SeedIndex::Finite(n - 1))?;
        if &s_n / q != &Rational::one() + &s_prev {
            return Err(fail("geometric sums do not satisfy s_n / q = 1 + s_(n-1)"));
        }
    }
    let atom_q = if regime.quarter_flag {
        // qQ < Q, so qQ lies in the already-cleared [0, Q).
        if p.q_big_q >= p.big_q || p.q_big_q < Rational::zero() {
            return Err(fail("qQ is not in [0, Q)"));
        }
        AtomQResolution::ViaQq
    } else {
        AtomQResolution::Unconditional
    };

    Ok(DerivationStep {
        index,
        rule: Rule::Lemma1Closure,
        inputs,
        domain: ZeroSet::empty(),
        produced: ZeroSet::real_line(),
        tag: "induction on A_n = [0, q + ... + q^n): x0 in A_(n+1) \\ A_n gives x0/q - 1 in A_n and x0/q > 1 > Q; \
              then f(Q) = 0 and f = 0 everywhere"
            .to_string(),
        axiom: None,
        inequality: None,
        closure: Some(ClosureRecord { side, induction_terms: INDUCTION_TERMS, atom_q }),
    })
}
