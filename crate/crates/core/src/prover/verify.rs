//! Independent certificate checker.
//!
//! Re-derives every step from the certificate alone, using only the exact
//! arithmetic and set primitives. Nothing here calls into the producer.

use crate::exactq::{check_inequality, classify_regime, partial_geom_sum, Rational, SeedIndex};
use crate::zeroset::{Interval, Piece, ZeroSet};

use super::certificate::{
    AtomQResolution, AxiomKind, Certificate, DerivationStep, GoalSide, Rule, Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub ok: bool,
    /// First failing step (or `None` for certificate-level failures) and the
    /// reason.
    pub failure: Option<(Option<usize>, String)>,
}

impl Verification {
    fn pass() -> Self {
        Verification {
            ok: true,
            failure: None,
        }
    }

    fn fail_at(index: usize, why: impl Into<String>) -> Self {
        Verification {
            ok: false,
            failure: Some((Some(index), why.into())),
        }
    }

    fn fail(why: impl Into<String>) -> Self {
        Verification {
            ok: false,
            failure: Some((None, why.into())),
        }
    }

    pub fn failing_step(&self) -> Option<usize> {
        self.failure.as_ref().and_then(|(i, _)| *i)
    }
}

pub fn verify_certificate(cert: &Certificate) -> Verification {
    let q = &cert.q;
    if !q.in_unit_interval() {
        return Verification::fail(format!("q = {q} is not in (0, 1)"));
    }
    if classify_regime(q) != cert.regime {
        return Verification::fail("recorded regime does not match q");
    }
    if cert.seed.epsilon != 1 && cert.seed.epsilon != -1 {
        return Verification::fail("seed epsilon must be +-1");
    }
    if cert.finite_reduction != (cert.seed.n == SeedIndex::Infinite) {
        return Verification::fail("finite-reduction flag inconsistent with the seed index");
    }

    let ctx = Context::new(q);
    let mut known = ZeroSet::empty();
    let mut closure_seen = false;
    for (pos, step) in cert.steps.iter().enumerate() {
        if step.index != pos {
            return Verification::fail_at(pos, format!("step index {} out of order", step.index));
        }
        if let Some(bad) = step.inputs.iter().find(|&&i| i >= pos) {
            return Verification::fail_at(pos, format!("cites step {bad}, which is not earlier"));
        }
        if closure_seen {
            return Verification::fail_at(pos, "steps after the closure");
        }
        if let Err(why) = ctx.check_step(step, &known) {
            return Verification::fail_at(pos, why);
        }
        if step.rule == Rule::Lemma1Closure {
            closure_seen = true;
        } else {
            known = known.union(&step.produced);
        }
    }

    if known != cert.final_set {
        return Verification::fail("final set differs from the union of produced fragments");
    }
    if cert.verdict == Verdict::TrivialOnly && !closure_seen {
        return Verification::fail("verdict TRIVIAL_ONLY without a closure step");
    }
    if cert.verdict == Verdict::Incomplete && closure_seen {
        return Verification::fail("verdict INCOMPLETE but a closure step is present");
    }
    Verification::pass()
}

struct Context {
    q: Rational,
    big_q: Rational,
    quarter: bool,
    below_half: bool,
}

fn shift(z: &ZeroSet, t: i64) -> ZeroSet {
    z.translate(&Rational::from_integer(t))
}

impl Context {
    fn new(q: &Rational) -> Self {
        let one = Rational::one();
        Context {
            q: q.clone(),
            big_q: q / &(&one - q),
            quarter: *q == Rational::new(1, 4),
            below_half: q < &Rational::new(1, 2),
        }
    }

    fn require(&self, known: &ZeroSet, needed: &ZeroSet, what: &str) -> Result<(), String> {
        if known.contains_set(needed) {
            Ok(())
        } else {
            Err(format!(
                "{what} = {needed} is not inside the proven zero set"
            ))
        }
    }

    fn expect_eq(&self, got: &ZeroSet, want: &ZeroSet) -> Result<(), String> {
        if got == want {
            Ok(())
        } else {
            Err(format!("produced {got}, expected {want}"))
        }
    }

    fn check_step(&self, step: &DerivationStep, known: &ZeroSet) -> Result<(), String> {
        let j = &step.domain;
        let image = || j.scale(&self.q).map_err(|e| e.to_string());
        match step.rule {
            Rule::Axiom => self.check_axiom(step, known),
            Rule::Forward => {
                self.require(known, &shift(j, -1), "J - 1")?;
                self.require(known, j, "J")?;
                self.require(known, &shift(j, 1), "J + 1")?;
                self.expect_eq(&step.produced, &image()?)
            }
            Rule::BackCenter => {
                self.require(known, &image()?, "qJ")?;
                self.require(known, &shift(j, -1), "J - 1")?;
                self.require(known, &shift(j, 1), "J + 1")?;
                self.expect_eq(&step.produced, j)
            }
            Rule::BackMinus => {
                self.require(known, &image()?, "qJ")?;
                self.require(known, j, "J")?;
                self.require(known, &shift(j, 1), "J + 1")?;
                self.expect_eq(&step.produced, &shift(j, -1))
            }
            Rule::BackPlus => {
                self.require(known, &image()?, "qJ")?;
                self.require(known, &shift(j, -1), "J - 1")?;
                self.require(known, j, "J")?;
                self.expect_eq(&step.produced, &shift(j, 1))
            }
            Rule::Symmetrize => {
                self.require(known, j, "reflected source")?;
                self.expect_eq(&step.produced, &j.mirror())
            }
            Rule::InequalityCheck => {
                let rec = step
                    .inequality
                    .ok_or("inequality step without an inequality record")?;
                if !step.produced.is_empty() {
                    return Err("inequality step must not produce anything".into());
                }
                let holds = check_inequality(rec.id, &self.q).map_err(|e| e.to_string())?;
                if !holds || !rec.holds {
                    return Err(format!("{} does not hold at q = {}", rec.id, self.q));
                }
                Ok(())
            }
            Rule::Lemma1Closure => self.check_closure(step, known),
        }
    }

    fn check_axiom(&self, step: &DerivationStep, known: &ZeroSet) -> Result<(), String> {
        let kind = step.axiom.ok_or("axiom step without a kind")?;
        let big_q = &self.big_q;
        let expected = match kind {
            AxiomKind::Support => ZeroSet::from_pieces([
                Interval::below(-big_q, false),
                Interval::above(big_q.clone(), false),
            ]),
            AxiomKind::SeedLemma2 => {
                if !self.below_half {
                    return Err("seed window needs q < 1/2".into());
                }
                let radius = &Rational::one() - big_q;
                ZeroSet::from_interval(Interval::open(-&radius, radius).map_err(|e| e.to_string())?)
            }
            AxiomKind::AtomZero => {
                if !self.below_half {
                    return Err("f(0) = 0 needs q < 1/2".into());
                }
                ZeroSet::from_pieces([Rational::zero()])
            }
            AxiomKind::AtomQ => {
                if self.quarter {
                    return Err("f(Q) = 0 is not unconditional at q = 1/4".into());
                }
                ZeroSet::from_pieces([-big_q, big_q.clone()])
            }
            AxiomKind::AtomQConditional => {
                if !self.quarter {
                    return Err("conditional atom only applies at q = 1/4".into());
                }
                let qq = &self.q * big_q;
                let condition = ZeroSet::from_pieces([-&qq, qq]);
                if step.domain != condition {
                    return Err(format!(
                        "condition must be f(+-qQ) = 0, got {}",
                        step.domain
                    ));
                }
                self.require(known, &condition, "+-qQ")?;
                ZeroSet::from_pieces([-big_q, big_q.clone()])
            }
        };
        self.expect_eq(&step.produced, &expected)
    }

    fn check_closure(&self, step: &DerivationStep, known: &ZeroSet) -> Result<(), String> {
        let rec = step
            .closure
            .ok_or("closure step without a closure record")?;
        if !self.below_half {
            return Err("closure needs q < 1/2".into());
        }
        if self.big_q >= Rational::one() {
            return Err("closure needs Q < 1".into());
        }
        let zero = Rational::zero();
        let base = match rec.side {
            GoalSide::Right => Interval::closed_open(zero, self.q.clone()),
            GoalSide::Left => Interval::open_closed(-&self.q, zero),
        }
        .map_err(|e| e.to_string())?;
        if !known.contains(&Piece::Interval(base.clone())) {
            return Err(format!("base case {base} not proven"));
        }
        if rec.induction_terms == 0 {
            return Err("closure checks no induction terms".into());
        }
        // x0 in A_(n+1) \ A_n  =>  x0/q - 1 in A_n, since s_(n+1)/q = 1 + s_n.
        for n in 1..=rec.induction_terms {
            let s_n = partial_geom_sum(&self.q, SeedIndex::Finite(n)).map_err(|e| e.to_string())?;
            let s_prev =
                partial_geom_sum(&self.q, SeedIndex::Finite(n - 1)).map_err(|e| e.to_string())?;
            if &s_n / &self.q != &Rational::one() + &s_prev {
                return Err(format!("induction identity fails at n = {n}"));
            }
        }
        // x = Q/q = Q + 1 is the argument that pins down f(Q).
        if &self.big_q / &self.q != &self.big_q + &Rational::one() {
            return Err("Q/q != Q + 1".into());
        }
        match (rec.atom_q, self.quarter) {
            (AtomQResolution::Unconditional, false) => {}
            (AtomQResolution::ViaQq, true) => {
                let qq = &self.q * &self.big_q;
                if qq < Rational::zero() || qq >= self.big_q {
                    return Err("qQ is not in [0, Q)".into());
                }
            }
            _ => return Err("f(Q) resolution does not match q".into()),
        }
        if step.produced != ZeroSet::real_line() {
            return Err("closure must conclude f = 0 on the whole line".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::Regime;
    use crate::prover::{replay_paper_proof, ReplayOptions, Seed};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn accepts_replay() {
        let cert = replay_paper_proof(&r(2, 5), Seed::default(), ReplayOptions::default()).unwrap();
        assert_eq!(verify_certificate(&cert), Verification::pass());
    }

    #[test]
    fn rejects_widened_band() {
        let mut cert =
            replay_paper_proof(&r(2, 5), Seed::default(), ReplayOptions::default()).unwrap();
        let idx = cert
            .steps
            .iter()
            .position(|s| s.rule == Rule::Forward)
            .unwrap();
        let band = &cert.steps[idx].produced;
        let widened = band.insert(Interval::closed(r(8, 15), &r(8, 15) + &r(1, 1000)).unwrap());
        cert.steps[idx].produced = widened;
        let v = verify_certificate(&cert);
        assert!(!v.ok);
        assert_eq!(v.failing_step(), Some(idx));
    }

    #[test]
    fn rejects_empty_trivial_certificate() {
        let q = r(2, 5);
        let cert = Certificate {
            regime: classify_regime(&q),
            q,
            seed: Seed::default(),
            finite_reduction: false,
            steps: vec![],
            verdict: Verdict::TrivialOnly,
            final_set: ZeroSet::empty(),
        };
        let v = verify_certificate(&cert);
        assert!(!v.ok);
        assert_eq!(v.failing_step(), None);
    }

    #[test]
    fn rejects_wrong_regime() {
        let mut cert =
            replay_paper_proof(&r(1, 3), Seed::default(), ReplayOptions::default()).unwrap();
        cert.regime = Regime {
            quarter_flag: true,
            ..cert.regime
        };
        assert!(!verify_certificate(&cert).ok);
    }
}
