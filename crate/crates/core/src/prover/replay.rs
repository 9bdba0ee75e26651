//! The hand-made derivation, replayed step by step on exact windows.

use crate::exactq::{
    classify_regime, int_poly_sign, Inequality, Rational, RegimeTag, Sign, BARON_POLY,
};
use crate::zeroset::{Interval, Piece, ZeroSet};

use super::certificate::{Certificate, Seed, Verdict};
use super::derivation::Derivation;
use super::rules::Isolate;
use super::ProverError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReplayOptions {
    /// Run the second-case script even when `q` is above the threshold. The
    /// run is expected to stop at the `INEQ12` check.
    pub override_regime: bool,
}

fn closed(a: &Rational, b: &Rational) -> ZeroSet {
    ZeroSet::from_interval(
        Interval::closed(a.clone(), b.clone()).expect("window endpoints are ordered"),
    )
}

pub fn replay_paper_proof(
    q: &Rational,
    seed: Seed,
    options: ReplayOptions,
) -> Result<Certificate, ProverError> {
    let regime = classify_regime(q);
    match regime.tag {
        RegimeTag::Invalid => return Err(ProverError::Regime(regime.tag)),
        RegimeTag::AboveThreshold if !options.override_regime => {
            return Err(ProverError::Regime(regime.tag))
        }
        _ => {}
    }
    let mut d = Derivation::start(q, seed)?;
    if regime.tag == RegimeTag::CaseI {
        d.inequality(
            Inequality::CaseIBound,
            "q <= 1 - Q, so (0, q) lies in the seed window",
        )?;
    } else {
        second_case(&mut d)?;
    }
    d.close()?;
    Ok(d.finish(Verdict::TrivialOnly))
}

fn second_case(d: &mut Derivation) -> Result<(), ProverError> {
    let p = d.profile().clone();
    let one = Rational::one();

    // x = 1 - Q: f(q(1-Q)) = 0, f(-Q) = 0, f(2-Q) = 0, hence f(1-Q) = 0.
    let edge = ZeroSet::from_pieces([p.one_minus_big_q.clone()]);
    let s = d.backward(Isolate::Center, edge, None, "x = 1 - Q: 0 = (1/2q) f(1-Q)")?;
    let frag = d.steps()[s].produced.clone();
    d.mirror_of(&frag, vec![s], "reflection x -> -x: |x| <= 1 - Q")?;

    // x0 in [qQ, q(2-Q)], x = x0/q in [Q, 2-Q].
    let window = closed(&p.big_q, &(&Rational::from_integer(2) - &p.big_q));
    let s = d.forward(window, None, "x = x0/q, x0 in [qQ, q(2-Q)]")?;
    let band = d.steps()[s].produced.clone();
    d.mirror_of(&band, vec![s], "reflection x -> -x: qQ <= |x| <= q(2-Q)")?;

    d.inequality(Inequality::QqLt, "qQ < 1 - q(2-Q)")?;
    // x0 in [q - q^2(2-Q), q^2(2-Q)], x = x0/q in [1 - q(2-Q), q(2-Q)].
    let window = closed(&p.one_minus_q_two_minus_big_q, &p.q_two_minus_big_q);
    let s = d.forward(window, None, "x = x0/q, x0 in [q - q^2(2-Q), q^2(2-Q)]")?;
    let band = d.steps()[s].produced.clone();
    d.mirror_of(
        &band,
        vec![s],
        "reflection x -> -x: q - q^2(2-Q) <= |x| <= q^2(2-Q)",
    )?;

    d.inequality(
        Inequality::Ineq12,
        "3q^3 - 3q^2 + 3q - 1 <= 0 gives q - q^2(2-Q) <= 1 - Q",
    )?;
    d.require_covered(
        Piece::Interval(
            Interval::closed(-&p.q2_two_minus_big_q, p.q2_two_minus_big_q.clone())
                .expect("ordered"),
        ),
        "|x| <= q^2(2-Q)",
    )?;

    // x0 in [1 - q(2-Q), 1 - qQ], x = x0 - 1 in [-q(2-Q), -qQ].
    let window = closed(&-&p.q_two_minus_big_q, &-&p.q_big_q);
    let s = d.backward(
        Isolate::Plus,
        window,
        None,
        "x = x0 - 1: 0 = f(qx) = (1/4q) f(x0)",
    )?;
    let band = d.steps()[s].produced.clone();
    d.mirror_of(
        &band,
        vec![s],
        "reflection x -> -x: 1 - q(2-Q) <= |x| <= 1 - qQ",
    )?;

    d.inequality(Inequality::Side16a, "q + q^2 Q < 1 - qQ")?;
    d.inequality(Inequality::Side16b, "1 - q(2-Q) < q(2-Q)")?;

    // x0 in [1 - Q, qQ], x = x0 + 1 in [2 - Q, 1 + qQ]. Both this window and
    // [q(2-Q), q + q^2 Q] are empty unless q^2 + 2q - 1 >= 0; otherwise
    // 1 - Q > qQ and the earlier bands already meet.
    if int_poly_sign(&BARON_POLY, d.q()) != Sign::Negative {
        d.require_covered(
            Piece::Interval(
                Interval::closed(p.q_two_minus_big_q.clone(), p.q_plus_q2_big_q.clone())
                    .expect("ordered"),
            ),
            "q(2-Q) <= x <= q + q^2 Q",
        )?;
        let window = closed(&(&one + &p.one_minus_big_q), &(&one + &p.q_big_q));
        let s = d.backward(
            Isolate::Minus,
            window,
            None,
            "x = x0 + 1: 0 = f(qx) = (1/4q) f(x0), x0 in [1-Q, qQ]",
        )?;
        let band = d.steps()[s].produced.clone();
        d.mirror_of(&band, vec![s], "reflection x -> -x: 1 - Q <= |x| <= qQ")?;
    }
    d.require_covered(
        Piece::Interval(
            Interval::closed(Rational::zero(), p.q_two_minus_big_q.clone()).expect("ordered"),
        ),
        "0 <= x <= q(2-Q)",
    )?;
    d.inequality(Inequality::FinalQ, "q < q(2-Q), so (0, q) is covered")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::certificate::{AxiomKind, Rule};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn two_fifths_bands() {
        let cert = replay_paper_proof(&r(2, 5), Seed::default(), ReplayOptions::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::TrivialOnly);
        let forwards: Vec<_> = cert
            .steps_with_rule(Rule::Forward)
            .map(|s| s.produced.clone())
            .collect();
        assert_eq!(forwards[0], closed(&r(4, 15), &r(8, 15)));
        assert_eq!(forwards[1], closed(&r(14, 75), &r(16, 75)));
        let plus = cert.steps_with_rule(Rule::BackPlus).next().unwrap();
        assert_eq!(plus.produced, closed(&r(7, 15), &r(11, 15)));
        // q = 2/5 < sqrt 2 - 1: no final band.
        assert_eq!(cert.steps_with_rule(Rule::BackMinus).count(), 0);
    }

    #[test]
    fn final_band_appears_above_baron_constant() {
        let cert =
            replay_paper_proof(&r(22, 50), Seed::default(), ReplayOptions::default()).unwrap();
        assert_eq!(cert.steps_with_rule(Rule::BackMinus).count(), 1);
    }

    #[test]
    fn quarter_uses_conditional_atom() {
        let cert = replay_paper_proof(&r(1, 4), Seed::default(), ReplayOptions::default()).unwrap();
        assert!(cert
            .steps
            .iter()
            .any(|s| s.axiom == Some(AxiomKind::AtomQConditional)));
    }

    #[test]
    fn above_threshold() {
        let q = r(9, 20);
        assert_eq!(
            replay_paper_proof(&q, Seed::default(), ReplayOptions::default()).unwrap_err(),
            ProverError::Regime(RegimeTag::AboveThreshold)
        );
        let err = replay_paper_proof(
            &q,
            Seed::default(),
            ReplayOptions {
                override_regime: true,
            },
        )
        .unwrap_err();
        match err {
            ProverError::StepFailure { reason, .. } => {
                assert!(reason.starts_with("INEQ12"), "{reason}")
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
