//! Exact rational arithmetic for the parameter `q` and everything derived
//! from it.
//!
//! Nothing in here touches floating point. The irrational thresholds that
//! split the parameter range are never materialized; membership is decided
//! by the exact sign of a comparator polynomial evaluated at a rational `q`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("q = {0} is outside the open interval (0, 1)")]
    OutOfRange(Rational),
    #[error("unknown inequality `{0}`")]
    UnknownInequality(String),
    #[error("cannot parse `{0}` as a rational number")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Panics when `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn signum(&self) -> Sign {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational, ExactError> {
        if rhs.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<Rational, ExactError> {
        Rational::one().checked_div(self)
    }

    pub fn pow(&self, exp: u32) -> Rational {
        let mut acc = Rational::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Nearest `f64`; only for reporting and the numerical module.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `true` iff `0 < self < 1`.
    pub fn in_unit_interval(&self) -> bool {
        self.signum() == Sign::Positive && *self < Rational::one()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ExactError;

    /// Accepts `num/den` or a bare integer, with optional surrounding spaces.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ExactError::Parse(s.to_string());
        let (num, den) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Panics on a zero divisor, like integer division. Use `checked_div` when
// the divisor is untrusted.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

/// Exact sign of `c0 + c1 q + c2 q^2 + ...` (constant term first).
pub fn poly_sign(coefficients: &[Rational], q: &Rational) -> Sign {
    poly_eval(coefficients, q).signum()
}

/// Horner evaluation, constant term first.
pub fn poly_eval(coefficients: &[Rational], q: &Rational) -> Rational {
    coefficients
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, c| &(&acc * q) + c)
}

/// Integer-coefficient convenience wrapper around [`poly_sign`].
pub fn int_poly_sign(coefficients: &[i64], q: &Rational) -> Sign {
    let coeffs: Vec<Rational> = coefficients
        .iter()
        .map(|&c| Rational::from_integer(c))
        .collect();
    poly_sign(&coeffs, q)
}

/// `q^2 - 3q + 1`; its root in (0,1) is (3 - sqrt 5)/2, the case split.
pub const CASE_SPLIT_POLY: [i64; 3] = [1, -3, 1];
/// `q^2 + 2q - 1`; its root in (0,1) is sqrt 2 - 1.
pub const BARON_POLY: [i64; 3] = [-1, 2, 1];
/// `3q^3 - 3q^2 + 3q - 1`; its root is (1 - cbrt 2 + cbrt 4)/3, the
/// uniqueness threshold.
pub const THRESHOLD_CUBIC: [i64; 4] = [-1, 3, -3, 3];

/// Every closed-form endpoint the derivation needs, as exact functions of `q`.
///
/// `big_q` is the support radius `Q = q/(1-q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QProfile {
    pub q: Rational,
    pub big_q: Rational,
    /// `1 - Q`
    pub one_minus_big_q: Rational,
    /// `qQ`
    pub q_big_q: Rational,
    /// `q(2 - Q)`
    pub q_two_minus_big_q: Rational,
    /// `q^2 (2 - Q)`
    pub q2_two_minus_big_q: Rational,
    /// `q - q^2 (2 - Q)`
    pub q_minus_q2_two_minus_big_q: Rational,
    /// `q + q^2 Q`
    pub q_plus_q2_big_q: Rational,
    /// `1 - qQ`
    pub one_minus_q_big_q: Rational,
    /// `1 - q(2 - Q)`
    pub one_minus_q_two_minus_big_q: Rational,
}

pub fn derived_quantities(q: &Rational) -> Result<QProfile, ExactError> {
    if !q.in_unit_interval() {
        return Err(ExactError::OutOfRange(q.clone()));
    }
    let one = Rational::one();
    let two = Rational::from_integer(2);
    let big_q = q / &(&one - q);
    let two_minus_big_q = &two - &big_q;
    let q_two_minus_big_q = q * &two_minus_big_q;
    let q2_two_minus_big_q = q * &q_two_minus_big_q;
    let q_big_q = q * &big_q;
    Ok(QProfile {
        q: q.clone(),
        one_minus_big_q: &one - &big_q,
        q_minus_q2_two_minus_big_q: q - &q2_two_minus_big_q,
        q_plus_q2_big_q: q + &(q * &q_big_q),
        one_minus_q_big_q: &one - &q_big_q,
        one_minus_q_two_minus_big_q: &one - &q_two_minus_big_q,
        big_q,
        q_big_q,
        q_two_minus_big_q,
        q2_two_minus_big_q,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RegimeTag {
    /// `q <= (3 - sqrt 5)/2`: the seed window already contains `(0, q)`.
    CaseI,
    /// Between the case split and the cubic threshold.
    CaseII,
    /// `q` above the cubic threshold, still in `(0, 1)`.
    AboveThreshold,
    /// `q <= 0` or `q >= 1`.
    Invalid,
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegimeTag::CaseI => "CASE_I",
            RegimeTag::CaseII => "CASE_II",
            RegimeTag::AboveThreshold => "ABOVE_THRESHOLD",
            RegimeTag::Invalid => "INVALID",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Regime {
    pub tag: RegimeTag,
    /// `q == 1/4` exactly.
    pub quarter_flag: bool,
    /// `q < 1/2`.
    pub half_guard: bool,
}

pub fn classify_regime(q: &Rational) -> Regime {
    let quarter_flag = *q == Rational::new(1, 4);
    let half_guard = *q < Rational::new(1, 2);
    let tag = if !q.in_unit_interval() {
        RegimeTag::Invalid
    } else if int_poly_sign(&CASE_SPLIT_POLY, q) != Sign::Negative && half_guard {
        RegimeTag::CaseI
    } else if int_poly_sign(&THRESHOLD_CUBIC, q) != Sign::Positive {
        RegimeTag::CaseII
    } else {
        RegimeTag::AboveThreshold
    };
    Regime {
        tag,
        quarter_flag,
        half_guard,
    }
}

/// Index `n` of a seed point `eps * (q + q^2 + ... + q^n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeedIndex {
    Finite(u32),
    Infinite,
}

impl fmt::Display for SeedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedIndex::Finite(n) => write!(f, "{n}"),
            SeedIndex::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for SeedIndex {
    type Err = ExactError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "INF" | "infinity" | "INFINITY" => Ok(SeedIndex::Infinite),
            other => other
                .parse()
                .map(SeedIndex::Finite)
                .map_err(|_| ExactError::Parse(s.to_string())),
        }
    }
}

impl Serialize for SeedIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            SeedIndex::Finite(n) => serializer.serialize_u32(*n),
            SeedIndex::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for SeedIndex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(n) => Ok(SeedIndex::Finite(n)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// `q + q^2 + ... + q^n`, with the empty sum equal to zero and the infinite
/// sum equal to `Q`.
pub fn partial_geom_sum(q: &Rational, n: SeedIndex) -> Result<Rational, ExactError> {
    if !q.in_unit_interval() {
        return Err(ExactError::OutOfRange(q.clone()));
    }
    match n {
        SeedIndex::Infinite => Ok(q / &(&Rational::one() - q)),
        SeedIndex::Finite(n) => {
            let mut sum = Rational::zero();
            let mut term = Rational::one();
            for _ in 0..n {
                term = &term * q;
                sum = &sum + &term;
            }
            Ok(sum)
        }
    }
}

/// The named side conditions the derivation relies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Inequality {
    /// `q - q^2(2-Q) <= 1 - Q`; the only place the threshold cubic enters.
    #[serde(rename = "INEQ12")]
    Ineq12,
    /// `qQ < 1 - q(2-Q)`
    #[serde(rename = "QQ_LT")]
    QqLt,
    /// `q + q^2 Q < 1 - qQ`
    #[serde(rename = "SIDE16A")]
    Side16a,
    /// `1 - q(2-Q) < q(2-Q)`
    #[serde(rename = "SIDE16B")]
    Side16b,
    /// `q < q(2-Q)`
    #[serde(rename = "FINAL_Q")]
    FinalQ,
    /// `q <= 1 - Q`, which decides the first case.
    #[serde(rename = "CASE_I_BOUND")]
    CaseIBound,
}

impl Inequality {
    pub const ALL: [Inequality; 6] = [
        Inequality::Ineq12,
        Inequality::QqLt,
        Inequality::Side16a,
        Inequality::Side16b,
        Inequality::FinalQ,
        Inequality::CaseIBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Inequality::Ineq12 => "INEQ12",
            Inequality::QqLt => "QQ_LT",
            Inequality::Side16a => "SIDE16A",
            Inequality::Side16b => "SIDE16B",
            Inequality::FinalQ => "FINAL_Q",
            Inequality::CaseIBound => "CASE_I_BOUND",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Inequality::Ineq12 => "q - q^2(2-Q) <= 1 - Q",
            Inequality::QqLt => "qQ < 1 - q(2-Q)",
            Inequality::Side16a => "q + q^2 Q < 1 - qQ",
            Inequality::Side16b => "1 - q(2-Q) < q(2-Q)",
            Inequality::FinalQ => "q < q(2-Q)",
            Inequality::CaseIBound => "q <= 1 - Q",
        }
    }

    /// Polynomial obtained by multiplying both sides by `1 - q > 0`, together
    /// with the sign condition it must satisfy.
    fn cleared(self) -> (&'static [i64], fn(Sign) -> bool) {
        match self {
            // q(1-q) - q^2(2-3q) <= 1 - 2q
            Inequality::Ineq12 => (&THRESHOLD_CUBIC, |s| s != Sign::Positive),
            // q^2 < (1-q) - q(2-3q)  <=>  (1-q)(1-2q) > 0
            Inequality::QqLt => (&[1, -3, 2], |s| s == Sign::Positive),
            // q(1-q) + q^3 < (1-q) - q^2
            Inequality::Side16a => (&[-1, 2, 0, 1], |s| s == Sign::Negative),
            // 1 - q < 2q(2-3q)  <=>  (2q-1)(3q-1) < 0
            Inequality::Side16b => (&[1, -5, 6], |s| s == Sign::Negative),
            // Q < 1
            Inequality::FinalQ => (&[1, -2], |s| s == Sign::Positive),
            Inequality::CaseIBound => (&CASE_SPLIT_POLY, |s| s != Sign::Negative),
        }
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Inequality {
    type Err = ExactError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Inequality::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| ExactError::UnknownInequality(s.to_string()))
    }
}

/// Exact truth value of a named inequality at `q`, decided by a polynomial
/// sign after clearing the `1 - q` denominators.
pub fn check_inequality(name: Inequality, q: &Rational) -> Result<bool, ExactError> {
    if !q.in_unit_interval() {
        return Err(ExactError::OutOfRange(q.clone()));
    }
    let (poly, accept) = name.cleared();
    Ok(accept(int_poly_sign(poly, q)))
}

/// String-keyed variant of [`check_inequality`].
pub fn check_named_inequality(name: &str, q: &Rational) -> Result<bool, ExactError> {
    check_inequality(name.parse()?, q)
}
