//! Finite unions of rational intervals plus isolated points.
//!
//! A [`ZeroSet`] records where a solution is already known to vanish. Every
//! operation returns a new normalized value: intervals sorted, pairwise
//! disjoint and non-adjacent, atoms sorted and never inside or on the edge of
//! an interval. Two sets with the same points therefore have identical
//! representations and can be compared with `==`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactq::{Rational, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZeroSetError {
    #[error("malformed interval: {0}")]
    MalformedInterval(String),
    #[error("scale factor must be nonzero")]
    ZeroScale,
}

/// A point of the extended rational line.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Extended {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(r) => Some(r),
            _ => None,
        }
    }

    fn translate(&self, t: &Rational) -> Extended {
        match self {
            Extended::Finite(r) => Extended::Finite(r + t),
            other => other.clone(),
        }
    }

    fn scale(&self, s: &Rational) -> Extended {
        let negative = s.signum() == Sign::Negative;
        match (self, negative) {
            (Extended::Finite(r), _) => Extended::Finite(r * s),
            (Extended::NegInf, false) | (Extended::PosInf, true) => Extended::NegInf,
            (Extended::PosInf, false) | (Extended::NegInf, true) => Extended::PosInf,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => f.write_str("-inf"),
            Extended::PosInf => f.write_str("+inf"),
            Extended::Finite(r) => write!(f, "{r}"),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        match s.as_str() {
            "-inf" => Ok(Extended::NegInf),
            "+inf" | "inf" => Ok(Extended::PosInf),
            other => other
                .parse()
                .map(Extended::Finite)
                .map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EndPoint {
    #[serde(rename = "val")]
    pub value: Extended,
    pub closed: bool,
}

impl EndPoint {
    pub fn closed(r: Rational) -> Self {
        EndPoint {
            value: Extended::Finite(r),
            closed: true,
        }
    }

    pub fn open(r: Rational) -> Self {
        EndPoint {
            value: Extended::Finite(r),
            closed: false,
        }
    }

    pub fn neg_inf() -> Self {
        EndPoint {
            value: Extended::NegInf,
            closed: false,
        }
    }

    pub fn pos_inf() -> Self {
        EndPoint {
            value: Extended::PosInf,
            closed: false,
        }
    }
}

/// Order of two endpoints used as lower bounds: at equal values a closed
/// bound starts earlier.
fn cmp_lo(a: &EndPoint, b: &EndPoint) -> Ordering {
    a.value.cmp(&b.value).then_with(|| b.closed.cmp(&a.closed))
}

/// Order of two endpoints used as upper bounds: at equal values an open
/// bound ends earlier.
fn cmp_hi(a: &EndPoint, b: &EndPoint) -> Ordering {
    a.value.cmp(&b.value).then_with(|| a.closed.cmp(&b.closed))
}

/// Whether an interval ending at `hi` and one starting at `lo` share or
/// abut at a point.
fn touches(hi: &EndPoint, lo: &EndPoint) -> bool {
    match lo.value.cmp(&hi.value) {
        Ordering::Less => true,
        Ordering::Equal => hi.closed || lo.closed,
        Ordering::Greater => false,
    }
}

/// A nonempty interval. `lo == hi` is allowed only with both ends closed and
/// is normalized to an atom once inserted into a [`ZeroSet`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: EndPoint,
    pub hi: EndPoint,
}

impl Interval {
    pub fn new(lo: EndPoint, hi: EndPoint) -> Result<Self, ZeroSetError> {
        let bad = |why: &str| {
            Err(ZeroSetError::MalformedInterval(format!(
                "{why}: {lo:?} .. {hi:?}"
            )))
        };
        if lo.value == Extended::PosInf || hi.value == Extended::NegInf {
            return bad("endpoint on the wrong side of infinity");
        }
        if (lo.closed && lo.value == Extended::NegInf)
            || (hi.closed && hi.value == Extended::PosInf)
        {
            return bad("infinite endpoint cannot be closed");
        }
        match lo.value.cmp(&hi.value) {
            Ordering::Greater => bad("lo > hi"),
            Ordering::Equal if !(lo.closed && hi.closed) => {
                bad("degenerate interval with an open end")
            }
            _ => Ok(Interval { lo, hi }),
        }
    }

    pub fn closed(a: Rational, b: Rational) -> Result<Self, ZeroSetError> {
        Interval::new(EndPoint::closed(a), EndPoint::closed(b))
    }

    pub fn open(a: Rational, b: Rational) -> Result<Self, ZeroSetError> {
        Interval::new(EndPoint::open(a), EndPoint::open(b))
    }

    pub fn closed_open(a: Rational, b: Rational) -> Result<Self, ZeroSetError> {
        Interval::new(EndPoint::closed(a), EndPoint::open(b))
    }

    pub fn open_closed(a: Rational, b: Rational) -> Result<Self, ZeroSetError> {
        Interval::new(EndPoint::open(a), EndPoint::closed(b))
    }

    /// `(a, +inf)` or `[a, +inf)`.
    pub fn above(a: Rational, closed: bool) -> Self {
        Interval {
            lo: EndPoint {
                value: Extended::Finite(a),
                closed,
            },
            hi: EndPoint::pos_inf(),
        }
    }

    /// `(-inf, a)` or `(-inf, a]`.
    pub fn below(a: Rational, closed: bool) -> Self {
        Interval {
            lo: EndPoint::neg_inf(),
            hi: EndPoint {
                value: Extended::Finite(a),
                closed,
            },
        }
    }

    pub fn real_line() -> Self {
        Interval {
            lo: EndPoint::neg_inf(),
            hi: EndPoint::pos_inf(),
        }
    }

    pub fn point(a: Rational) -> Self {
        Interval {
            lo: EndPoint::closed(a.clone()),
            hi: EndPoint::closed(a),
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo.value == self.hi.value
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        let x = Extended::Finite(x.clone());
        let above_lo = match self.lo.value.cmp(&x) {
            Ordering::Less => true,
            Ordering::Equal => self.lo.closed,
            Ordering::Greater => false,
        };
        let below_hi = match x.cmp(&self.hi.value) {
            Ordering::Less => true,
            Ordering::Equal => self.hi.closed,
            Ordering::Greater => false,
        };
        above_lo && below_hi
    }

    /// `other` is a subset of `self`.
    pub fn covers(&self, other: &Interval) -> bool {
        cmp_lo(&self.lo, &other.lo) != Ordering::Greater
            && cmp_hi(&other.hi, &self.hi) != Ordering::Greater
    }

    fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = if cmp_lo(&self.lo, &other.lo) == Ordering::Less {
            &other.lo
        } else {
            &self.lo
        };
        let hi = if cmp_hi(&self.hi, &other.hi) == Ordering::Less {
            &self.hi
        } else {
            &other.hi
        };
        Interval::new(lo.clone(), hi.clone()).ok()
    }

    fn translate(&self, t: &Rational) -> Interval {
        Interval {
            lo: EndPoint {
                value: self.lo.value.translate(t),
                closed: self.lo.closed,
            },
            hi: EndPoint {
                value: self.hi.value.translate(t),
                closed: self.hi.closed,
            },
        }
    }

    fn scale(&self, s: &Rational) -> Interval {
        let lo = EndPoint {
            value: self.lo.value.scale(s),
            closed: self.lo.closed,
        };
        let hi = EndPoint {
            value: self.hi.value.scale(s),
            closed: self.hi.closed,
        };
        if s.signum() == Sign::Negative {
            Interval { lo: hi, hi: lo }
        } else {
            Interval { lo, hi }
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.lo.value);
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.lo.closed { '[' } else { '(' },
            self.lo.value,
            self.hi.value,
            if self.hi.closed { ']' } else { ')' }
        )
    }
}

/// Something that can be inserted into or tested against a [`ZeroSet`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece {
    Interval(Interval),
    Atom(Rational),
}

impl From<Interval> for Piece {
    fn from(i: Interval) -> Self {
        Piece::Interval(i)
    }
}

impl From<Rational> for Piece {
    fn from(r: Rational) -> Self {
        Piece::Atom(r)
    }
}

impl Piece {
    fn into_interval(self) -> Interval {
        match self {
            Piece::Interval(i) => i,
            Piece::Atom(a) => Interval::point(a),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "RawZeroSet")]
pub struct ZeroSet {
    intervals: Vec<Interval>,
    atoms: Vec<Rational>,
}

#[derive(Deserialize)]
struct RawZeroSet {
    #[serde(default)]
    intervals: Vec<RawInterval>,
    #[serde(default)]
    atoms: Vec<Rational>,
}

#[derive(Deserialize)]
struct RawInterval {
    lo: EndPoint,
    hi: EndPoint,
}

impl TryFrom<RawZeroSet> for ZeroSet {
    type Error = ZeroSetError;

    fn try_from(raw: RawZeroSet) -> Result<Self, Self::Error> {
        let mut spans = Vec::with_capacity(raw.intervals.len() + raw.atoms.len());
        for i in raw.intervals {
            spans.push(Interval::new(i.lo, i.hi)?);
        }
        spans.extend(raw.atoms.into_iter().map(Interval::point));
        Ok(ZeroSet::normalize(spans))
    }
}

impl ZeroSet {
    pub fn empty() -> Self {
        ZeroSet::default()
    }

    pub fn real_line() -> Self {
        ZeroSet {
            intervals: vec![Interval::real_line()],
            atoms: Vec::new(),
        }
    }

    pub fn from_pieces<I, P>(pieces: I) -> Self
    where
        I: IntoIterator<Item = P>,
        P: Into<Piece>,
    {
        ZeroSet::normalize(
            pieces
                .into_iter()
                .map(|p| p.into().into_interval())
                .collect(),
        )
    }

    pub fn from_interval(i: Interval) -> Self {
        ZeroSet::normalize(vec![i])
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn atoms(&self) -> &[Rational] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty() && self.atoms.is_empty()
    }

    /// Number of connected components (intervals plus atoms).
    pub fn piece_count(&self) -> usize {
        self.intervals.len() + self.atoms.len()
    }

    /// Intervals and atoms as one list sorted by lower bound; atoms appear as
    /// degenerate closed intervals.
    fn spans(&self) -> Vec<Interval> {
        let mut out: Vec<Interval> = self
            .intervals
            .iter()
            .cloned()
            .chain(self.atoms.iter().cloned().map(Interval::point))
            .collect();
        out.sort_by(|a, b| cmp_lo(&a.lo, &b.lo));
        out
    }

    fn normalize(mut spans: Vec<Interval>) -> ZeroSet {
        spans.sort_by(|a, b| cmp_lo(&a.lo, &b.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(spans.len());
        for span in spans {
            match merged.last_mut() {
                Some(cur) if touches(&cur.hi, &span.lo) => {
                    if cmp_hi(&cur.hi, &span.hi) == Ordering::Less {
                        cur.hi = span.hi;
                    }
                }
                _ => merged.push(span),
            }
        }
        let (points, intervals): (Vec<_>, Vec<_>) =
            merged.into_iter().partition(Interval::is_point);
        let atoms = points
            .into_iter()
            .filter_map(|p| p.lo.value.finite().cloned())
            .collect();
        ZeroSet { intervals, atoms }
    }

    pub fn insert(&self, piece: impl Into<Piece>) -> ZeroSet {
        let mut spans = self.spans();
        spans.push(piece.into().into_interval());
        ZeroSet::normalize(spans)
    }

    pub fn union(&self, other: &ZeroSet) -> ZeroSet {
        let mut spans = self.spans();
        spans.extend(other.spans());
        ZeroSet::normalize(spans)
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        if self.atoms.binary_search(x).is_ok() {
            return true;
        }
        let xe = Extended::Finite(x.clone());
        // First interval whose lower bound value exceeds x; the candidate is
        // the one right before it.
        let idx = self.intervals.partition_point(|i| i.lo.value <= xe);
        idx > 0 && self.intervals[idx - 1].contains_point(x)
    }

    /// Every point of `piece` belongs to the set.
    pub fn contains(&self, piece: &Piece) -> bool {
        match piece {
            Piece::Atom(a) => self.contains_point(a),
            Piece::Interval(i) if i.is_point() => {
                i.lo.value.finite().is_some_and(|a| self.contains_point(a))
            }
            Piece::Interval(i) => {
                let idx = self
                    .intervals
                    .partition_point(|c| cmp_lo(&c.lo, &i.lo) != Ordering::Greater);
                idx > 0 && self.intervals[idx - 1].covers(i)
            }
        }
    }

    pub fn contains_set(&self, other: &ZeroSet) -> bool {
        other
            .intervals
            .iter()
            .all(|i| self.contains(&Piece::Interval(i.clone())))
            && other.atoms.iter().all(|a| self.contains_point(a))
    }

    pub fn intersect(&self, other: &ZeroSet) -> ZeroSet {
        let a = self.spans();
        let b = other.spans();
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            if let Some(piece) = a[i].intersect(&b[j]) {
                out.push(piece);
            }
            match cmp_hi(&a[i].hi, &b[j].hi) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        ZeroSet::normalize(out)
    }

    pub fn translate(&self, t: &Rational) -> ZeroSet {
        ZeroSet::normalize(self.spans().iter().map(|s| s.translate(t)).collect())
    }

    pub fn scale(&self, s: &Rational) -> Result<ZeroSet, ZeroSetError> {
        if s.is_zero() {
            return Err(ZeroSetError::ZeroScale);
        }
        Ok(ZeroSet::normalize(
            self.spans().iter().map(|p| p.scale(s)).collect(),
        ))
    }

    /// Reflection `x -> -x`.
    pub fn mirror(&self) -> ZeroSet {
        ZeroSet::normalize(
            self.spans()
                .iter()
                .map(|p| p.scale(&Rational::from_integer(-1)))
                .collect(),
        )
    }

    pub fn symmetrize(&self) -> ZeroSet {
        self.union(&self.mirror())
    }

    /// `(0, q)` or `(-q, 0)` lies in the set.
    pub fn goal_reached(&self, q: &Rational) -> bool {
        let zero = Rational::zero();
        let right = Interval::open(zero.clone(), q.clone());
        let left = Interval::open(-q, zero);
        [right, left]
            .into_iter()
            .flatten()
            .any(|i| self.contains(&Piece::Interval(i)))
    }
}

impl fmt::Display for ZeroSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spans = self.spans();
        if spans.is_empty() {
            return f.write_str("{}");
        }
        for (k, s) in spans.iter().enumerate() {
            if k > 0 {
                f.write_str(" U ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}
