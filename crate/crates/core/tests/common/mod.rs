#![allow(dead_code)]

use proptest::prelude::*;
use schilling_core::exactq::Rational;
use schilling_core::zeroset::{EndPoint, Interval, Piece, ZeroSet};

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Rationals on a coarse grid so that endpoints collide often.
pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-24i64..=24, prop::sample::select(vec![1i64, 2, 3, 4, 6])).prop_map(|(n, d)| r(n, d))
}

pub fn nonzero_scale() -> impl Strategy<Value = Rational> {
    prop::sample::select(vec![
        r(1, 2),
        r(-1, 2),
        r(2, 1),
        r(-2, 1),
        r(3, 2),
        r(-1, 1),
        r(2, 5),
    ])
}

/// Raw description of a piece, kept for a naive membership test that does
/// not go through the library.
#[derive(Debug, Clone)]
pub enum RawPiece {
    Atom(Rational),
    Bounded {
        a: Rational,
        b: Rational,
        lo_closed: bool,
        hi_closed: bool,
    },
    Above {
        a: Rational,
        closed: bool,
    },
    Below {
        a: Rational,
        closed: bool,
    },
}

impl RawPiece {
    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            RawPiece::Atom(a) => x == a,
            RawPiece::Bounded {
                a,
                b,
                lo_closed,
                hi_closed,
            } => {
                let lo_ok = if *lo_closed { x >= a } else { x > a };
                let hi_ok = if *hi_closed { x <= b } else { x < b };
                lo_ok && hi_ok
            }
            RawPiece::Above { a, closed } => {
                if *closed {
                    x >= a
                } else {
                    x > a
                }
            }
            RawPiece::Below { a, closed } => {
                if *closed {
                    x <= a
                } else {
                    x < a
                }
            }
        }
    }

    pub fn to_piece(&self) -> Piece {
        match self {
            RawPiece::Atom(a) => Piece::Atom(a.clone()),
            RawPiece::Bounded {
                a,
                b,
                lo_closed,
                hi_closed,
            } => {
                let lo = if *lo_closed {
                    EndPoint::closed(a.clone())
                } else {
                    EndPoint::open(a.clone())
                };
                let hi = if *hi_closed {
                    EndPoint::closed(b.clone())
                } else {
                    EndPoint::open(b.clone())
                };
                Piece::Interval(Interval::new(lo, hi).expect("generated bounded piece is nonempty"))
            }
            RawPiece::Above { a, closed } => Piece::Interval(Interval::above(a.clone(), *closed)),
            RawPiece::Below { a, closed } => Piece::Interval(Interval::below(a.clone(), *closed)),
        }
    }

    pub fn endpoints(&self) -> Vec<Rational> {
        match self {
            RawPiece::Atom(a) | RawPiece::Above { a, .. } | RawPiece::Below { a, .. } => {
                vec![a.clone()]
            }
            RawPiece::Bounded { a, b, .. } => vec![a.clone(), b.clone()],
        }
    }
}

pub fn raw_piece() -> impl Strategy<Value = RawPiece> {
    prop_oneof![
        2 => small_rational().prop_map(RawPiece::Atom),
        6 => (small_rational(), 1i64..=24, any::<bool>(), any::<bool>()).prop_map(|(a, w, lc, hc)| {
            let b = &a + &r(w, 4);
            RawPiece::Bounded { a, b, lo_closed: lc, hi_closed: hc }
        }),
        1 => (small_rational(), any::<bool>()).prop_map(|(a, closed)| RawPiece::Above { a, closed }),
        1 => (small_rational(), any::<bool>()).prop_map(|(a, closed)| RawPiece::Below { a, closed }),
    ]
}

pub fn raw_pieces(max: usize) -> impl Strategy<Value = Vec<RawPiece>> {
    prop::collection::vec(raw_piece(), 0..=max)
}

pub fn build(pieces: &[RawPiece]) -> ZeroSet {
    ZeroSet::from_pieces(pieces.iter().map(RawPiece::to_piece))
}

pub fn zero_set(max: usize) -> impl Strategy<Value = ZeroSet> {
    raw_pieces(max).prop_map(|p| build(&p))
}

/// Probe points: the grid plus every endpoint and its immediate neighbours.
pub fn probes(pieces: &[RawPiece]) -> Vec<Rational> {
    let mut out: Vec<Rational> = (-60..=60).map(|k| r(k, 5)).collect();
    let eps = r(1, 1000);
    for p in pieces {
        for e in p.endpoints() {
            out.push(&e - &eps);
            out.push(&e + &eps);
            out.push(e);
        }
    }
    out
}
