//! The four propagation rules as pure set algebra.

use crate::exactq::Rational;
use crate::zeroset::ZeroSet;

use super::certificate::Rule;

/// Which right-hand term a backward application solves for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Isolate {
    /// `f(x - 1)`
    Minus,
    /// `f(x)`
    Center,
    /// `f(x + 1)`
    Plus,
}

impl Isolate {
    pub fn rule(self) -> Rule {
        match self {
            Isolate::Minus => Rule::BackMinus,
            Isolate::Center => Rule::BackCenter,
            Isolate::Plus => Rule::BackPlus,
        }
    }
}

fn shifted(z: &ZeroSet, t: i64) -> ZeroSet {
    z.translate(&Rational::from_integer(t))
}

/// `{x : qx in z}`
fn dilated_preimage(z: &ZeroSet, q: &Rational) -> ZeroSet {
    z.scale(&(Rational::one() / q)).expect("q is nonzero")
}

/// Largest window on which `f(x-1)`, `f(x)` and `f(x+1)` all vanish.
pub fn forward_window(z: &ZeroSet) -> ZeroSet {
    z.intersect(&shifted(z, 1)).intersect(&shifted(z, -1))
}

/// `q * forward_window(z)`.
pub fn rule_forward(z: &ZeroSet, q: &Rational) -> ZeroSet {
    forward_window(z).scale(q).expect("q is nonzero")
}

/// Largest window on which `f(qx)` and the two right-hand terms other than
/// the isolated one vanish.
pub fn backward_window(z: &ZeroSet, q: &Rational, isolate: Isolate) -> ZeroSet {
    let pre = dilated_preimage(z, q);
    match isolate {
        Isolate::Minus => pre.intersect(z).intersect(&shifted(z, -1)),
        Isolate::Center => pre.intersect(&shifted(z, 1)).intersect(&shifted(z, -1)),
        Isolate::Plus => pre.intersect(z).intersect(&shifted(z, 1)),
    }
}

/// The set of arguments of the isolated term over `backward_window`.
pub fn rule_backward(z: &ZeroSet, q: &Rational, isolate: Isolate) -> ZeroSet {
    let window = backward_window(z, q, isolate);
    isolated_image(&window, isolate)
}

pub(crate) fn isolated_image(window: &ZeroSet, isolate: Isolate) -> ZeroSet {
    match isolate {
        Isolate::Minus => shifted(window, -1),
        Isolate::Center => window.clone(),
        Isolate::Plus => shifted(window, 1),
    }
}

/// Checks the hypotheses of one rule application on an explicit window and
/// returns what it produces, or the first violated hypothesis.
pub(crate) fn apply_on_window(
    z: &ZeroSet,
    q: &Rational,
    rule: Option<Isolate>,
    window: &ZeroSet,
) -> Result<ZeroSet, String> {
    let image = window.scale(q).expect("q is nonzero");
    let minus = shifted(window, -1);
    let plus = shifted(window, 1);
    let needed: [(&str, &ZeroSet); 3] = match rule {
        None => [("x-1", &minus), ("x", window), ("x+1", &plus)],
        Some(Isolate::Minus) => [("qx", &image), ("x", window), ("x+1", &plus)],
        Some(Isolate::Center) => [("qx", &image), ("x-1", &minus), ("x+1", &plus)],
        Some(Isolate::Plus) => [("qx", &image), ("x-1", &minus), ("x", window)],
    };
    for (term, args) in needed {
        if !z.contains_set(args) {
            return Err(format!("f({term}) not known to vanish for x in {window}"));
        }
    }
    Ok(match rule {
        None => image,
        Some(iso) => isolated_image(window, iso),
    })
}
