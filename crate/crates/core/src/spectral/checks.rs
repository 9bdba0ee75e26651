use super::grid::GridFunction;
use super::SpectralError;

/// Largest deviation of
///
/// ```text
/// f(q^(m+n) x + eps (q + ... + q^n)) = (1/2)^n (1/2q)^(m+n) f(x)
/// ```
///
/// over `samples` midpoints of `(Q - 1, 1 - Q)`. Exact solutions give 0.
pub fn lemma2_check(
    f: &GridFunction,
    m: u32,
    n: u32,
    eps: i8,
    samples: usize,
) -> Result<f64, SpectralError> {
    let q = f.grid().q();
    let big_q = f.grid().big_q();
    if q >= 0.5 {
        return Err(SpectralError::EmptyWindow);
    }
    if eps != 1 && eps != -1 {
        return Err(SpectralError::BadEpsilon(eps));
    }
    let scale = q.powi((m + n) as i32);
    let shift = f64::from(eps) * (1..=n).map(|i| q.powi(i as i32)).sum::<f64>();
    let factor = 0.5f64.powi(n as i32) * (0.5 / q).powi((m + n) as i32);
    let lo = big_q - 1.0;
    let width = 2.0 * (1.0 - big_q);
    let dev = (0..samples)
        .map(|i| {
            let x = lo + width * (i as f64 + 0.5) / samples as f64;
            (f.eval(scale * x + shift) - factor * f.eval(x)).abs()
        })
        .fold(0.0, f64::max);
    Ok(dev)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Remark2Deviation {
    /// `|f(0)|` for `q < 1/2`, otherwise `|f(0) - (Tf)(0)|`.
    pub dev0: f64,
    /// `|f(Q)|` for `q != 1/4`, otherwise `|f(Q)| - |f(qQ)|`.
    pub dev_q: f64,
}

/// How far `f` is from the two pointwise facts every solution satisfies:
/// `f(0) = 0` when `q < 1/2`, and `f(Q) = 0` unless `q = 1/4`.
pub fn remark2_check(f: &GridFunction) -> Remark2Deviation {
    let q = f.grid().q();
    let big_q = f.grid().big_q();
    let f0 = f.eval(0.0);
    let dev0 = if q < 0.5 {
        f0.abs()
    } else {
        let tf0 = (f.eval(-1.0) + f.eval(1.0) + 2.0 * f0) / (4.0 * q);
        (f0 - tf0).abs()
    };
    let dev_q = if q != 0.25 {
        f.eval(big_q).abs()
    } else {
        f.eval(big_q).abs() - f.eval(q * big_q).abs()
    };
    Remark2Deviation { dev0, dev_q }
}
