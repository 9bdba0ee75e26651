use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grid::{Grid, GridFunction};
use super::operator::{apply_operator, assemble_matrix, OperatorMatrix};

/// `max_j |f(y_j) - (Tf)(y_j)|`.
pub fn residual(f: &GridFunction) -> f64 {
    let tf = apply_operator(f);
    sup_diff(f.values(), tf.values())
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Scales `v` to sup-norm 1 with a positive entry of largest modulus.
/// A zero vector is left alone.
fn normalize(v: &mut [f64]) {
    let Some((_, &peak)) = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
    else {
        return;
    };
    if peak != 0.0 {
        v.iter_mut().for_each(|x| *x /= peak);
    }
}

fn random_start(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    normalize(&mut v);
    v
}

#[derive(Debug, Clone)]
pub struct PowerResult {
    pub lambda: f64,
    pub v: GridFunction,
    pub iterations: usize,
    /// `false` when `max_iter` ran out before two successive estimates came
    /// within `tol`.
    pub converged: bool,
}

/// Dominant eigenvalue by power iteration from a seeded random start.
/// The estimate is the Rayleigh quotient `v.Av / v.v`.
pub fn power_iteration(a: &OperatorMatrix, tol: f64, max_iter: usize, seed: u64) -> PowerResult {
    assert!(tol > 0.0, "tol must be positive");
    let mut v = random_start(a.dim(), seed);
    let mut lambda = f64::NAN;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let w = a.mul_vec(&v);
        let next = dot(&v, &w) / dot(&v, &v);
        if sup(&w) == 0.0 {
            lambda = 0.0;
            converged = true;
            break;
        }
        v = w;
        normalize(&mut v);
        let done = (next - lambda).abs() <= tol;
        lambda = next;
        if done {
            converged = true;
            break;
        }
    }
    let v = GridFunction::new(a.grid().clone(), v).expect("same grid");
    PowerResult {
        lambda,
        v,
        iterations,
        converged,
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    /// Best candidate, sup-norm 1.
    pub f: GridFunction,
    /// Residual of `f`.
    pub r: f64,
    /// Best residual after each iteration; non-increasing.
    pub history: Vec<f64>,
    pub seed: u64,
}

/// Looks for a unit-sup-norm `f` with small `|f - Tf|` by gradient descent
/// on `|(A - I)f|^2 / |f|^2`.
pub fn min_residual_search(grid: &Grid, iters: usize, seed: u64) -> SearchResult {
    let a = assemble_matrix(grid);
    let mut out = min_residual_search_with(&a, iters, seed);
    // Report the functional residual; agrees with the matrix one to rounding.
    out.r = residual(&out.f);
    out
}

/// Same search for an arbitrary matrix; `r` is `max |(A - I)f|`.
pub fn min_residual_search_with(a: &OperatorMatrix, iters: usize, seed: u64) -> SearchResult {
    assert!(iters > 0, "iters must be positive");
    let b = a.minus_identity();
    let sup_res = |f: &[f64]| sup(&b.mul_vec(f));
    // 1 / (|B|_1 |B|_inf) bounds 1 / |B^T B|_2 from below.
    let bound = b.norm_one() * b.norm_inf();
    let step = if bound > 0.0 { 1.0 / bound } else { 0.0 };

    let mut f = random_start(a.dim(), seed);
    let mut best = f.clone();
    let mut best_r = sup_res(&f);
    let mut history = Vec::with_capacity(iters);
    for _ in 0..iters {
        if step > 0.0 {
            let bf = b.mul_vec(&f);
            let btbf = b.transpose_mul_vec(&bf);
            let rq = dot(&bf, &bf) / dot(&f, &f);
            for (x, g) in f.iter_mut().zip(&btbf) {
                *x -= step * (g - rq * *x);
            }
            normalize(&mut f);
        }
        let r = sup_res(&f);
        if r < best_r {
            best_r = r;
            best.clone_from(&f);
        }
        history.push(best_r);
    }
    let f = GridFunction::new(a.grid().clone(), best).expect("same grid");
    SearchResult {
        f,
        r: best_r,
        history,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_function_has_zero_residual() {
        let f = GridFunction::zeros(Grid::new(0.3, 33).unwrap());
        assert_eq!(residual(&f), 0.0);
    }

    #[test]
    fn power_iteration_trivial_matrices() {
        let g = Grid::new(0.3, 20).unwrap();
        let id = power_iteration(&OperatorMatrix::identity(g.clone()), 1e-14, 10, 7);
        assert!((id.lambda - 1.0).abs() <= 1e-12);
        assert!(id.converged);
        assert!((id.v.sup_norm() - 1.0).abs() < 1e-15);
        let z = power_iteration(&OperatorMatrix::zeros(g), 1e-14, 10, 7);
        assert_eq!(z.lambda, 0.0);
    }

    #[test]
    fn search_on_identity_is_exact() {
        let g = Grid::new(0.3, 16).unwrap();
        let s = min_residual_search_with(&OperatorMatrix::identity(g), 5, 1);
        assert_eq!(s.r, 0.0);
        assert!((s.f.sup_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn search_is_deterministic_and_monotone() {
        let g = Grid::new(0.3, 64).unwrap();
        let a = min_residual_search(&g, 40, 11);
        let b = min_residual_search(&g, 40, 11);
        assert_eq!(a.f, b.f);
        assert_eq!(a.history, b.history);
        assert!(a.history.windows(2).all(|w| w[1] <= w[0]));
        assert!((a.f.sup_norm() - 1.0).abs() < 1e-12);
    }
}
