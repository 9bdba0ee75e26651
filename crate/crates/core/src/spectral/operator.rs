use rayon::prelude::*;

use super::grid::{Grid, GridFunction};

/// Offsets and weights (in units of 1/4q) of the three arguments of `T`.
const STENCIL: [(f64, f64); 3] = [(-1.0, 1.0), (1.0, 1.0), (0.0, 2.0)];

fn arguments(y: f64, q: f64) -> [(f64, f64); 3] {
    let x = y / q;
    let c = 1.0 / (4.0 * q);
    STENCIL.map(|(off, w)| (x + off, w * c))
}

/// `T` applied pointwise through interpolated evaluation.
pub fn apply_operator(f: &GridFunction) -> GridFunction {
    let g = f.grid();
    let q = g.q();
    let values = g
        .points()
        .par_iter()
        .map(|&y| {
            let [a, b, c] = arguments(y, q);
            a.1 * f.eval(a.0) + b.1 * f.eval(b.0) + c.1 * f.eval(c.0)
        })
        .collect();
    GridFunction::new(g.clone(), values).expect("same grid")
}

/// Sparse row-compressed `n x n` matrix over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    grid: Grid,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

/// Stencil of `T` at grid point `y`. At most six entries, duplicates merged.
fn row_entries(grid: &Grid, y: f64) -> Vec<(usize, f64)> {
    let mut row: Vec<(usize, f64)> = Vec::with_capacity(6);
    let mut push = |col: usize, w: f64| {
        if w == 0.0 {
            return;
        }
        match row.iter_mut().find(|(c, _)| *c == col) {
            Some(e) => e.1 += w,
            None => row.push((col, w)),
        }
    };
    for (x, w) in arguments(y, grid.q()) {
        if let Some((k, t)) = grid.locate(x) {
            push(k, (1.0 - t) * w);
            push(k + 1, t * w);
        }
    }
    row.sort_by_key(|e| e.0);
    row
}

pub fn assemble_matrix(grid: &Grid) -> OperatorMatrix {
    let rows: Vec<Vec<(usize, f64)>> = grid
        .points()
        .par_iter()
        .map(|&y| row_entries(grid, y))
        .collect();
    OperatorMatrix::from_rows(grid.clone(), rows)
}

impl OperatorMatrix {
    fn from_rows(grid: Grid, rows: Vec<Vec<(usize, f64)>>) -> Self {
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in rows {
            for (c, v) in row {
                cols.push(c);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        OperatorMatrix {
            grid,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn identity(grid: Grid) -> Self {
        let rows = (0..grid.len()).map(|j| vec![(j, 1.0)]).collect();
        Self::from_rows(grid, rows)
    }

    pub fn zeros(grid: Grid) -> Self {
        let rows = vec![Vec::new(); grid.len()];
        Self::from_rows(grid, rows)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Nonzeros of row `j` as `(column, value)`, columns increasing.
    pub fn row(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[j]..self.row_ptr[j + 1];
        self.cols[r.clone()]
            .iter()
            .copied()
            .zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|e| e.0 == j).map_or(0.0, |e| e.1)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim());
        (0..self.dim())
            .map(|j| self.row(j).map(|(c, a)| a * v[c]).sum())
            .collect()
    }

    pub fn transpose_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim());
        let mut out = vec![0.0; self.dim()];
        for (j, vj) in v.iter().enumerate() {
            for (c, a) in self.row(j) {
                out[c] += a * vj;
            }
        }
        out
    }

    pub fn apply(&self, f: &GridFunction) -> GridFunction {
        GridFunction::new(self.grid.clone(), self.mul_vec(f.values())).expect("same grid")
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim())
            .map(|j| self.row(j).map(|e| e.1.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        let mut sums = vec![0.0f64; self.dim()];
        for (c, v) in self.cols.iter().zip(&self.vals) {
            sums[*c] += v.abs();
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// `self - I`.
    pub fn minus_identity(&self) -> OperatorMatrix {
        let rows = (0..self.dim())
            .map(|j| {
                let mut row: Vec<(usize, f64)> = self.row(j).collect();
                match row.iter_mut().find(|e| e.0 == j) {
                    Some(e) => e.1 -= 1.0,
                    None => {
                        row.push((j, -1.0));
                        row.sort_by_key(|e| e.0);
                    }
                }
                row
            })
            .collect();
        Self::from_rows(self.grid.clone(), rows)
    }
}
