use std::io::{Read, Write};

use super::SpectralError;

/// Uniform grid over `[-Q, Q]`, symmetric about zero bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    q: f64,
    big_q: f64,
    points: Vec<f64>,
    h: f64,
}

impl Grid {
    pub fn new(q: f64, n: usize) -> Result<Self, SpectralError> {
        if !(q > 0.0 && q < 1.0) {
            return Err(SpectralError::OutOfRange(q));
        }
        if n < 3 {
            return Err(SpectralError::TooFewPoints(n));
        }
        let big_q = q / (1.0 - q);
        let m = (n - 1) as f64;
        // k runs over -(n-1), -(n-3), ..., n-1 so that mirrored points are
        // exact negatives of each other.
        let points = (0..n)
            .map(|j| {
                let k = 2.0 * j as f64 - m;
                big_q * k / m
            })
            .collect();
        Ok(Grid {
            q,
            big_q,
            points,
            h: 2.0 * big_q / m,
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn big_q(&self) -> f64 {
        self.big_q
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    /// Interpolation stencil at `x`: `(k, t)` such that the value is
    /// `(1-t) v[k] + t v[k+1]`, or `None` outside `[-Q, Q]`.
    pub(crate) fn locate(&self, x: f64) -> Option<(usize, f64)> {
        if x.is_nan() || x.abs() > self.big_q {
            return None;
        }
        let n = self.points.len();
        let s = (x + self.big_q) / self.h;
        let k = (s.floor() as usize).min(n - 2);
        let t = ((x - self.points[k]) / self.h).clamp(0.0, 1.0);
        Some((k, t))
    }
}

/// Samples of a candidate solution; zero outside `[-Q, Q]`, linear between
/// grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self, SpectralError> {
        if values.len() != grid.len() {
            return Err(SpectralError::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(GridFunction { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        let n = grid.len();
        GridFunction {
            grid,
            values: vec![0.0; n],
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.points().iter().map(|&x| f(x)).collect();
        GridFunction { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.grid.locate(x) {
            None => 0.0,
            Some((k, t)) => (1.0 - t) * self.values[k] + t * self.values[k + 1],
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `x -> f(-x)`.
    pub fn reflect(&self) -> GridFunction {
        let mut values = self.values.clone();
        values.reverse();
        GridFunction {
            grid: self.grid.clone(),
            values,
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), SpectralError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "value"])?;
        for (x, v) in self.grid.points().iter().zip(&self.values) {
            w.write_record([x.to_string(), v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads an `x,value` table. The grid is rebuilt from the largest `x`
    /// (taken as `Q`) and the row count, and must match the file.
    pub fn read_csv<R: Read>(input: R) -> Result<Self, SpectralError> {
        let mut rdr = csv::Reader::from_reader(input);
        let headers = rdr.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "value" {
            return Err(SpectralError::BadGrid("header must be `x,value`".into()));
        }
        let mut xs = Vec::new();
        let mut values = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| SpectralError::BadGrid(format!("{s}: {e}")))
            };
            xs.push(parse(&rec[0])?);
            values.push(parse(&rec[1])?);
        }
        let big_q = *xs
            .last()
            .ok_or_else(|| SpectralError::BadGrid("no rows".into()))?;
        if big_q.is_nan() || big_q <= 0.0 {
            return Err(SpectralError::BadGrid("last x must be Q > 0".into()));
        }
        let grid = Grid::new(big_q / (1.0 + big_q), xs.len())?;
        let tol = 1e-9 * big_q.max(1.0);
        if let Some((x, y)) = xs
            .iter()
            .zip(grid.points())
            .find(|(x, y)| (**x - **y).abs() > tol)
        {
            return Err(SpectralError::BadGrid(format!(
                "x = {x} does not match uniform grid point {y}"
            )));
        }
        GridFunction::new(grid, values)
    }
}
