use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GridSpec, OperatorError};

/// Largest magnitude tolerated at `x < 0` for a half-line signal.
pub const PLUS_SUPPORT_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Support {
    FullLine,
    PlusHalfLine,
}

/// Samples on the nodes of a grid.
///
/// Half-line signals (elements of `L²(ℝ₊)`) are stored on the full grid with
/// exact zeros at `x < 0`, which makes `ℓ₀` a relabeling.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    grid: GridSpec,
    values: Vec<Complex64>,
    support: Support,
}

impl Signal {
    pub fn full(grid: GridSpec, values: Vec<Complex64>) -> Result<Self, OperatorError> {
        if values.len() != grid.points() {
            return Err(OperatorError::GridMismatch);
        }
        Ok(Self {
            grid,
            values,
            support: Support::FullLine,
        })
    }

    pub fn plus(grid: GridSpec, mut values: Vec<Complex64>) -> Result<Self, OperatorError> {
        if values.len() != grid.points() {
            return Err(OperatorError::GridMismatch);
        }
        let half = grid.plus_start();
        if let Some((n, v)) = values[..half]
            .iter()
            .enumerate()
            .find(|(_, v)| v.norm() > PLUS_SUPPORT_TOL)
        {
            return Err(OperatorError::NotPlusSupported {
                x: grid.x(n),
                magnitude: v.norm(),
            });
        }
        values[..half].fill(Complex64::default());
        Ok(Self {
            grid,
            values,
            support: Support::PlusHalfLine,
        })
    }

    pub fn zeros(grid: GridSpec, support: Support) -> Self {
        Self {
            grid,
            values: vec![Complex64::default(); grid.points()],
            support,
        }
    }

    pub fn full_from_fn(grid: GridSpec, f: impl Fn(f64) -> Complex64) -> Self {
        Self {
            grid,
            values: grid.nodes().into_iter().map(f).collect(),
            support: Support::FullLine,
        }
    }

    /// `f` sampled at `x > 0`, zero elsewhere.
    pub fn plus_from_fn(grid: GridSpec, f: impl Fn(f64) -> Complex64) -> Self {
        let half = grid.plus_start();
        let values = (0..grid.points())
            .map(|n| if n < half { Complex64::default() } else { f(grid.x(n)) })
            .collect();
        Self {
            grid,
            values,
            support: Support::PlusHalfLine,
        }
    }

    /// Unit sample at the `j`-th node with `x > 0`.
    pub fn plus_delta(grid: GridSpec, j: usize) -> Self {
        let mut s = Self::zeros(grid, Support::PlusHalfLine);
        s.values[grid.plus_start() + j] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Samples at `x > 0`.
    pub fn plus_values(&self) -> &[Complex64] {
        &self.values[self.grid.plus_start()..]
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn is_plus(&self) -> bool {
        self.support == Support::PlusHalfLine
    }

    pub(crate) fn with_values(&self, values: Vec<Complex64>, support: Support) -> Self {
        debug_assert_eq!(values.len(), self.grid.points());
        Self {
            grid: self.grid,
            values,
            support,
        }
    }

    pub(crate) fn same_grid(&self, other: &Self) -> Result<(), OperatorError> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(OperatorError::GridMismatch)
        }
    }

    pub fn expect_plus(&self) -> Result<(), OperatorError> {
        if self.is_plus() {
            return Ok(());
        }
        Signal::plus(self.grid, self.values.clone()).map(|_| ())
    }

    /// `α·self + β·other`; the support is the wider of the two.
    pub fn combine(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Result<Self, OperatorError> {
        self.same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        let support = if self.is_plus() && other.is_plus() {
            Support::PlusHalfLine
        } else {
            Support::FullLine
        };
        Ok(self.with_values(values, support))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, OperatorError> {
        self.combine(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self, OperatorError> {
        self.combine(Complex64::new(1.0, 0.0), other, Complex64::new(1.0, 0.0))
    }

    /// Discrete `L²` norm `(h Σ |f_n|²)^{1/2}`.
    pub fn norm(&self) -> f64 {
        self.window_norm(f64::NEG_INFINITY, f64::INFINITY)
    }

    /// `L²` norm over nodes with `lo < x ≤ hi`.
    pub fn window_norm(&self, lo: f64, hi: f64) -> f64 {
        let h = self.grid.spacing();
        let sum: f64 = self
            .values
            .iter()
            .enumerate()
            .filter(|(n, _)| {
                let x = self.grid.x(*n);
                x > lo && x <= hi
            })
            .map(|(_, v)| v.norm_sqr())
            .sum();
        (h * sum).sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// CSV `x,re,im` with a header and 17 significant digits. Half-line
    /// signals are written for `x > 0` only.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), OperatorError> {
        let mut out = csv::Writer::from_writer(w);
        let csv_err = |e: csv::Error| OperatorError::Csv(e.to_string());
        out.write_record(["x", "re", "im"]).map_err(csv_err)?;
        let start = if self.is_plus() { self.grid.plus_start() } else { 0 };
        for n in start..self.grid.points() {
            let v = self.values[n];
            out.write_record([sci(self.grid.x(n)), sci(v.re), sci(v.im)])
                .map_err(csv_err)?;
        }
        out.flush().map_err(|e| OperatorError::Csv(e.to_string()))
    }

    /// Reads CSV written by [`Signal::write_csv`]. Rows covering only
    /// `x > 0` give a half-line signal; all nodes give a full-line one.
    pub fn read_csv<R: Read>(grid: GridSpec, r: R) -> Result<Self, OperatorError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| OperatorError::Csv(e.to_string()))?;
            if rec.len() != 3 {
                return Err(OperatorError::Csv(format!("expected 3 columns, found {}", rec.len())));
            }
            let field = |i: usize| -> Result<f64, OperatorError> {
                rec[i]
                    .parse::<f64>()
                    .map_err(|e| OperatorError::Csv(format!("`{}`: {e}", &rec[i])))
            };
            rows.push((field(0)?, Complex64::new(field(1)?, field(2)?)));
        }
        let (start, support) = if rows.len() == grid.points() {
            (0, Support::FullLine)
        } else if rows.len() == grid.points() - grid.plus_start() {
            (grid.plus_start(), Support::PlusHalfLine)
        } else {
            return Err(OperatorError::Csv(format!(
                "{} rows do not match a grid of {} points",
                rows.len(),
                grid.points()
            )));
        };
        let tol = 1e-9 * grid.spacing().max(1.0);
        let mut values = vec![Complex64::default(); grid.points()];
        for (k, (x, v)) in rows.into_iter().enumerate() {
            let want = grid.x(start + k);
            if (x - want).abs() > tol {
                return Err(OperatorError::Csv(format!(
                    "row {}: x = {x} is not the grid node {want}",
                    k + 1
                )));
            }
            values[start + k] = v;
        }
        match support {
            Support::FullLine => Signal::full(grid, values),
            Support::PlusHalfLine => Signal::plus(grid, values),
        }
    }
}

fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new(8.0, 32).unwrap()
    }

    #[test]
    fn plus_rejects_negative_support() {
        let mut v = vec![Complex64::default(); 32];
        v[3] = Complex64::new(1e-3, 0.0);
        assert!(matches!(
            Signal::plus(grid(), v),
            Err(OperatorError::NotPlusSupported { .. })
        ));
    }

    #[test]
    fn csv_round_trip_both_supports() {
        let f = Signal::full_from_fn(grid(), |x| Complex64::new(x.sin() / 3.0, x * 1e-7));
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x,re,im\n"));
        assert_eq!(text.lines().count(), 33);
        assert_eq!(Signal::read_csv(grid(), &buf[..]).unwrap(), f);

        let p = Signal::plus_from_fn(grid(), |x| Complex64::new(1.0 / 7.0, x));
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap().lines().count(), 17);
        assert_eq!(Signal::read_csv(grid(), &buf[..]).unwrap(), p);
    }

    #[test]
    fn csv_rejects_off_grid() {
        let text = "x,re,im\n1.0,0,0\n";
        assert!(Signal::read_csv(grid(), text.as_bytes()).is_err());
        let mut rows = String::from("x,re,im\n");
        for n in 16..32 {
            rows += &format!("{},1,0\n", grid().x(n) + 0.1);
        }
        assert!(Signal::read_csv(grid(), rows.as_bytes()).is_err());
    }

    #[test]
    fn window_norm_of_constant() {
        let g = GridSpec::new(4.0, 64).unwrap();
        let one = Signal::full_from_fn(g, |_| Complex64::new(1.0, 0.0));
        assert!((one.norm() - 8f64.sqrt()).abs() < 1e-12);
        assert!((one.window_norm(0.0, 2.0) - 2f64.sqrt()).abs() < 1e-12);
    }
}
