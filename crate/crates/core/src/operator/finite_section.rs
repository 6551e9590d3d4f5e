//! Dense finite sections of `WH_φ`.
//!
//! On the staggered grid the discrete `WH_φ` is exactly Toeplitz plus
//! Hankel in the half-line indices: with the convolution kernel
//! `a(d) = (A_φ δ_0)(d)`,
//!
//! `M[i][j] = a(i − j) + a(i + j + 1)`,
//!
//! since `ℓ^e` sends the unit sample at plus index `j` to the pair of nodes
//! `j` and `−1 − j`. The matrix is assembled from one kernel transform and
//! never touches the operator pipeline, so it is an independent oracle for
//! it.

use num_complex::Complex64;

use super::{Multiplier, OperatorError, Signal};

/// Largest section built.
pub const FINITE_SECTION_CAP: usize = 512;

/// Row-major dense square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.n)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n);
        self.rows()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// The `n × n` section of `WH_φ` on the first `n` nodes with `x > 0`.
pub fn finite_section_matrix(m: &Multiplier, n: usize) -> Result<DenseMatrix, OperatorError> {
    let half = m.grid().points() / 2;
    if n > FINITE_SECTION_CAP || n > half {
        return Err(OperatorError::SizeCap {
            n,
            cap: FINITE_SECTION_CAP.min(half),
        });
    }
    let kernel = m.kernel();
    let len = kernel.len() as isize;
    let a = |d: isize| kernel[d.rem_euclid(len) as usize];
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n as isize {
        for j in 0..n as isize {
            data.push(a(i - j) + a(i + j + 1));
        }
    }
    Ok(DenseMatrix { n, data })
}

/// First `n` plus-side samples of a signal.
pub fn leading_plus_values(f: &Signal, n: usize) -> Vec<Complex64> {
    f.plus_values()[..n].to_vec()
}
