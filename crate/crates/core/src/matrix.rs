//! Minimal dense matrices plus a cyclic Jacobi eigensolver for symmetric
//! matrices. This is enough linear algebra for clique-sized blocks; nothing
//! here is tuned for large dimensions.

use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged rows".into()));
        }
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: r,
            cols: c,
            data,
        })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if (self.get(i, j) - self.get(j, i)).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// `(A + A^T) / 2`. Panics if not square.
    pub fn symmetrized(&self) -> Matrix {
        assert!(self.is_square());
        let n = self.rows;
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, 0.5 * (self.get(i, j) + self.get(j, i)));
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.
///
/// Returns `(eigenvalues, v)` with `a = v * diag(eigenvalues) * v^T`; the
/// columns of `v` are the eigenvectors (unsorted). Sweeps stop once the
/// off-diagonal Frobenius norm drops below `1e-10` times its initial value.
/// Symmetry lets each rotation touch only the upper triangle, so the
/// working copy's lower triangle is never read.
pub fn sym_eigen(a: &Matrix) -> (Vec<f64>, Matrix) {
    assert!(a.is_square());
    let n = a.rows();
    if n == 0 {
        return (Vec::new(), Matrix::identity(0));
    }

    let mut m = a.data.clone();
    let mut v = Matrix::identity(n);
    let mut d: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    if n == 1 {
        return (d, v);
    }
    let mut accum = d.clone();
    let mut delta = vec![0.0; n];

    let off_norm = |m: &[f64]| -> f64 {
        let mut sum = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                let x = m[p * n + q];
                sum += x * x;
            }
        }
        (2.0 * sum).sqrt()
    };

    let target = 1e-10 * off_norm(&m);
    const MAX_SWEEPS: usize = 60;

    for sweep in 0..MAX_SWEEPS {
        let off = off_norm(&m);
        if off <= target || off == 0.0 {
            break;
        }
        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                let small = 100.0 * apq.abs();
                // Late sweeps: a pivot too small to move either diagonal is
                // annihilated outright.
                if sweep > 3
                    && d[p].abs() + small == d[p].abs()
                    && d[q].abs() + small == d[q].abs()
                {
                    m[p * n + q] = 0.0;
                    continue;
                }
                if apq == 0.0 {
                    continue;
                }

                let diff = d[q] - d[p];
                let t = if diff.abs() + small == diff.abs() {
                    apq / diff
                } else {
                    let theta = 0.5 * diff / apq;
                    let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                let h = t * apq;
                delta[p] -= h;
                delta[q] += h;
                d[p] -= h;
                d[q] += h;
                m[p * n + q] = 0.0;

                let rot = |x: &mut f64, y: &mut f64| {
                    let (g, h) = (*x, *y);
                    *x = g - s * (h + g * tau);
                    *y = h + s * (g - h * tau);
                };

                // Rows above p: two fixed columns.
                for row in m.chunks_exact_mut(n).take(p) {
                    let (head, tail) = row.split_at_mut(q);
                    rot(&mut head[p], &mut tail[0]);
                }
                // Between p and q: row p meets column q.
                {
                    let (left, right) = m.split_at_mut((p + 1) * n);
                    let row_p = &mut left[p * n..];
                    for j in (p + 1)..q {
                        rot(&mut row_p[j], &mut right[(j - p - 1) * n + q]);
                    }
                }
                // Beyond q: rows p and q side by side.
                {
                    let (left, right) = m.split_at_mut(q * n);
                    let row_p = &mut left[p * n + q + 1..p * n + n];
                    let row_q = &mut right[q + 1..n];
                    for (x, y) in row_p.iter_mut().zip(row_q.iter_mut()) {
                        rot(x, y);
                    }
                }
                for row in v.data.chunks_exact_mut(n) {
                    let (head, tail) = row.split_at_mut(q);
                    rot(&mut head[p], &mut tail[0]);
                }
            }
        }
        for p in 0..n {
            accum[p] += delta[p];
            d[p] = accum[p];
            delta[p] = 0.0;
        }
    }

    (d, v)
}
