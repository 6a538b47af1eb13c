//! Small dense linear-algebra helpers shared by the analysis modules.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;

/// Default absolute tolerance for structural tests (zero patterns, symmetry).
pub const STRUCT_TOL: f64 = 1e-12;

/// A complex number in report form, `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexPoint {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(p: ComplexPoint) -> Self {
        Complex64::new(p.re, p.im)
    }
}

/// Builds a matrix from row vectors. Rows must be non-empty and of equal length.
pub fn from_rows(rows: &[Vec<f64>]) -> Result<Matrix> {
    let nrows = rows.len();
    if nrows == 0 || rows[0].is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let ncols = rows[0].len();
    if let Some(bad) = rows.iter().position(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch(format!(
            "row {bad} has {} entries, expected {ncols}",
            rows[bad].len()
        )));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(Matrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

pub fn to_rows(a: &Matrix) -> Vec<Vec<f64>> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)]).collect())
        .collect()
}

/// Checks that `a` is square, non-empty and finite; returns its order.
pub fn check_square(a: &Matrix) -> Result<usize> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(Error::EmptyMatrix);
    }
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(a.nrows())
}

/// Sum of absolute off-diagonal entries of row `i`.
pub fn off_diagonal_row_sum(a: &Matrix, i: usize) -> f64 {
    (0..a.ncols())
        .filter(|&j| j != i)
        .map(|j| a[(i, j)].abs())
        .sum()
}

/// Largest absolute entry.
pub fn max_abs(a: &Matrix) -> f64 {
    a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// `diag(d) * a`, scaling row `i` by `d[i]`.
pub fn scale_rows(d: &[f64], a: &Matrix) -> Matrix {
    let mut out = a.clone();
    for (i, mut row) in out.row_iter_mut().enumerate() {
        row *= d[i];
    }
    out
}

/// Comparison matrix: `|a_ii|` on the diagonal, `-|a_ij|` elsewhere.
pub fn comparison_matrix(a: &Matrix) -> Matrix {
    Matrix::from_fn(a.nrows(), a.ncols(), |i, j| {
        if i == j {
            a[(i, j)].abs()
        } else {
            -a[(i, j)].abs()
        }
    })
}

pub fn is_diagonal(a: &Matrix, tol: f64) -> bool {
    (0..a.nrows()).all(|i| (0..a.ncols()).all(|j| i == j || a[(i, j)].abs() <= tol))
}

/// Eigenvalues of the symmetric part `(a + a^T) / 2`, ascending.
pub fn symmetric_eigenvalues(a: &Matrix) -> Vec<f64> {
    let sym = (a + a.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Largest eigenvalue of a symmetric matrix (the symmetric part is used).
pub fn lambda_max_sym(a: &Matrix) -> f64 {
    *symmetric_eigenvalues(a).last().expect("non-empty matrix")
}

/// Largest eigenvalue of the Hermitian matrix `re + i·im`, where `re` is
/// symmetric and `im` antisymmetric. Uses the real symmetric embedding
/// `[[re, -im], [im, re]]`, whose spectrum is that of the Hermitian matrix
/// with every eigenvalue doubled.
pub fn lambda_max_hermitian(re: &Matrix, im: &Matrix) -> f64 {
    let k = re.nrows();
    let emb = Matrix::from_fn(2 * k, 2 * k, |i, j| {
        let (bi, bj) = (i / k, j / k);
        let (r, c) = (i % k, j % k);
        match (bi, bj) {
            (0, 0) | (1, 1) => re[(r, c)],
            (0, 1) => -im[(r, c)],
            _ => im[(r, c)],
        }
    });
    lambda_max_sym(&emb)
}

/// Solves the linear assignment problem for the cost matrix `cost` (n x n),
/// returning `assign[i] = j`. Hungarian method with potentials, O(n^3).
pub fn min_cost_assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    let inf = f64::INFINITY;
    // 1-based indexing as in the classical formulation; column 0 is a sentinel.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            assign[p[j] - 1] = j - 1;
        }
    }
    assign
}

/// Largest pairwise distance under the minimum-total-distance matching of two
/// equally sized multisets of complex numbers. Returns `+inf` on size mismatch.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let cost: Vec<Vec<f64>> = a
        .iter()
        .map(|x| b.iter().map(|y| (x - y).norm()).collect())
        .collect();
    let assign = min_cost_assignment(&cost);
    assign
        .iter()
        .enumerate()
        .map(|(i, &j)| cost[i][j])
        .fold(0.0, f64::max)
}
