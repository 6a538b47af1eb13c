//! Seeded random instance generators for the property and acceptance
//! suites: region-dominant matrices, triangular and commuting pairs, and
//! block matrices with a well-conditioned `A12`.

use rand::Rng;

use crate::error::Result;
use crate::linalg::Matrix;
use crate::regions::Region;

fn signed(rng: &mut impl Rng, v: f64) -> f64 {
    if rng.random_bool(0.5) {
        v
    } else {
        -v
    }
}

pub fn uniform_matrix(rng: &mut impl Rng, rows: usize, cols: usize, lo: f64, hi: f64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(lo..hi))
}

/// One instance of each named region family with random parameters.
pub fn named_region(rng: &mut impl Rng, family: usize) -> Result<Region> {
    match family % 6 {
        0 => Region::half_plane(rng.random_range(-2.0..1.0)),
        1 => Region::cone(rng.random_range(-2.0..1.0), rng.random_range(0.1..1.5)),
        2 => Region::hyperbola(rng.random_range(0.3..3.0), rng.random_range(0.3..3.0)),
        3 => Region::parabola(rng.random_range(0.3..3.0)),
        4 => Region::horizontal_stripe(rng.random_range(0.3..3.0)),
        _ => {
            let a = rng.random_range(-6.0..-1.0);
            Region::vertical_stripe(a, a + rng.random_range(0.5..4.0))
        }
    }
}

/// A diagonal entry inside the real interval of `region`, kept at least
/// `gap` away from its finite endpoints.
pub fn interior_real(rng: &mut impl Rng, region: &Region) -> Result<f64> {
    let (lo, hi) = region.real_interval()?;
    let (lo, hi) = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (lo, hi),
        (false, true) => (hi - 10.0, hi),
        (true, false) => (lo, lo + 10.0),
        (false, false) => (-5.0, 5.0),
    };
    let gap = 1e-3 * (hi - lo);
    Ok(rng.random_range(lo + gap..hi - gap))
}

/// Off-diagonal entries for row `i` with absolute sum `total`.
fn fill_row(rng: &mut impl Rng, m: &mut Matrix, i: usize, total: f64) {
    let n = m.ncols();
    if n < 2 {
        return;
    }
    let w: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.0..1.0) + 1e-3).collect();
    let s: f64 = w.iter().sum();
    let mut k = 0;
    for j in 0..n {
        if j != i {
            m[(i, j)] = signed(rng, total * w[k] / s);
            k += 1;
        }
    }
}

/// Row-wise diagonally dominant matrix for `region`: each `a_ii` in the
/// region and the off-diagonal row sum a random fraction (at most
/// `slack`) of `r(a_ii)`.
pub fn region_dominant(rng: &mut impl Rng, region: &Region, n: usize, slack: f64) -> Result<Matrix> {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        let x = interior_real(rng, region)?;
        m[(i, i)] = x;
        let r = region.radius(x)?;
        let total = rng.random_range(0.0..slack) * r;
        fill_row(rng, &mut m, i, total);
    }
    Ok(m)
}

/// Negative diagonal with strict row dominance.
pub fn row_ndd(rng: &mut impl Rng, n: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        let d = rng.random_range(0.2..5.0);
        m[(i, i)] = -d;
        let total = rng.random_range(0.0..0.95) * d;
        fill_row(rng, &mut m, i, total);
    }
    m
}

/// Upper triangular pair with diagonal entries in `[-3, 1]` and `[-4, 1]`.
pub fn triangular_pair(rng: &mut impl Rng, n: usize) -> (Matrix, Matrix) {
    let mut tri = |lo: f64, hi: f64| {
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                rng.random_range(lo..hi)
            } else if i < j {
                rng.random_range(-2.0..2.0)
            } else {
                0.0
            }
        })
    };
    let a = tri(-3.0, 1.0);
    let b = tri(-4.0, 1.0);
    (a, b)
}

/// `(A, p(A))` with `p` a random quadratic, so `A` and `B` commute.
pub fn commuting_pair(rng: &mut impl Rng, n: usize) -> (Matrix, Matrix) {
    let a = uniform_matrix(rng, n, n, -1.5, 1.0);
    let c0 = rng.random_range(-3.0..0.5);
    let c1 = rng.random_range(-1.0..1.0);
    let c2 = rng.random_range(-0.5..0.5);
    let b = Matrix::identity(n, n) * c0 + &a * c1 + &a * &a * c2;
    (a, b)
}

/// Random square matrix with condition number below `cap`.
pub fn well_conditioned(rng: &mut impl Rng, n: usize, cap: f64) -> Matrix {
    loop {
        let m = uniform_matrix(rng, n, n, -1.0, 1.0) + Matrix::identity(n, n) * rng.random_range(-1.0..1.0);
        let sv = m.singular_values();
        if sv.max() / sv.min() < cap {
            return m;
        }
    }
}

/// `[[A11, A12], [A21, A22]]`.
pub fn assemble_blocks(a11: &Matrix, a12: &Matrix, a21: &Matrix, a22: &Matrix) -> Matrix {
    let k = a11.nrows();
    let mut a = Matrix::zeros(2 * k, 2 * k);
    a.view_mut((0, 0), (k, k)).copy_from(a11);
    a.view_mut((0, k), (k, k)).copy_from(a12);
    a.view_mut((k, 0), (k, k)).copy_from(a21);
    a.view_mut((k, k), (k, k)).copy_from(a22);
    a
}

/// `2k x 2k` matrix with random blocks and `cond(A12) < 1e6`.
pub fn even_block_matrix(rng: &mut impl Rng, k: usize) -> Matrix {
    let a12 = well_conditioned(rng, k, 1e6);
    assemble_blocks(
        &uniform_matrix(rng, k, k, -2.0, 2.0),
        &a12,
        &uniform_matrix(rng, k, k, -2.0, 2.0),
        &uniform_matrix(rng, k, k, -2.0, 2.0),
    )
}

/// Block matrix whose reduction gives the prescribed `A_hat` and `B_hat`:
/// `A11 = A12 (A_hat - A22) A12^-1` and
/// `A21 = (B_hat + A22 (A_hat - A22)) A12^-1`.
pub fn block_matrix_from_pencil(a_hat: &Matrix, b_hat: &Matrix, a12: &Matrix, a22: &Matrix) -> Option<Matrix> {
    let inv = a12.clone().try_inverse()?;
    let diff = a_hat - a22;
    let a11 = a12 * &diff * &inv;
    let a21 = (b_hat + a22 * &diff) * &inv;
    Some(assemble_blocks(&a11, a12, &a21, a22))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dominance::is_region_dominant;
    use crate::fractional::block_reduce;
    use crate::spectra::trial_rng;

    #[test]
    fn generated_matrices_are_dominant() {
        let mut rng = trial_rng(1, 0);
        for fam in 0..6 {
            let r = named_region(&mut rng, fam).unwrap();
            let a = region_dominant(&mut rng, &r, 4, 0.95).unwrap();
            assert!(is_region_dominant(&a, &r).unwrap().holds(), "{r}");
        }
    }

    #[test]
    fn pencil_inversion_round_trips() {
        let mut rng = trial_rng(2, 0);
        let a_hat = uniform_matrix(&mut rng, 3, 3, -1.0, 1.0);
        let b_hat = uniform_matrix(&mut rng, 3, 3, -1.0, 1.0);
        let a12 = well_conditioned(&mut rng, 3, 100.0);
        let a22 = uniform_matrix(&mut rng, 3, 3, -1.0, 1.0);
        let a = block_matrix_from_pencil(&a_hat, &b_hat, &a12, &a22).unwrap();
        let red = block_reduce(&a).unwrap();
        assert!((&red.a_hat - a_hat).amax() < 1e-9);
        assert!((&red.b_hat - b_hat).amax() < 1e-9);
    }
}
