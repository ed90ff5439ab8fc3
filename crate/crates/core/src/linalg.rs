//! Dense numerical primitives: rank, least squares, Hermitian spectra, and
//! nonnegative least squares.
//!
//! Complex inputs are handled by realification: M = A + iB becomes the real
//! block matrix [[A, -B], [B, A]], whose singular values are those of M each
//! repeated twice. Every decomposition in the crate therefore runs through
//! real SVD or a real symmetric eigensolve.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::hermitian::{HermitianMatrix, Tolerances};

/// Number of singular values σ of the column matrix with σ > rank_rel · σ_max.
/// All-zero input has rank 0.
pub fn numerical_rank(columns: &[DVector<f64>], tol: &Tolerances) -> usize {
    assert!(!columns.is_empty(), "numerical_rank: empty column list");
    let m = DMatrix::from_columns(columns);
    real_matrix_rank(&m, tol.rank_rel)
}

pub(crate) fn real_matrix_rank(m: &DMatrix<f64>, rank_rel: f64) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let sigma_max = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > rank_rel * sigma_max).count()
}

/// Rank of a complex matrix over ℂ, computed from the realification (whose
/// singular values come in equal pairs).
pub fn complex_matrix_rank(m: &DMatrix<Complex64>, rank_rel: f64) -> usize {
    real_matrix_rank(&realify(m), rank_rel) / 2
}

/// [[Re M, -Im M], [Im M, Re M]]; Hermitian matrices realify to symmetric
/// matrices with each eigenvalue doubled.
pub(crate) fn realify(m: &DMatrix<Complex64>) -> DMatrix<f64> {
    let (r, c) = m.shape();
    let mut out = DMatrix::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            let z = m[(i, j)];
            out[(i, j)] = z.re;
            out[(i, j + c)] = -z.im;
            out[(i + r, j)] = z.im;
            out[(i + r, j + c)] = z.re;
        }
    }
    out
}

/// Minimizes ‖Mx − b‖₂ via the SVD pseudo-inverse, zeroing singular values
/// below rank_rel · σ_max. Returns the minimizer (minimum-norm when M is rank
/// deficient) and the attained residual norm.
pub fn least_squares(m: &DMatrix<f64>, b: &DVector<f64>, tol: &Tolerances) -> (DVector<f64>, f64) {
    assert!(m.ncols() >= 1, "least_squares: matrix has no columns");
    assert_eq!(m.nrows(), b.len(), "least_squares: row count must match rhs length");
    let svd = m.clone().svd(true, true);
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let x = svd
        .solve(b, tol.rank_rel * sigma_max)
        .expect("svd solve with nonnegative epsilon cannot fail");
    let residual = (m * &x - b).norm();
    (x, residual)
}

/// Smallest and largest eigenvalue of a Hermitian matrix, via the realified
/// symmetric eigenproblem.
pub(crate) fn hermitian_eigen_bounds(h: &HermitianMatrix) -> (f64, f64) {
    let eig = nalgebra::SymmetricEigen::new(realify(h.matrix()));
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in eig.eigenvalues.iter() {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}

/// Lawson–Hanson active-set solver for min ‖Ax − b‖₂ subject to x ≥ 0.
/// Returns the minimizer and its residual norm. Being a convex problem, a
/// zero residual certifies feasibility of Ax = b, x ≥ 0.
pub fn nonneg_least_squares(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    tol: &Tolerances,
) -> (DVector<f64>, f64) {
    let n = a.ncols();
    assert_eq!(a.nrows(), b.len(), "nonneg_least_squares: row count must match rhs length");
    let mut x = DVector::<f64>::zeros(n);
    let mut passive = vec![false; n];
    let dual_floor = 1e-12 * (1.0 + b.norm());

    let max_outer = 3 * n + 30;
    'outer: for _ in 0..max_outer {
        let w = a.tr_mul(&(b - a * &x));
        let mut best: Option<(usize, f64)> = None;
        for j in 0..n {
            if !passive[j] && w[j] > dual_floor && best.is_none_or(|(_, v)| w[j] > v) {
                best = Some((j, w[j]));
            }
        }
        let Some((enter, _)) = best else { break };
        passive[enter] = true;

        let max_inner = 3 * n + 30;
        for _ in 0..max_inner {
            let idx: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
            let sub = a.select_columns(idx.iter());
            let (z_sub, _) = least_squares(&sub, b, tol);
            if z_sub.iter().all(|&z| z > 0.0) {
                x.fill(0.0);
                for (k, &j) in idx.iter().enumerate() {
                    x[j] = z_sub[k];
                }
                continue 'outer;
            }
            // Step toward z until the first passive weight hits zero.
            let mut alpha = f64::INFINITY;
            for (k, &j) in idx.iter().enumerate() {
                if z_sub[k] <= 0.0 {
                    let t = x[j] / (x[j] - z_sub[k]);
                    if t < alpha {
                        alpha = t;
                    }
                }
            }
            for (k, &j) in idx.iter().enumerate() {
                x[j] += alpha * (z_sub[k] - x[j]);
            }
            for j in &idx {
                if x[*j].abs() <= f64::EPSILON * (1.0 + b.norm()) || x[*j] < 0.0 {
                    x[*j] = 0.0;
                    passive[*j] = false;
                }
            }
        }
    }
    let residual = (a * &x - b).norm();
    (x, residual)
}
