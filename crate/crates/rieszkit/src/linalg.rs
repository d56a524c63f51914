//! Dense decomposition helpers on top of `faer`, exposed over `ndarray` storage.

use faer::prelude::*;
use faer::Side;
use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) fn to_faer(a: &Array2<Complex64>) -> Mat<c64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

pub(crate) fn from_faer(m: &Mat<c64>) -> Array2<Complex64> {
    Array2::from_shape_fn((m.nrows(), m.ncols()), |(i, j)| m[(i, j)])
}

/// Singular values of a complex matrix, descending.
pub fn singular_values(a: &Array2<Complex64>) -> Vec<f64> {
    let m = to_faer(a);
    let svd = m.svd().expect("svd failed to converge");
    let s = svd.S().column_vector();
    (0..s.nrows()).map(|i| s[i].re).collect()
}

/// 2-norm condition number sigma_max / sigma_min.
pub fn condition_number(a: &Array2<Complex64>) -> f64 {
    let s = singular_values(a);
    match (s.first(), s.last()) {
        (Some(&max), Some(&min)) if min > 0.0 => max / min,
        _ => f64::INFINITY,
    }
}

/// Matrix inverse guarded by a condition-number bound.
pub fn inverse(a: &Array2<Complex64>, cond_guard: f64) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    let cond = condition_number(a);
    if !cond.is_finite() || cond > cond_guard {
        return Err(Error::Singular { cond, guard: cond_guard });
    }
    let m = to_faer(a);
    let lu = m.partial_piv_lu();
    let inv: Mat<c64> = lu.solve(&Mat::<c64>::identity(n, n));
    let inv = from_faer(&inv);
    if inv.iter().any(|z| !z.is_finite()) {
        return Err(Error::Singular { cond, guard: cond_guard });
    }
    Ok(inv)
}

/// Full SVD a = u * diag(s) * v^*.
pub fn svd(a: &Array2<Complex64>) -> (Array2<Complex64>, Vec<f64>, Array2<Complex64>) {
    let m = to_faer(a);
    let svd = m.svd().expect("svd failed to converge");
    let s = svd.S().column_vector();
    let sv = (0..s.nrows()).map(|i| s[i].re).collect();
    (from_faer(&svd.U().to_owned()), sv, from_faer(&svd.V().to_owned()))
}

/// Eigenvalues of a general complex matrix (unordered).
pub fn eigenvalues(a: &Array2<Complex64>) -> Vec<Complex64> {
    let m = to_faer(a);
    let eig = m.eigen().expect("eigendecomposition failed to converge");
    let s = eig.S().column_vector();
    (0..s.nrows()).map(|i| s[i]).collect()
}

/// Eigendecomposition of a real symmetric matrix; eigenvalues ascending,
/// columns of the returned matrix are the eigenvectors.
pub fn symmetric_eigen(a: &Array2<f64>) -> (Array1<f64>, Array2<f64>) {
    let n = a.nrows();
    let m = Mat::<f64>::from_fn(n, n, |i, j| a[(i, j)]);
    let eig = m
        .self_adjoint_eigen(Side::Lower)
        .expect("symmetric eigendecomposition failed to converge");
    let s = eig.S();
    let u = eig.U();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| s[i].partial_cmp(&s[j]).unwrap());
    let vals = Array1::from_iter(idx.iter().map(|&i| s[i]));
    let vecs = Array2::from_shape_fn((n, n), |(i, j)| u[(i, idx[j])]);
    (vals, vecs)
}

/// Max-abs entry of a complex matrix.
pub fn max_abs(a: &Array2<Complex64>) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Frobenius norm.
pub fn fro_norm(a: &Array2<Complex64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
