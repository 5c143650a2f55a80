//! Dense eigensolver wrappers.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

/// Default refusal threshold for dense eigensolves.
pub const DEFAULT_EIGEN_CAP: usize = 20_000;

/// Eigenvalues of a symmetric matrix, sorted descending with multiplicity.
///
/// Only the lower triangle is read.
pub fn symmetric_eigenvalues(matrix: DMatrix<f64>, cap: usize) -> Result<Vec<f64>> {
    let size = matrix.nrows();
    if size != matrix.ncols() {
        return Err(Error::DimensionMismatch { expected: size, got: matrix.ncols() });
    }
    if size > cap {
        return Err(Error::EigenCap { size, cap });
    }
    if size == 0 {
        return Ok(Vec::new());
    }
    // Eigenvalues only; the implicit QR loop runs until deflation.
    let eigenvalues = matrix.symmetric_eigenvalues();
    if eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(Error::EigenNonConvergence { size, iterations: 0 });
    }
    let mut values: Vec<f64> = eigenvalues.iter().copied().collect();
    sort_descending(&mut values);
    Ok(values)
}

/// Eigenvalues of a general square matrix via its real Schur form.
pub fn general_eigenvalues(matrix: DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    let size = matrix.nrows();
    if size != matrix.ncols() {
        return Err(Error::DimensionMismatch { expected: size, got: matrix.ncols() });
    }
    let schur = matrix
        .try_schur(f64::EPSILON, 200 * size + 1000)
        .ok_or(Error::EigenNonConvergence { size, iterations: 200 * size + 1000 })?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

pub fn sort_descending(values: &mut [f64]) {
    values.sort_by(|a, b| b.total_cmp(a));
}

/// Largest absolute difference between a matrix and its transpose.
pub fn symmetry_residual(matrix: &DMatrix<f64>) -> f64 {
    let n = matrix.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in (j + 1)..n {
            worst = worst.max((matrix[(i, j)] - matrix[(j, i)]).abs());
        }
    }
    worst
}
