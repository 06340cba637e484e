use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_traits::Float;

use super::matrix::{c64, vnorm, ComplexMatrix, C64};
use crate::error::{domain, Result};

/// Largest dimension for which [`op_norm`] uses a full dense decomposition.
pub const DENSE_NORM_LIMIT: usize = 64;
/// Relative convergence tolerance of [`op_norm_power`].
pub const POWER_TOL: f64 = 1e-12;
/// Iteration cap of [`op_norm_power`].
pub const POWER_MAX_ITER: usize = 10_000;

pub(crate) fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<C64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.data())
}

pub(crate) fn from_nalgebra(m: &DMatrix<C64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn ensure_nonempty(m: &ComplexMatrix) -> Result<()> {
    if m.rows() == 0 || m.cols() == 0 {
        Err(domain("operator norm of a matrix with a zero dimension"))
    } else {
        Ok(())
    }
}

/// Singular values in descending order, from a full dense SVD.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    ensure_nonempty(m)?;
    let sv = to_nalgebra(m).singular_values();
    let mut out: Vec<f64> = sv.iter().copied().collect();
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Only the Hermitian part `(M + M†)/2` is used.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    ensure_nonempty(m)?;
    if !m.is_square() {
        return Err(domain("eigenvalues need a square matrix"));
    }
    let h = (&to_nalgebra(m) + to_nalgebra(m).adjoint()) * c64(0.5, 0.0);
    let mut out: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    out.sort_by(|a, b| a.total_cmp(b));
    Ok(out)
}

/// Operator norm through a dense SVD, at any size.
pub fn op_norm_dense(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?[0])
}

/// Outcome of the power method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Operator norm by power iteration on `M†M`.
///
/// The start vector is deterministic. Iteration stops once the relative change
/// of the Rayleigh estimate drops below `tol` or after `max_iter` steps.
pub fn op_norm_power(m: &ComplexMatrix, tol: f64, max_iter: usize) -> Result<PowerIteration> {
    ensure_nonempty(m)?;
    let adj = m.adjoint();
    // Irregular but fixed start vector, so no singular subspace is missed by symmetry.
    let mut v: Vec<C64> = (0..m.cols())
        .map(|j| {
            let x = (j as f64 + 1.0) * 0.618_033_988_749_894_9;
            c64(1.0 + (x - Float::floor(x)), 0.5 - (x * 1.7 - Float::floor(x * 1.7)))
        })
        .collect();
    let n0 = vnorm(&v);
    v.iter_mut().for_each(|z| *z /= n0);
    let mut prev = 0.0;
    for it in 1..=max_iter {
        let mv = m.apply(&v);
        let w = adj.apply(&mv);
        let est = vnorm(&mv);
        let nw = vnorm(&w);
        if nw == 0.0 {
            return Ok(PowerIteration { value: 0.0, iterations: it, converged: true });
        }
        v = w.into_iter().map(|z| z / nw).collect();
        if it > 1 && (est - prev).abs() <= tol * est.max(f64::MIN_POSITIVE) {
            return Ok(PowerIteration { value: Float::sqrt(nw), iterations: it, converged: true });
        }
        prev = est;
    }
    let final_est = vnorm(&m.apply(&v));
    Ok(PowerIteration { value: final_est, iterations: max_iter, converged: false })
}

/// Largest singular value.
///
/// Uses a dense SVD when both dimensions are at most [`DENSE_NORM_LIMIT`] and the
/// power method otherwise.
pub fn op_norm(m: &ComplexMatrix) -> Result<f64> {
    if m.rows().max(m.cols()) <= DENSE_NORM_LIMIT {
        op_norm_dense(m)
    } else {
        Ok(op_norm_power(m, POWER_TOL, POWER_MAX_ITER)?.value)
    }
}

/// Frobenius norm.
pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.frobenius_norm()
}

/// Smallest eigenvalue of the Hermitian part; negative values flag non-PSD input.
pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?[0])
}

/// Numerical rank: number of singular values above `tol`.
pub fn rank(m: &ComplexMatrix, tol: f64) -> Result<usize> {
    Ok(singular_values(m)?.into_iter().filter(|&s| s > tol).count())
}
