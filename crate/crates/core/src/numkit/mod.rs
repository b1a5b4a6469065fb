//! Shared dense linear algebra: matrices, exponential, rank, least squares
//! and seeded randomness.

pub mod decomp;
pub mod matrix;
pub mod rng;

pub use decomp::{householder_qr, inverse, nullspace, solve, Svd, SymEig};
pub use matrix::{axpy, dot, max_abs_diff, norm, scaled, sub, Matrix};
pub use rng::RngStream;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative singular-value threshold used by every rank assertion unless a
/// caller overrides it.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Squarings are capped at this depth; with the scaled norm brought to 1/2
/// this accepts any `‖M‖₁ < 2^47`, far beyond the modest generators used here.
pub const MAX_SQUARINGS: u32 = 48;

const TAYLOR_MAX_TERMS: usize = 40;

/// `e^M` by scaling and squaring with a truncated Taylor series.
///
/// The input is scaled by `2^-s` so that `‖M‖₁ ≤ 1/2`, the series is summed
/// until the next term drops below machine precision relative to the partial
/// sum, and the result is squared `s` times.
pub fn mat_exp<T: Real>(m: &Matrix<T>) -> Result<Matrix<T>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "exponential of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_finite() {
        return Err(Error::Precondition("non-finite entries in mat_exp".into()));
    }
    let n = m.rows();
    let norm = m.norm_1();
    let half = T::lit(0.5);
    let mut squarings = 0u32;
    if norm > half {
        squarings = (norm / half).log2().ceil().to_u32().unwrap_or(u32::MAX);
    }
    if squarings > MAX_SQUARINGS {
        return Err(Error::Precondition(format!(
            "mat_exp input norm {norm} exceeds the squaring cap"
        )));
    }
    let a = m.scale(T::lit(0.5f64.powi(squarings as i32)));

    let mut sum = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=TAYLOR_MAX_TERMS {
        term = (&term * &a).scale(T::one() / T::lit(k as f64));
        sum += &term;
        if term.max_abs() <= T::epsilon() * sum.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

/// Numerical rank of a family of equal-length vectors: the number of singular
/// values above `tol · σ_max`.
pub fn rank_tol<T: Real>(vectors: &[Vec<T>], tol: T) -> Result<usize> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    if vectors.iter().any(|v| v.len() != first.len()) {
        return Err(Error::Dimension("rank_tol: vectors of unequal length".into()));
    }
    if tol <= T::zero() {
        return Err(Error::Precondition("rank_tol: tolerance must be positive".into()));
    }
    let a = Matrix::from_columns(vectors)?;
    Ok(Svd::new(&a).rank(tol))
}

/// Least-squares solution of `a x ≈ y`, returning `(x, ‖a x − y‖₂)`.
///
/// Rank-deficient systems get the minimum-norm minimizer: the pseudo-inverse
/// drops singular values below `max(rows, cols) · ε · σ_max`.
pub fn lstsq<T: Real>(a: &Matrix<T>, y: &[T]) -> Result<(Vec<T>, T)> {
    if a.rows() == 0 {
        return Err(Error::Precondition("lstsq needs at least one row".into()));
    }
    if a.rows() != y.len() {
        return Err(Error::Dimension(format!(
            "lstsq with {} rows and right-hand side of length {}",
            a.rows(),
            y.len()
        )));
    }
    let svd = Svd::new(a);
    let cutoff = T::lit(a.rows().max(a.cols()) as f64) * T::epsilon() * svd.max_singular();
    let mut x = vec![T::zero(); a.cols()];
    for (j, &s) in svd.singular.iter().enumerate() {
        if s <= cutoff || s == T::zero() {
            continue;
        }
        let coeff = (0..a.rows()).map(|i| svd.u[(i, j)] * y[i]).sum::<T>() / s;
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = *xi + coeff * svd.v[(i, j)];
        }
    }
    let residual = norm(&sub(&a.mul_vec(&x), y));
    Ok((x, residual))
}

/// Distance from `target` to the span of `basis`, via least squares.
pub fn span_distance<T: Real>(basis: &[Vec<T>], target: &[T]) -> Result<T> {
    if basis.is_empty() {
        return Ok(norm(target));
    }
    let a = Matrix::from_columns(basis)?;
    lstsq(&a, target).map(|(_, r)| r)
}
