//! Real realizations of complex and quaternionic matrices.
//!
//! `Cⁿ → R²ⁿ`: `z_k = x_{2k} + i x_{2k+1}`, scalar `a + bi ↦ [[a, −b], [b, a]]`.
//! `Hⁿ → R⁴ⁿ`: `q_k = (x_{4k}, …, x_{4k+3})` in the `(1, i, j, k)` basis;
//! a matrix entry `p` acts by the 4×4 left multiplication `L_p`, a right
//! scalar `u` by `R_u` on every coordinate.

use crate::octonion::Quaternion;
use crate::Matrix;

type Q = Quaternion<f64>;

pub fn unit_quaternion(k: usize) -> Q {
    let mut c = [0.0; 4];
    c[k] = 1.0;
    Q::from_slice(&c)
}

fn quaternion_op(f: impl Fn(Q) -> Q) -> Matrix {
    let cols: Vec<Vec<f64>> = (0..4).map(|k| f(unit_quaternion(k)).to_array().to_vec()).collect();
    Matrix::from_columns(&cols).expect("four columns of length four")
}

/// `v ↦ p v`.
pub fn quat_left(p: Q) -> Matrix {
    quaternion_op(|v| p * v)
}

/// `v ↦ v p`.
pub fn quat_right(p: Q) -> Matrix {
    quaternion_op(|v| v * p)
}

/// Complex `n×n` matrix (entry list `(row, col, re, im)`) as a real `2n×2n`.
pub fn complex_matrix(n: usize, entries: &[(usize, usize, f64, f64)]) -> Matrix {
    let mut m = Matrix::zeros(2 * n, 2 * n);
    for &(r, c, re, im) in entries {
        m[(2 * r, 2 * c)] += re;
        m[(2 * r, 2 * c + 1)] -= im;
        m[(2 * r + 1, 2 * c)] += im;
        m[(2 * r + 1, 2 * c + 1)] += re;
    }
    m
}

/// Quaternionic `n×n` matrix acting from the left on column vectors.
pub fn quaternion_matrix(n: usize, entries: &[(usize, usize, Q)]) -> Matrix {
    let mut m = Matrix::zeros(4 * n, 4 * n);
    for &(r, c, p) in entries {
        let block = quat_left(p);
        for a in 0..4 {
            for b in 0..4 {
                m[(4 * r + a, 4 * c + b)] += block[(a, b)];
            }
        }
    }
    m
}

/// The right scalar action `v ↦ v p` on `Hⁿ`.
pub fn right_scalar(n: usize, p: Q) -> Matrix {
    let block = quat_right(p);
    Matrix::from_fn(4 * n, 4 * n, |r, c| {
        if r / 4 == c / 4 {
            block[(r % 4, c % 4)]
        } else {
            0.0
        }
    })
}

/// `i · diag(d)` as a real matrix on `Cⁿ`.
pub fn complex_imag_diag(d: &[f64]) -> Matrix {
    let entries: Vec<_> = d.iter().enumerate().map(|(k, &v)| (k, k, 0.0, v)).collect();
    complex_matrix(d.len(), &entries)
}

/// `diag(d) · u` for a quaternion unit index `u ∈ 1..=3`, left action on `Hⁿ`.
pub fn quaternion_imag_diag(d: &[f64], u: usize) -> Matrix {
    let e = unit_quaternion(u);
    let entries: Vec<_> = d
        .iter()
        .enumerate()
        .map(|(k, &v)| (k, k, Q::new(e.w * v, e.x * v, e.y * v, e.z * v)))
        .collect();
    quaternion_matrix(d.len(), &entries)
}

/// Basis of `so(n)`: `E_kl − E_lk`, `k < l`.
pub fn so_basis(n: usize) -> Vec<Matrix> {
    let mut out = Vec::new();
    for k in 0..n {
        for l in (k + 1)..n {
            let mut m = Matrix::zeros(n, n);
            m[(k, l)] = 1.0;
            m[(l, k)] = -1.0;
            out.push(m);
        }
    }
    out
}

/// Basis of `u(n)`; with `traceless` the diagonal part is replaced by
/// `i(E_kk − E_{k+1,k+1})`, giving `su(n)`.
pub fn unitary_basis(n: usize, traceless: bool) -> Vec<Matrix> {
    let mut out = Vec::new();
    if traceless {
        for k in 0..n.saturating_sub(1) {
            out.push(complex_matrix(n, &[(k, k, 0.0, 1.0), (k + 1, k + 1, 0.0, -1.0)]));
        }
    } else {
        for k in 0..n {
            out.push(complex_matrix(n, &[(k, k, 0.0, 1.0)]));
        }
    }
    for k in 0..n {
        for l in (k + 1)..n {
            out.push(complex_matrix(n, &[(k, l, 1.0, 0.0), (l, k, -1.0, 0.0)]));
            out.push(complex_matrix(n, &[(k, l, 0.0, 1.0), (l, k, 0.0, 1.0)]));
        }
    }
    out
}

/// Basis of `sp(n)`: quaternionic skew-Hermitian matrices.
pub fn symplectic_basis(n: usize) -> Vec<Matrix> {
    let mut out = Vec::new();
    for k in 0..n {
        for u in 1..4 {
            out.push(quaternion_matrix(n, &[(k, k, unit_quaternion(u))]));
        }
    }
    for k in 0..n {
        for l in (k + 1)..n {
            let one = unit_quaternion(0);
            out.push(quaternion_matrix(n, &[(k, l, one), (l, k, -one)]));
            for u in 1..4 {
                let e = unit_quaternion(u);
                out.push(quaternion_matrix(n, &[(k, l, e), (l, k, e)]));
            }
        }
    }
    out
}
