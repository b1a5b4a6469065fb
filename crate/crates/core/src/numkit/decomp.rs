//! Dense decompositions: Householder QR, one-sided Jacobi SVD, cyclic Jacobi
//! symmetric eigensolver and LU with partial pivoting.
//!
//! Everything works on column vectors internally (`Vec<Vec<T>>`, one entry per
//! column) since both Jacobi variants sweep over column pairs.

use crate::error::{Error, Result};
use crate::numkit::matrix::{dot, Matrix};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 80;

fn columns_of<T: Real>(a: &Matrix<T>) -> Vec<Vec<T>> {
    (0..a.cols()).map(|j| a.column(j)).collect()
}

fn from_columns<T: Real>(rows: usize, cols: &[Vec<T>]) -> Matrix<T> {
    Matrix::from_fn(rows, cols.len(), |i, j| cols[j][i])
}

/// Thin QR of a tall matrix (`rows >= cols`): `a = q r` with `q` having
/// orthonormal columns and `r` upper triangular.
pub fn householder_qr<T: Real>(a: &Matrix<T>) -> (Matrix<T>, Matrix<T>) {
    let (m, n) = a.shape();
    assert!(m >= n, "householder_qr needs rows >= cols");
    let mut cols = columns_of(a);
    let mut reflectors: Vec<Vec<T>> = Vec::with_capacity(n);

    for k in 0..n {
        let x = &cols[k][k..];
        let alpha = x.iter().map(|&v| v * v).sum::<T>().sqrt();
        let mut v = x.to_vec();
        let sign = if v[0] >= T::zero() { T::one() } else { -T::one() };
        v[0] = v[0] + sign * alpha;
        let vnorm = dot(&v, &v).sqrt();
        if vnorm > T::zero() {
            for e in &mut v {
                *e = *e / vnorm;
            }
            for col in cols.iter_mut().skip(k) {
                let tail = &mut col[k..];
                let p = dot(&v, tail);
                let two_p = p + p;
                for (t, &vi) in tail.iter_mut().zip(&v) {
                    *t = *t - two_p * vi;
                }
            }
        }
        reflectors.push(v);
    }

    let r = Matrix::from_fn(n, n, |i, j| if i <= j { cols[j][i] } else { T::zero() });

    // Q = H_0 H_1 ... H_{n-1} applied to the first n unit vectors.
    let mut q_cols: Vec<Vec<T>> = (0..n)
        .map(|j| {
            let mut e = vec![T::zero(); m];
            e[j] = T::one();
            e
        })
        .collect();
    for k in (0..n).rev() {
        let v = &reflectors[k];
        if v.iter().all(|&x| x == T::zero()) {
            continue;
        }
        for col in &mut q_cols {
            let tail = &mut col[k..];
            let p = dot(v, tail);
            let two_p = p + p;
            for (t, &vi) in tail.iter_mut().zip(v) {
                *t = *t - two_p * vi;
            }
        }
    }
    (from_columns(m, &q_cols), r)
}

/// Thin singular value decomposition `a = u · diag(singular) · vᵀ`, singular
/// values in descending order.
#[derive(Debug, Clone)]
pub struct Svd<T: Real> {
    pub u: Matrix<T>,
    pub singular: Vec<T>,
    pub v: Matrix<T>,
}

impl<T: Real> Svd<T> {
    pub fn new(a: &Matrix<T>) -> Self {
        let (m, n) = a.shape();
        if m < n {
            let t = Self::new(&a.transpose());
            return Self {
                u: t.v,
                singular: t.singular,
                v: t.u,
            };
        }
        if m > n {
            let (q, r) = householder_qr(a);
            let inner = Self::square(&r);
            return Self {
                u: &q * &inner.u,
                singular: inner.singular,
                v: inner.v,
            };
        }
        Self::square(a)
    }

    fn square(a: &Matrix<T>) -> Self {
        let n = a.cols();
        let mut w = columns_of(a);
        let mut v: Vec<Vec<T>> = (0..n)
            .map(|j| {
                let mut e = vec![T::zero(); n];
                e[j] = T::one();
                e
            })
            .collect();
        let eps = T::epsilon();

        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n {
                for q in (p + 1)..n {
                    let alpha = dot(&w[p], &w[p]);
                    let beta = dot(&w[q], &w[q]);
                    let gamma = dot(&w[p], &w[q]);
                    if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (gamma + gamma);
                    let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                    let c = T::one() / (T::one() + t * t).sqrt();
                    let s = c * t;
                    rotate_pair(&mut w, p, q, c, s);
                    rotate_pair(&mut v, p, q, c, s);
                }
            }
            if !rotated {
                break;
            }
        }

        let mut order: Vec<(T, usize)> = w.iter().map(|c| dot(c, c).sqrt()).zip(0..).collect();
        order.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite singular values"));
        let singular: Vec<T> = order.iter().map(|&(s, _)| s).collect();
        let u_cols: Vec<Vec<T>> = order
            .iter()
            .map(|&(s, j)| {
                if s > T::zero() {
                    w[j].iter().map(|&x| x / s).collect()
                } else {
                    vec![T::zero(); n]
                }
            })
            .collect();
        let v_cols: Vec<Vec<T>> = order.iter().map(|&(_, j)| v[j].clone()).collect();
        Self {
            u: from_columns(n, &u_cols),
            singular,
            v: from_columns(n, &v_cols),
        }
    }

    pub fn max_singular(&self) -> T {
        self.singular.first().copied().unwrap_or_else(T::zero)
    }

    /// Number of singular values above `rel_tol · σ_max`.
    pub fn rank(&self, rel_tol: T) -> usize {
        let cutoff = rel_tol * self.max_singular();
        if self.max_singular() == T::zero() {
            return 0;
        }
        self.singular.iter().filter(|&&s| s > cutoff).count()
    }
}

fn rotate_pair<T: Real>(cols: &mut [Vec<T>], p: usize, q: usize, c: T, s: T) {
    let (lo, hi) = cols.split_at_mut(q);
    let (cp, cq) = (&mut lo[p], &mut hi[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// Eigen-decomposition of a symmetric matrix: ascending eigenvalues and the
/// matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct SymEig<T: Real> {
    pub values: Vec<T>,
    pub vectors: Matrix<T>,
}

impl<T: Real> SymEig<T> {
    pub fn new(a: &Matrix<T>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension("eigen-decomposition of a non-square matrix".into()));
        }
        let n = a.rows();
        let mut m = a.clone();
        let mut v = Matrix::identity(n);
        let eps = T::epsilon();

        for _ in 0..MAX_SWEEPS {
            let off: T = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| m[(i, j)] * m[(i, j)])
                .sum();
            let diag: T = (0..n).map(|i| m[(i, i)] * m[(i, i)]).sum();
            if off <= eps * eps * diag || off == T::zero() {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = m[(p, q)];
                    if apq == T::zero() {
                        continue;
                    }
                    let theta = (m[(q, q)] - m[(p, p)]) / (apq + apq);
                    let t = theta.signum() / (theta.abs() + (T::one() + theta * theta).sqrt());
                    let c = T::one() / (T::one() + t * t).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
                        m[(k, p)] = c * mkp - s * mkq;
                        m[(k, q)] = s * mkp + c * mkq;
                    }
                    for k in 0..n {
                        let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
                        m[(p, k)] = c * mpk - s * mqk;
                        m[(q, k)] = s * mpk + c * mqk;
                    }
                    for k in 0..n {
                        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| m[(i, i)].partial_cmp(&m[(j, j)]).expect("finite eigenvalues"));
        Ok(Self {
            values: order.iter().map(|&i| m[(i, i)]).collect(),
            vectors: Matrix::from_fn(n, n, |r, c| v[(r, order[c])]),
        })
    }

    pub fn min(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }
}

/// Solves `a x = b` for square `a` by LU with partial pivoting.
pub fn solve<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    if !a.is_square() || a.rows() != b.rows() {
        return Err(Error::Dimension(format!(
            "solve with {}x{} system and {}x{} right-hand side",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let n = a.rows();
    let mut lu = a.clone();
    let mut x = b.clone();
    let scale = a.max_abs();
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| lu[(i, k)].abs().partial_cmp(&lu[(j, k)].abs()).unwrap())
            .expect("non-empty pivot range");
        if lu[(pivot, k)].abs() <= T::epsilon() * scale * T::lit(n as f64) {
            return Err(Error::Precondition("singular matrix in solve".into()));
        }
        if pivot != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(pivot, j)];
                lu[(pivot, j)] = t;
            }
            for j in 0..x.cols() {
                let t = x[(k, j)];
                x[(k, j)] = x[(pivot, j)];
                x[(pivot, j)] = t;
            }
        }
        for i in (k + 1)..n {
            let f = lu[(i, k)] / lu[(k, k)];
            lu[(i, k)] = f;
            for j in (k + 1)..n {
                let d = f * lu[(k, j)];
                lu[(i, j)] = lu[(i, j)] - d;
            }
            for j in 0..x.cols() {
                let d = f * x[(k, j)];
                x[(i, j)] = x[(i, j)] - d;
            }
        }
    }
    for j in 0..x.cols() {
        for i in (0..n).rev() {
            let mut acc = x[(i, j)];
            for k in (i + 1)..n {
                acc = acc - lu[(i, k)] * x[(k, j)];
            }
            x[(i, j)] = acc / lu[(i, i)];
        }
    }
    Ok(x)
}

pub fn inverse<T: Real>(a: &Matrix<T>) -> Result<Matrix<T>> {
    solve(a, &Matrix::identity(a.rows()))
}

/// Orthonormal basis (as columns) of `{x : a x = 0}`, taking singular values
/// below `rel_tol · σ_max` as zero.
pub fn nullspace<T: Real>(a: &Matrix<T>, rel_tol: T) -> Matrix<T> {
    let (m, n) = a.shape();
    let padded = if m < n {
        Matrix::from_fn(n, n, |i, j| if i < m { a[(i, j)] } else { T::zero() })
    } else {
        a.clone()
    };
    let svd = Svd::new(&padded);
    let rank = svd.rank(rel_tol);
    let keep: Vec<Vec<T>> = (rank..n).map(|j| svd.v.column(j)).collect();
    Matrix::from_fn(n, keep.len(), |i, j| keep[j][i])
}
