//! The Cayley algebra `O = H ⊕ H`.
//!
//! Components are stored in Cayley–Dickson order: indices `0..4` hold the
//! first quaternion `q₁ = (1, i, j, k)` and `4..8` the second `q₂`. The
//! product is
//!
//! ```text
//! (q₁, q₂)(s₁, s₂) = (q₁s₁ − s̄₂q₂, s₂q₁ + q₂s̄₁)
//! ```
//!
//! and conjugation is `(q̄₁, −q₂)`. [`PaperBasis`] is a relabeling of the
//! imaginary units used by the sphere computations; it never changes the
//! storage order.

mod basis;
pub mod identities;
mod quaternion;

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

pub use basis::{search_paper_basis, PaperBasis, SignedUnit};
pub use quaternion::Quaternion;

use crate::error::{Error, Result};
use crate::numkit::Matrix;
use crate::scalar::Real;

/// Tolerance for the preconditions of derived constructions.
pub const CONSTRUCTION_TOL: f64 = 1e-10;

#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Octonion<T>(pub [T; 8]);

impl<T: Real> Octonion<T> {
    pub fn zero() -> Self {
        Self([T::zero(); 8])
    }

    pub fn one() -> Self {
        Self::unit(0)
    }

    /// The `k`-th Cayley–Dickson basis element (`0` is the real unit).
    pub fn unit(k: usize) -> Self {
        let mut c = [T::zero(); 8];
        c[k] = T::one();
        Self(c)
    }

    pub fn from_slice(s: &[T]) -> Result<Self> {
        let arr: [T; 8] = s
            .try_into()
            .map_err(|_| Error::Dimension(format!("octonion from {} components", s.len())))?;
        Ok(Self(arr))
    }

    /// Real scalar `r · 1`.
    pub fn real(r: T) -> Self {
        let mut o = Self::zero();
        o.0[0] = r;
        o
    }

    /// Purely imaginary octonion from its seven imaginary components.
    pub fn imaginary(im: &[T; 7]) -> Self {
        let mut c = [T::zero(); 8];
        c[1..].copy_from_slice(im);
        Self(c)
    }

    pub fn components(&self) -> &[T; 8] {
        &self.0
    }

    pub fn to_vec(&self) -> Vec<T> {
        self.0.to_vec()
    }

    pub fn halves(&self) -> (Quaternion<T>, Quaternion<T>) {
        (
            Quaternion::from_slice(&self.0[..4]),
            Quaternion::from_slice(&self.0[4..]),
        )
    }

    pub fn from_halves(q1: Quaternion<T>, q2: Quaternion<T>) -> Self {
        let mut c = [T::zero(); 8];
        c[..4].copy_from_slice(&q1.to_array());
        c[4..].copy_from_slice(&q2.to_array());
        Self(c)
    }

    pub fn conj(&self) -> Self {
        let mut c = self.0;
        for x in &mut c[1..] {
            *x = -*x;
        }
        Self(c)
    }

    pub fn re(&self) -> T {
        self.0[0]
    }

    pub fn im(&self) -> Self {
        let mut c = self.0;
        c[0] = T::zero();
        Self(c)
    }

    pub fn inner(&self, other: &Self) -> T {
        self.0.iter().zip(&other.0).map(|(&a, &b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> T {
        self.inner(self)
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, s: T) -> Self {
        Self(self.0.map(|x| x * s))
    }

    /// `x⁻¹ = x̄ / |x|²`; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm_sq();
        (n > T::zero()).then(|| self.conj().scale(T::one() / n))
    }

    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > T::zero()).then(|| self.scale(T::one() / n))
    }

    pub fn max_abs(&self) -> T {
        self.0.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    /// Distance `|self − other|`.
    pub fn dist(&self, other: &Self) -> T {
        (*self - *other).norm()
    }

    /// `(x y) z − x (y z)`.
    pub fn associator(x: &Self, y: &Self, z: &Self) -> Self {
        (*x * *y) * *z - *x * (*y * *z)
    }

    /// Applies an 8×8 operator in Cayley–Dickson coordinates.
    pub fn apply(op: &Matrix<T>, x: &Self) -> Self {
        let v = op.mul_vec(&x.0);
        Self::from_slice(&v).expect("8x8 operator")
    }
}

/// The Cayley–Dickson product.
pub fn mul<T: Real>(x: &Octonion<T>, y: &Octonion<T>) -> Octonion<T> {
    let (q1, q2) = x.halves();
    let (s1, s2) = y.halves();
    Octonion::from_halves(q1 * s1 - s2.conj() * q2, s2 * q1 + q2 * s1.conj())
}

/// Standard Euclidean inner product on `R⁸`.
pub fn inner<T: Real>(x: &Octonion<T>, y: &Octonion<T>) -> T {
    x.inner(y)
}

/// Matrix of `L_w : x ↦ w x` in Cayley–Dickson coordinates.
pub fn left_op<T: Real>(w: &Octonion<T>) -> Matrix<T> {
    operator_from(|b| mul(w, &Octonion::unit(b)))
}

/// Matrix of `R_w : x ↦ x w`.
pub fn right_op<T: Real>(w: &Octonion<T>) -> Matrix<T> {
    operator_from(|b| mul(&Octonion::unit(b), w))
}

/// Matrix whose column `b` is `f(b)`.
pub fn operator_from<T: Real>(f: impl Fn(usize) -> Octonion<T>) -> Matrix<T> {
    let cols: Vec<Octonion<T>> = (0..8).map(f).collect();
    Matrix::from_fn(8, 8, |i, j| cols[j].0[i])
}

/// Splits a unit imaginary `z` as `z = z₁ z₂` with `z₁, z₂` unit imaginary
/// and orthogonal.
///
/// `z₁` is the first Cayley–Dickson imaginary unit not (nearly) parallel to
/// `z`, orthogonalized against `z` and normalized; then `z₂ = z̄₁ z = −z₁ z`.
pub fn decompose_orthogonal<T: Real>(z: &Octonion<T>) -> Result<(Octonion<T>, Octonion<T>)> {
    let tol = T::lit(CONSTRUCTION_TOL);
    if z.re().abs() > tol || (z.norm() - T::one()).abs() > tol {
        return Err(Error::Precondition(format!(
            "decompose_orthogonal needs a unit imaginary octonion (re = {}, |z| = {})",
            z.re(),
            z.norm()
        )));
    }
    let min_len = T::lit(0.1);
    let z1 = (1..8)
        .find_map(|k| {
            let e = Octonion::unit(k);
            let u = e - z.scale(e.inner(z));
            (u.norm() > min_len).then(|| u.normalized().expect("nonzero"))
        })
        .expect("a unit vector has some coordinate direction away from it");
    let z2 = mul(&z1.conj(), z);
    Ok((z1, z2))
}

impl<T: Real> Mul for Octonion<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        mul(&self, &rhs)
    }
}

impl<T: Real> Add for Octonion<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(rhs.0) {
            *a = *a + b;
        }
        Self(c)
    }
}

impl<T: Real> AddAssign for Octonion<T> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Real> Sub for Octonion<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Real> Neg for Octonion<T> {
    type Output = Self;

    fn neg(self) -> Self {
        Self(self.0.map(|x| -x))
    }
}

impl<T: Real> std::fmt::Debug for Octonion<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "O{:?}", self.0.map(|x| x.as_f64()))
    }
}
