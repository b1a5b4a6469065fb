//! Homogeneous spheres `G/H` realized by linear isometric actions.
//!
//! A model carries a basis of `𝔤` as skew matrices on the ambient space and a
//! unit base point `x₀`. The tangent projection is `pr(Y) = Y x₀`, so the
//! Killing field of `X` pulled back along `g` is `pr(Ad(g⁻¹)X)`.

pub mod realize;
mod search;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{mat_exp, norm, span_distance, RngStream};
use crate::octonion::PaperBasis;
use crate::spinlie::{g2_subalgebra, gen_spin7, gen_spin9};
use crate::Matrix;

pub use search::{find_conjugation, ConjugationResult, SearchConfig};

/// Tolerance for "on the sphere" and tangency checks.
pub const SPHERE_TOL: f64 = 1e-10;
/// Exponential factors per random group element.
pub const ORBIT_FACTORS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SphereKind {
    SO,
    U,
    SU,
    Sp,
    SpU1,
    SpSp1,
    G2,
    Spin7,
    Spin9,
}

impl SphereKind {
    pub const ALL: [SphereKind; 9] = [
        SphereKind::SO,
        SphereKind::U,
        SphereKind::SU,
        SphereKind::Sp,
        SphereKind::SpU1,
        SphereKind::SpSp1,
        SphereKind::G2,
        SphereKind::Spin7,
        SphereKind::Spin9,
    ];

    pub fn is_classical(self) -> bool {
        !matches!(self, SphereKind::G2 | SphereKind::Spin7 | SphereKind::Spin9)
    }
}

impl fmt::Display for SphereKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for SphereKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SphereKind::ALL
            .into_iter()
            .find(|k| k.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown sphere kind {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct SphereModel {
    pub kind: SphereKind,
    /// Size parameter of the classical kinds.
    pub m: Option<usize>,
    pub ambient_dim: usize,
    pub lie_basis: Vec<Matrix>,
    pub base_point: Vec<f64>,
}

/// Builds one of the nine sphere models.
///
/// Classical kinds take `m ≥ 1`: `SO` is `SO(m+1)` on `Sᵐ`, `U`/`SU` act on
/// `S^{2m+1} ⊂ C^{m+1}`, and the three symplectic kinds on
/// `S^{4m+3} ⊂ H^{m+1}`. The base point is the real unit of the last
/// coordinate. `G2` acts on `S⁶ ⊂ Im O` at `e₇`, `Spin7` on `S⁷ ⊂ O` at `1`,
/// `Spin9` on `S¹⁵ ⊂ O ⊕ O` at `(1, 0)`; these take no parameter.
pub fn make_model(kind: SphereKind, m: Option<usize>) -> Result<SphereModel> {
    use realize::*;
    let (ambient_dim, lie_basis, base_index) = match (kind, m) {
        (k, None | Some(0)) if k.is_classical() => {
            return Err(Error::Config(format!("{k} needs a size parameter m >= 1")))
        }
        (k, Some(_)) if !k.is_classical() => {
            return Err(Error::Config(format!("{k} takes no size parameter")))
        }
        (SphereKind::SO, Some(m)) => (m + 1, so_basis(m + 1), m),
        (SphereKind::U, Some(m)) => (2 * m + 2, unitary_basis(m + 1, false), 2 * m),
        (SphereKind::SU, Some(m)) => (2 * m + 2, unitary_basis(m + 1, true), 2 * m),
        (SphereKind::Sp | SphereKind::SpU1 | SphereKind::SpSp1, Some(m)) => {
            let n = m + 1;
            let mut basis = symplectic_basis(n);
            let rights = if kind == SphereKind::SpU1 { 1..2 } else if kind == SphereKind::SpSp1 { 1..4 } else { 0..0 };
            basis.extend(rights.map(|u| right_scalar(n, unit_quaternion(u))));
            (4 * n, basis, 4 * m)
        }
        (SphereKind::G2, None) => {
            let basis = g2_subalgebra()?
                .iter()
                .map(|d| d.a.block(1, 1, 7, 7))
                .collect();
            let e7 = PaperBasis::new().vector::<f64>(7);
            return Ok(SphereModel {
                kind,
                m,
                ambient_dim: 7,
                lie_basis: basis,
                base_point: e7[1..].to_vec(),
            });
        }
        (SphereKind::Spin7, None) => {
            let basis = gen_spin7().triples().map(|t| t.b.clone()).collect();
            (8, basis, 0)
        }
        (SphereKind::Spin9, None) => {
            let basis = gen_spin9()
                .elements
                .iter()
                .map(|e| e.to_spin9().0)
                .collect();
            (16, basis, 0)
        }
        _ => unreachable!("parameter cases handled above"),
    };
    let mut base_point = vec![0.0; ambient_dim];
    base_point[base_index] = 1.0;
    Ok(SphereModel {
        kind,
        m,
        ambient_dim,
        lie_basis,
        base_point,
    })
}

/// Product of exponentials `exp(Y₁)⋯exp(Y_k)`, kept with its factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub factors: Vec<ExpFactor>,
    pub matrix: Matrix,
}

/// One exponential factor, in coordinates of the model's Lie basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExpFactor {
    /// `exp(Σ c_k B_k)`.
    Element { coeffs: Vec<f64> },
    /// `exp(t B_index)`.
    Generator { index: usize, t: f64 },
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        Self {
            factors: Vec::new(),
            matrix: Matrix::identity(n),
        }
    }

    /// Left-multiplies by `exp(e)`, whose matrix the caller supplies.
    pub(crate) fn push_left(&mut self, factor: ExpFactor, exp: &Matrix) {
        self.matrix = exp * &self.matrix;
        if let (
            Some(ExpFactor::Generator { index, t }),
            ExpFactor::Generator { index: k, t: s },
        ) = (self.factors.last_mut(), &factor)
        {
            if *index == *k {
                *t += s;
                return;
            }
        }
        self.factors.push(factor);
    }

    /// Rebuilds the matrix from the factor list (factors apply right to
    /// left in list order, i.e. the last one is leftmost).
    pub fn replay(&self, model: &SphereModel) -> Result<Matrix> {
        let mut g = Matrix::identity(model.ambient_dim);
        for f in &self.factors {
            let y = match f {
                ExpFactor::Element { coeffs } => model.element(coeffs)?,
                ExpFactor::Generator { index, t } => model.lie_basis[*index].scale(*t),
            };
            g = &mat_exp(&y)? * &g;
        }
        Ok(g)
    }
}

impl SphereModel {
    pub fn dim(&self) -> usize {
        self.lie_basis.len()
    }

    pub fn base_index(&self) -> usize {
        self.base_point
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .expect("nonempty base point")
    }

    /// `Σ c_k B_k`.
    pub fn element(&self, coeffs: &[f64]) -> Result<Matrix> {
        if coeffs.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "{} coefficients for a {}-dimensional algebra",
                coeffs.len(),
                self.dim()
            )));
        }
        let n = self.ambient_dim;
        let mut acc = Matrix::zeros(n, n);
        for (c, b) in coeffs.iter().zip(&self.lie_basis) {
            if *c != 0.0 {
                acc += &b.scale(*c);
            }
        }
        Ok(acc)
    }

    pub fn random_element(&self, rng: &mut RngStream) -> Matrix {
        let c = rng.normal_vec(self.dim());
        self.element(&c).expect("matching length")
    }

    /// `exp(Y₁)⋯exp(Y_k)` with `Y_i` having coefficients uniform in `[−π, π]`.
    pub fn random_group_element(&self, rng: &mut RngStream, k: usize) -> GroupElement {
        let mut g = GroupElement::identity(self.ambient_dim);
        for _ in 0..k {
            let coeffs: Vec<f64> = (0..self.dim())
                .map(|_| rng.uniform(-std::f64::consts::PI, std::f64::consts::PI))
                .collect();
            let e = mat_exp(&self.element(&coeffs).expect("matching length")).expect("square");
            g.push_left(ExpFactor::Element { coeffs }, &e);
        }
        g
    }

    /// Tangent projection `Y x₀`.
    pub fn pr(&self, y: &Matrix) -> Vec<f64> {
        y.mul_vec(&self.base_point)
    }

    /// Coordinates on `T_{x₀}S`: the base coordinate dropped.
    pub fn tangent_coords(&self, v: &[f64]) -> Vec<f64> {
        let b = self.base_index();
        v.iter()
            .enumerate()
            .filter(|&(i, _)| i != b)
            .map(|(_, &x)| x)
            .collect()
    }

    /// Distance of `X` to the span of the Lie basis.
    pub fn span_defect(&self, x: &Matrix) -> f64 {
        let flat: Vec<Vec<f64>> = self.lie_basis.iter().map(|b| b.as_slice().to_vec()).collect();
        span_distance(&flat, x.as_slice()).expect("uniform shapes")
    }
}

/// `Ad(g)X = g X g⁻¹` for orthogonal `g`.
pub fn adjoint(g: &Matrix, x: &Matrix) -> Matrix {
    &(g * x) * &g.transpose()
}

/// The Killing field of `X` at `p`, i.e. `X p`.
pub fn killing_value(model: &SphereModel, x: &Matrix, p: &[f64]) -> Result<Vec<f64>> {
    if p.len() != model.ambient_dim {
        return Err(Error::Dimension(format!(
            "point of length {} in R^{}",
            p.len(),
            model.ambient_dim
        )));
    }
    if (norm(p) - 1.0).abs() > SPHERE_TOL {
        return Err(Error::Precondition(format!(
            "point has norm {} instead of 1",
            norm(p)
        )));
    }
    Ok(x.mul_vec(p))
}

/// `‖g⁻¹(X(g x₀)) − (g⁻¹ X g) x₀‖`.
pub fn pullback_identity_check(model: &SphereModel, x: &Matrix, g: &Matrix) -> f64 {
    let gt = g.transpose();
    let p = g.mul_vec(&model.base_point);
    let lhs = gt.mul_vec(&x.mul_vec(&p));
    let rhs = model.pr(&adjoint(&gt, x));
    norm(&crate::numkit::sub(&lhs, &rhs))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitSample {
    pub kind: SphereKind,
    #[serde(rename = "X")]
    pub x: Matrix,
    pub seed: u64,
    /// Exponential factors per sampled conjugator.
    pub factors: usize,
    /// Ambient tangent vectors `pr(Ad(gᵢ)X)`.
    pub points: Vec<Vec<f64>>,
}

impl OrbitSample {
    pub fn max_tangency_defect(&self, base_point: &[f64]) -> f64 {
        self.points
            .iter()
            .map(|p| crate::numkit::dot(p, base_point).abs())
            .fold(0.0, f64::max)
    }
}

/// `n` points `pr(Ad(gᵢ)X)` for random `gᵢ`. Each sample draws from its own
/// child stream, so the result does not depend on the thread count.
pub fn sample_orbit(model: &SphereModel, x: &Matrix, n: usize, seed: u64) -> Result<OrbitSample> {
    if n == 0 {
        return Err(Error::Precondition("orbit sample needs n >= 1".into()));
    }
    let mut rng = RngStream::new(seed);
    let streams: Vec<RngStream> = (0..n).map(|_| rng.fork()).collect();
    let points = streams
        .into_par_iter()
        .map(|mut r| {
            let g = model.random_group_element(&mut r, ORBIT_FACTORS);
            model.pr(&adjoint(&g.matrix, x))
        })
        .collect();
    Ok(OrbitSample {
        kind: model.kind,
        x: x.clone(),
        seed,
        factors: ORBIT_FACTORS,
        points,
    })
}
