//! Minkowski norms on a tangent space, ellipsoid fitting of orbit
//! projections, and round-metric Clifford–Wolf checks.
//!
//! A Randers norm `F(v) = √(vᵀAv) + b·v` has the ellipsoid
//! `vᵀ(A − bbᵀ)v + 2b·v = 1` as indicatrix, so a fitted quadric
//! `vᵀQv + ℓ·v = 1` converts back through `b = ℓ/2`, `A = Q + bbᵀ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{dot, lstsq, norm, solve, RngStream, Svd, SymEig};
use crate::spheres::SphereModel;
use crate::Matrix;

/// Fitted centers at most this far from 0 count as Riemannian.
pub const CENTER_TOL: f64 = 1e-8;
/// Relative eigenvalue floor separating ellipsoids from degenerate quadrics.
pub const EIGEN_FLOOR: f64 = 1e-10;
/// Origin closer than this (in indicatrix radii) to the boundary is inconclusive.
pub const BOUNDARY_MARGIN: f64 = 1e-6;
/// Fits with a larger max defect are not ellipsoids.
pub const FIT_TOL: f64 = 1e-6;
/// Relative spread below which a norm counts as constant on a sample.
pub const KFCL_REL_TOL: f64 = 1e-8;

/// Serialized form of a [`MinkowskiNorm`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum NormForm {
    Riemannian {
        #[serde(rename = "Q")]
        q: Matrix,
    },
    Randers {
        #[serde(rename = "A")]
        a: Matrix,
        b: Vec<f64>,
    },
}

/// A validated Riemannian or Randers norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NormForm", into = "NormForm")]
pub struct MinkowskiNorm {
    form: NormForm,
}

fn check_spd(m: &Matrix, what: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("{what} is {:?}", m.shape())));
    }
    if m.symmetry_defect() > 1e-12 * m.max_abs().max(1.0) {
        return Err(Error::Precondition(format!("{what} is not symmetric")));
    }
    let min = SymEig::new(m)?.min();
    if !(min > 0.0) {
        return Err(Error::Precondition(format!(
            "{what} is not positive definite (min eigenvalue {min:e})"
        )));
    }
    Ok(())
}

impl MinkowskiNorm {
    pub fn riemannian(q: Matrix) -> Result<Self> {
        check_spd(&q, "Q")?;
        Ok(Self {
            form: NormForm::Riemannian { q },
        })
    }

    /// Requires `A` positive definite and `‖b‖_{A⁻¹} < 1`.
    pub fn randers(a: Matrix, b: Vec<f64>) -> Result<Self> {
        check_spd(&a, "A")?;
        if b.len() != a.rows() {
            return Err(Error::Dimension(format!(
                "b has length {} for a {}-dimensional A",
                b.len(),
                a.rows()
            )));
        }
        let nb = dual_norm(&a, &b)?;
        if !(nb < 1.0) {
            return Err(Error::Precondition(format!("‖b‖ = {nb} is not below 1")));
        }
        Ok(Self {
            form: NormForm::Randers { a, b },
        })
    }

    pub fn form(&self) -> &NormForm {
        &self.form
    }

    pub fn dim(&self) -> usize {
        match &self.form {
            NormForm::Riemannian { q } => q.rows(),
            NormForm::Randers { a, .. } => a.rows(),
        }
    }

    pub fn is_randers(&self) -> bool {
        matches!(self.form, NormForm::Randers { .. })
    }

    pub fn eval(&self, v: &[f64]) -> f64 {
        debug_assert_eq!(v.len(), self.dim());
        match &self.form {
            NormForm::Riemannian { q } => quad(q, v).max(0.0).sqrt(),
            NormForm::Randers { a, b } => quad(a, v).max(0.0).sqrt() + dot(b, v),
        }
    }

    /// `‖b‖_{A⁻¹}`, zero for Riemannian norms.
    pub fn drift(&self) -> f64 {
        match &self.form {
            NormForm::Riemannian { .. } => 0.0,
            NormForm::Randers { a, b } => dual_norm(a, b).expect("validated at construction"),
        }
    }
}

impl TryFrom<NormForm> for MinkowskiNorm {
    type Error = Error;

    fn try_from(form: NormForm) -> Result<Self> {
        match form {
            NormForm::Riemannian { q } => Self::riemannian(q),
            NormForm::Randers { a, b } => Self::randers(a, b),
        }
    }
}

impl From<MinkowskiNorm> for NormForm {
    fn from(n: MinkowskiNorm) -> Self {
        n.form
    }
}

fn quad(m: &Matrix, v: &[f64]) -> f64 {
    dot(v, &m.mul_vec(v))
}

fn dual_norm(a: &Matrix, b: &[f64]) -> Result<f64> {
    let rhs = Matrix::from_columns(&[b.to_vec()])?;
    let x = solve(a, &rhs)?;
    Ok(dot(b, &x.column(0)).max(0.0).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KfclReport {
    pub is_constant: bool,
    pub spread: f64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub samples: usize,
}

/// Whether `F` is constant on a finite orbit sample (points in the norm's
/// coordinates). A sample can refute constancy but only supports it.
pub fn kfcl_check(points: &[Vec<f64>], f: &MinkowskiNorm) -> Result<KfclReport> {
    if points.is_empty() {
        return Err(Error::Precondition("empty orbit sample".into()));
    }
    if let Some(p) = points.iter().find(|p| p.len() != f.dim()) {
        return Err(Error::Dimension(format!(
            "point of length {} for a {}-dimensional norm",
            p.len(),
            f.dim()
        )));
    }
    let values: Vec<f64> = points.iter().map(|p| f.eval(p)).collect();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let spread = max - min;
    Ok(KfclReport {
        is_constant: spread <= KFCL_REL_TOL * mean,
        spread,
        mean,
        min,
        max,
        samples: values.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitClass {
    Riemannian,
    Randers,
    Neither,
    /// Ellipsoid whose boundary passes within [`BOUNDARY_MARGIN`] of 0.
    Inconclusive,
}

/// Least-squares quadric through a point cloud, in coordinates of the
/// cloud's linear span.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadricFit {
    /// Orthonormal basis of the span, as columns (ambient × r).
    pub span: Matrix,
    /// Raw fit `yᵀ quadratic y + linear·y = 1` in span coordinates.
    pub quadratic: Matrix,
    pub linear: Vec<f64>,
    /// Recentered `(y − c)ᵀ Q (y − c) = 1`; equal to `quadratic` when the
    /// fit is not an ellipsoid.
    #[serde(rename = "Q")]
    pub q: Matrix,
    /// Center in ambient coordinates.
    pub center: Vec<f64>,
    pub residual: f64,
    pub min_eigenvalue: f64,
    /// `1 − ‖c‖_Q`: how deep the origin sits inside the ellipsoid.
    pub origin_depth: f64,
    pub classification: FitClass,
    pub diagnostics: Vec<String>,
}

impl QuadricFit {
    /// Span coordinates of an ambient vector.
    pub fn coords(&self, v: &[f64]) -> Vec<f64> {
        self.span.transpose().mul_vec(v)
    }

    pub fn center_norm(&self) -> f64 {
        norm(&self.center)
    }
}

/// Fits `vᵀQv + ℓ·v = 1` after reducing the points to their linear span,
/// recenters positive-definite fits and classifies them. Degenerate or
/// indefinite fits come back as `Neither` with diagnostics.
pub fn quadric_fit(points: &[Vec<f64>]) -> Result<QuadricFit> {
    let Some(first) = points.first() else {
        return Err(Error::Precondition("no points to fit".into()));
    };
    let amb = first.len();
    if points.iter().any(|p| p.len() != amb) {
        return Err(Error::Dimension("points of different lengths".into()));
    }
    let cloud = Matrix::from_columns(points)?;
    let svd = Svd::new(&cloud);
    let r = svd.rank(1e-9);
    if r == 0 {
        return Err(Error::Precondition("all points are zero".into()));
    }
    let span = Matrix::from_fn(amb, r, |i, j| svd.u[(i, j)]);
    let ys: Vec<Vec<f64>> = points.iter().map(|p| span.transpose().mul_vec(p)).collect();

    let unknowns = r * (r + 1) / 2 + r;
    let mut diagnostics = Vec::new();
    if points.len() < unknowns {
        return Err(Error::Precondition(format!(
            "{} points for {unknowns} quadric coefficients in dimension {r}",
            points.len()
        )));
    }
    let rows: Vec<Vec<f64>> = ys
        .iter()
        .map(|y| {
            let mut row = Vec::with_capacity(unknowns);
            for i in 0..r {
                for j in i..r {
                    row.push(if i == j { y[i] * y[i] } else { 2.0 * y[i] * y[j] });
                }
            }
            row.extend_from_slice(y);
            row
        })
        .collect();
    let design = Matrix::from_rows(&rows)?;
    let (coef, _) = lstsq(&design, &vec![1.0; points.len()])?;

    let mut quadratic = Matrix::zeros(r, r);
    let mut k = 0;
    for i in 0..r {
        for j in i..r {
            quadratic[(i, j)] = coef[k];
            quadratic[(j, i)] = coef[k];
            k += 1;
        }
    }
    let linear = coef[k..].to_vec();
    let residual = ys
        .iter()
        .map(|y| (quad(&quadratic, y) + dot(&linear, y) - 1.0).abs())
        .fold(0.0, f64::max);

    let eig = SymEig::new(&quadratic)?;
    let min_eigenvalue = eig.min();
    let max_eigenvalue = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut q = quadratic.clone();
    let mut center = vec![0.0; amb];
    let mut origin_depth = f64::NAN;

    let classification = if residual > FIT_TOL {
        diagnostics.push(format!("fit defect {residual:e} exceeds {FIT_TOL:e}"));
        FitClass::Neither
    } else if !(min_eigenvalue > EIGEN_FLOOR * max_eigenvalue) {
        diagnostics.push(format!(
            "quadratic part not positive definite (eigenvalues {:e} .. {:e})",
            min_eigenvalue, max_eigenvalue
        ));
        FitClass::Neither
    } else {
        let rhs = Matrix::from_columns(&[linear.iter().map(|v| -0.5 * v).collect()])?;
        let c = solve(&quadratic, &rhs)?.column(0);
        let level = 1.0 + quad(&quadratic, &c);
        q = quadratic.scale(1.0 / level);
        center = span.mul_vec(&c);
        origin_depth = 1.0 - quad(&q, &c).max(0.0).sqrt();
        if origin_depth < BOUNDARY_MARGIN {
            diagnostics.push(format!("origin depth {origin_depth:e} inside the ellipsoid"));
            FitClass::Inconclusive
        } else if norm(&c) <= CENTER_TOL {
            FitClass::Riemannian
        } else {
            FitClass::Randers
        }
    };

    Ok(QuadricFit {
        span,
        quadratic,
        linear,
        q,
        center,
        residual,
        min_eigenvalue,
        origin_depth,
        classification,
        diagnostics,
    })
}

/// The Riemannian or Randers norm (in span coordinates) whose indicatrix is
/// the fitted ellipsoid.
pub fn randers_from_quadric(f: &QuadricFit) -> Result<MinkowskiNorm> {
    match f.classification {
        FitClass::Riemannian => MinkowskiNorm::riemannian(f.q.clone()),
        FitClass::Randers => {
            let b: Vec<f64> = f.linear.iter().map(|v| 0.5 * v).collect();
            let r = b.len();
            let a = &f.quadratic + &Matrix::from_fn(r, r, |i, j| b[i] * b[j]);
            MinkowskiNorm::randers(a, b)
        }
        other => Err(Error::Domain(format!("no Minkowski norm for a {other:?} fit"))),
    }
}

/// Spread `max − min` of the round distances `arccos⟨p, g p⟩` over `n`
/// random points of the model's sphere.
pub fn round_cw_check(model: &SphereModel, g: &Matrix, n: usize, seed: u64) -> Result<f64> {
    if g.shape() != (model.ambient_dim, model.ambient_dim) {
        return Err(Error::Dimension(format!("isometry of shape {:?}", g.shape())));
    }
    if g.orthogonality_defect() > 1e-10 {
        return Err(Error::Precondition("g is not orthogonal".into()));
    }
    if n == 0 {
        return Err(Error::Precondition("needs at least one point".into()));
    }
    let mut rng = RngStream::new(seed);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for _ in 0..n {
        let p = rng.unit_vec(model.ambient_dim);
        let d = round_distance(&p, &g.mul_vec(&p));
        lo = lo.min(d);
        hi = hi.max(d);
    }
    Ok(hi - lo)
}

/// Great-circle distance `arccos⟨p, q⟩` of unit vectors, evaluated as
/// `atan2(‖q − ⟨p, q⟩p‖, ⟨p, q⟩)` to stay accurate near 0 and π.
pub fn round_distance(p: &[f64], q: &[f64]) -> f64 {
    let c = dot(p, q);
    let perp: Vec<f64> = q.iter().zip(p).map(|(a, b)| a - c * b).collect();
    norm(&perp).atan2(c)
}

/// Points `c + Q^{-1/2}u` for random unit `u`: an exact sample of the
/// ellipsoid `(v − c)ᵀQ(v − c) = 1`.
pub fn synthesize_ellipsoid(q: &Matrix, c: &[f64], n: usize, rng: &mut RngStream) -> Result<Vec<Vec<f64>>> {
    let eig = SymEig::new(q)?;
    if !(eig.min() > 0.0) {
        return Err(Error::Precondition("Q is not positive definite".into()));
    }
    let d = q.rows();
    let inv_sqrt = Matrix::from_fn(d, d, |i, j| {
        (0..d)
            .map(|k| eig.vectors[(i, k)] * eig.vectors[(j, k)] / eig.values[k].sqrt())
            .sum()
    });
    Ok((0..n)
        .map(|_| {
            let u = rng.unit_vec(d);
            inv_sqrt.mul_vec(&u).iter().zip(c).map(|(x, y)| x + y).collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spheres::{make_model, SphereKind};

    fn e(d: usize, k: usize) -> Vec<f64> {
        let mut v = vec![0.0; d];
        v[k] = 1.0;
        v
    }

    #[test]
    fn eval_examples() {
        let riem = MinkowskiNorm::riemannian(Matrix::identity(7)).unwrap();
        assert_eq!(riem.eval(&e(7, 6)), 1.0);
        assert_eq!(riem.eval(&[0.0; 7]), 0.0);
        let mut b = vec![0.0; 3];
        b[0] = 0.5;
        let randers = MinkowskiNorm::randers(Matrix::identity(3), b).unwrap();
        assert_eq!(randers.eval(&e(3, 0)), 1.5);
        assert_eq!(randers.eval(&[-1.0, 0.0, 0.0]), 0.5);
        assert_eq!(randers.eval(&[0.0; 3]), 0.0);
    }

    #[test]
    fn invalid_parameters_rejected_at_construction() {
        assert!(MinkowskiNorm::randers(Matrix::identity(2), vec![1.0, 0.0]).is_err());
        assert!(MinkowskiNorm::riemannian(Matrix::diag(&[1.0, -1.0])).is_err());
        let bad: std::result::Result<MinkowskiNorm, _> =
            serde_json::from_str(r#"{"variant":"randers","A":[[1,0],[0,1]],"b":[2,0]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn json_shape() {
        let n = MinkowskiNorm::randers(Matrix::identity(2), vec![0.25, 0.0]).unwrap();
        let v = serde_json::to_value(&n).unwrap();
        assert_eq!(v["variant"], "randers");
        assert_eq!(v["A"][1][1], 1.0);
        assert_eq!(v["b"][0], 0.25);
        let back: MinkowskiNorm = serde_json::from_value(v).unwrap();
        assert_eq!(back, n);
        let r = serde_json::to_value(MinkowskiNorm::riemannian(Matrix::identity(1)).unwrap()).unwrap();
        assert_eq!(r["variant"], "riemannian");
        assert!(r.get("Q").is_some());
    }

    #[test]
    fn homogeneity_and_positivity() {
        let mut rng = RngStream::new(40);
        for _ in 0..20 {
            let d = 4;
            let m = Matrix::from_fn(d, d, |_, _| rng.normal());
            let a = &(&m * &m.transpose()) + &Matrix::identity(d);
            let dir = rng.unit_vec(d);
            let scale = 0.99 / dual_norm(&a, &dir).unwrap();
            let b: Vec<f64> = dir.iter().map(|x| x * scale).collect();
            let f = MinkowskiNorm::randers(a.clone(), b).unwrap();
            assert!((f.drift() - 0.99).abs() < 1e-12);
            let g = MinkowskiNorm::riemannian(a).unwrap();
            for _ in 0..50 {
                let v = rng.normal_vec(d);
                let lam = rng.uniform(0.1, 10.0);
                let lv: Vec<f64> = v.iter().map(|x| lam * x).collect();
                for n in [&f, &g] {
                    assert!(n.eval(&v) > 0.0);
                    assert!((n.eval(&lv) - lam * n.eval(&v)).abs() < 1e-12 * lam.max(1.0) * n.eval(&v).max(1.0));
                }
            }
        }
    }

    #[test]
    fn kfcl_spread_scales_linearly() {
        let f = MinkowskiNorm::randers(Matrix::identity(2), vec![0.3, 0.0]).unwrap();
        let pts = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-0.5, 0.5]];
        let r1 = kfcl_check(&pts, &f).unwrap();
        let scaled: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|x| 3.0 * x).collect()).collect();
        let r3 = kfcl_check(&scaled, &f).unwrap();
        assert!((r3.spread - 3.0 * r1.spread).abs() < 1e-12);
        assert!(!r1.is_constant);
        assert!(kfcl_check(&[], &f).is_err());
    }

    #[test]
    fn homogeneity_refutes_constancy() {
        let f = MinkowskiNorm::riemannian(Matrix::identity(2)).unwrap();
        let r = kfcl_check(&[vec![1.0, 0.0], vec![2.0, 0.0]], &f).unwrap();
        assert!(!r.is_constant);
    }

    #[test]
    fn unit_sphere_fit() {
        let mut rng = RngStream::new(41);
        let pts: Vec<Vec<f64>> = (0..200).map(|_| rng.unit_vec(3)).collect();
        let fit = quadric_fit(&pts).unwrap();
        assert_eq!(fit.classification, FitClass::Riemannian);
        assert!(fit.residual < 1e-10);
        assert!(fit.center_norm() < 1e-10);
        let back = &(&fit.span * &fit.q) * &fit.span.transpose();
        assert!((back - Matrix::identity(3)).max_abs() < 1e-10);
        let n = randers_from_quadric(&fit).unwrap();
        assert!(!n.is_randers());
    }

    #[test]
    fn shifted_sphere_gives_randers() {
        let mut rng = RngStream::new(42);
        let c = vec![0.3, 0.0, 0.0];
        let pts = synthesize_ellipsoid(&Matrix::identity(3), &c, 200, &mut rng).unwrap();
        let fit = quadric_fit(&pts).unwrap();
        assert_eq!(fit.classification, FitClass::Randers);
        assert!(crate::numkit::max_abs_diff(&fit.center, &c) < 1e-8);
        let f = randers_from_quadric(&fit).unwrap();
        assert!(f.is_randers() && f.drift() < 1.0);
        for p in &pts {
            assert!((f.eval(&fit.coords(p)) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn fit_inverts_synthesis() {
        let mut rng = RngStream::new(43);
        for _ in 0..10 {
            let d = 3;
            let evs: Vec<f64> = (0..d).map(|_| rng.uniform(1.0, 100.0)).collect();
            let (qo, _) = crate::numkit::householder_qr(&Matrix::from_fn(d, d, |_, _| rng.normal()));
            let q = &(&qo * &Matrix::diag(&evs)) * &qo.transpose();
            let c: Vec<f64> = (0..d).map(|_| rng.uniform(-0.05, 0.05)).collect();
            let pts = synthesize_ellipsoid(&q, &c, 100, &mut rng).unwrap();
            let fit = quadric_fit(&pts).unwrap();
            let amb_q = &(&fit.span * &fit.q) * &fit.span.transpose();
            assert!((amb_q - q.clone()).max_abs() < 1e-8 * 100.0);
            assert!(crate::numkit::max_abs_diff(&fit.center, &c) < 1e-8);
        }
    }

    #[test]
    fn lower_dimensional_clouds_use_their_span() {
        let mut rng = RngStream::new(44);
        let pts: Vec<Vec<f64>> = (0..60)
            .map(|_| {
                let u = rng.unit_vec(2);
                vec![u[0], 0.0, u[1], 0.0, 0.0]
            })
            .collect();
        let fit = quadric_fit(&pts).unwrap();
        assert_eq!(fit.span.cols(), 2);
        assert_eq!(fit.classification, FitClass::Riemannian);
    }

    #[test]
    fn solid_clouds_are_neither() {
        let mut rng = RngStream::new(45);
        let pts: Vec<Vec<f64>> = (0..200)
            .map(|_| {
                let r = rng.uniform(0.2, 1.0);
                rng.unit_vec(3).iter().map(|x| r * x).collect()
            })
            .collect();
        let fit = quadric_fit(&pts).unwrap();
        assert_eq!(fit.classification, FitClass::Neither);
        assert!(!fit.diagnostics.is_empty());
        assert!(matches!(randers_from_quadric(&fit), Err(Error::Domain(_))));
    }

    #[test]
    fn origin_near_the_boundary_is_inconclusive() {
        let mut rng = RngStream::new(46);
        let c = vec![1.0 - 1e-8, 0.0];
        let pts = synthesize_ellipsoid(&Matrix::identity(2), &c, 50, &mut rng).unwrap();
        let fit = quadric_fit(&pts).unwrap();
        assert!(
            matches!(fit.classification, FitClass::Inconclusive | FitClass::Neither),
            "{:?}",
            fit.classification
        );
    }

    #[test]
    fn round_cw_examples() {
        let s2 = make_model(SphereKind::SO, Some(2)).unwrap();
        assert!(round_cw_check(&s2, &Matrix::identity(3), 50, 1).unwrap() < 1e-15);
        let rot = Matrix::from_rows(&[vec![0.0, -1.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        assert!(round_cw_check(&s2, &rot, 200, 2).unwrap() > 0.1);
        assert!(round_cw_check(&s2, &rot.scale(2.0), 10, 2).is_err());

        // Left multiplication by a unit quaternion on S³.
        let s3 = make_model(SphereKind::SO, Some(3)).unwrap();
        let qv = RngStream::new(3).unit_vec(4);
        let q = crate::octonion::Quaternion::from_slice(&qv);
        let lq = crate::spheres::realize::quat_left(q);
        let dev = round_cw_check(&s3, &lq, 500, 4).unwrap();
        assert!(dev < 1e-10, "{dev:e}");
    }
}
