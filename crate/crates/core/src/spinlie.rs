//! Concrete spin(7) ⊂ spin(8) ⊂ spin(9).
//!
//! spin(7) and spin(8) are realized as infinitesimal triality triples acting
//! on `O`; spin(9) as skew 16×16 matrices on `O ⊕ O`, with spin(8) embedded
//! block-diagonally through `(a, b, c) ↦ diag(a, c)`. Everything is expressed
//! in the [`PaperBasis`] labeling of the imaginary units.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{mat_exp, nullspace, rank_tol, span_distance, Svd, DEFAULT_RANK_TOL};
use crate::octonion::{left_op, mul, right_op, PaperBasis};
use crate::triality::{InfSolver, Slot};
use crate::{InfTriple, Matrix, Octonion, TrialityTriple};

/// Closure residual bound (relative to the bracket norm).
pub const CLOSURE_TOL: f64 = 1e-9;
/// Central-difference step and tolerance for the curve cross-check.
pub const FD_STEP: f64 = 1e-5;
pub const FD_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SetName {
    S1,
    S2,
    S3,
}

impl SetName {
    pub fn expected_len(self) -> usize {
        match self {
            SetName::S1 => 21,
            SetName::S2 => 28,
            SetName::S3 => 36,
        }
    }
}

/// Skew 16×16 operator on `O ⊕ O`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Spin9Element(pub Matrix);

impl Spin9Element {
    /// `diag(a, c)` for an infinitesimal triple.
    pub fn embed(t: &InfTriple) -> Self {
        let z = Matrix::zeros(8, 8);
        Self(Matrix::block2x2(&t.a, &z, &z, &t.c).expect("8x8 blocks"))
    }

    /// Derivative of the rotation `(u, v) ↦ (cos t u + sin t v, −sin t u + cos t v)`.
    pub fn rotation() -> Self {
        let i = Matrix::identity(8);
        let z = Matrix::zeros(8, 8);
        Self(Matrix::block2x2(&z, &i, &(-&i), &z).expect("8x8 blocks"))
    }

    /// `[[0, R_{eᵢ}], [R_{eᵢ}, 0]]`.
    pub fn twist(basis: &PaperBasis, i: usize) -> Self {
        let r = right_op(&basis.e(i));
        let z = Matrix::zeros(8, 8);
        Self(Matrix::block2x2(&z, &r, &r, &z).expect("8x8 blocks"))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn is_block_diagonal(&self, tol: f64) -> bool {
        self.0.block(0, 8, 8, 8).max_abs() <= tol && self.0.block(8, 0, 8, 8).max_abs() <= tol
    }
}

/// The group curve `f_t(u, v) = (cos t u + sin t v, −sin t u + cos t v)`.
pub fn rotation_curve(t: f64) -> Matrix {
    let (c, s) = (Matrix::identity(8).scale(t.cos()), Matrix::identity(8).scale(t.sin()));
    Matrix::block2x2(&c, &s, &(-&s), &c).expect("8x8 blocks")
}

/// The group curve `(u, v) ↦ (cos t u + sin t v eᵢ, sin t u eᵢ + cos t v)`,
/// equal to `exp(t [[0, R_{eᵢ}], [R_{eᵢ}, 0]])`.
pub fn twist_curve(basis: &PaperBasis, i: usize, t: f64) -> Matrix {
    let r = right_op(&basis.e(i)).scale(t.sin());
    let c = Matrix::identity(8).scale(t.cos());
    Matrix::block2x2(&c, &r, &r, &c).expect("8x8 blocks")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LieElement {
    Triple(InfTriple),
    Spin9(Spin9Element),
}

impl LieElement {
    pub fn flatten(&self) -> Vec<f64> {
        match self {
            LieElement::Triple(t) => t.flatten(),
            LieElement::Spin9(m) => m.0.as_slice().to_vec(),
        }
    }

    pub fn norm(&self) -> f64 {
        crate::numkit::norm(&self.flatten())
    }

    pub fn as_triple(&self) -> Option<&InfTriple> {
        match self {
            LieElement::Triple(t) => Some(t),
            LieElement::Spin9(_) => None,
        }
    }

    pub fn as_spin9(&self) -> Option<&Spin9Element> {
        match self {
            LieElement::Spin9(m) => Some(m),
            LieElement::Triple(_) => None,
        }
    }

    /// Ambient matrix: the 16×16 matrix itself, or the block embedding of a
    /// triple.
    pub fn to_spin9(&self) -> Spin9Element {
        match self {
            LieElement::Triple(t) => Spin9Element::embed(t),
            LieElement::Spin9(m) => m.clone(),
        }
    }
}

/// Commutator `XY − YX` (componentwise for triples).
pub fn bracket(x: &LieElement, y: &LieElement) -> Result<LieElement> {
    match (x, y) {
        (LieElement::Triple(a), LieElement::Triple(b)) => Ok(LieElement::Triple(a.bracket(b))),
        (LieElement::Spin9(a), LieElement::Spin9(b)) => {
            Ok(LieElement::Spin9(Spin9Element(a.0.commutator(&b.0))))
        }
        _ => Err(Error::Domain(
            "bracket of a triple with a 16x16 element".into(),
        )),
    }
}

/// Index metadata of one generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorLabel {
    /// `L_{eᵢ}L_{e_j}` in the second and third entries.
    Pair { i: usize, j: usize },
    /// `(L_{eᵢ}, R_{eᵢ}, L_{eᵢ} + R_{eᵢ})`.
    Axis { i: usize },
    /// `[[0, 1], [−1, 0]]`.
    Rotation,
    /// `[[0, R_{eᵢ}], [R_{eᵢ}, 0]]`.
    Twist { i: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSet {
    pub name: SetName,
    pub elements: Vec<LieElement>,
    pub labels: Vec<GeneratorLabel>,
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn flattened(&self) -> Vec<Vec<f64>> {
        self.elements.iter().map(LieElement::flatten).collect()
    }

    pub fn rank(&self) -> usize {
        rank_tol(&self.flattened(), DEFAULT_RANK_TOL).expect("uniform generator shapes")
    }

    pub fn triples(&self) -> impl Iterator<Item = &InfTriple> {
        self.elements.iter().filter_map(LieElement::as_triple)
    }

    /// Worst infinitesimal triality residual among triple elements.
    pub fn max_triple_residual(&self) -> f64 {
        self.triples().map(InfTriple::residual).fold(0.0, f64::max)
    }
}

/// The 21 spin(7) generators `(a, L_{eᵢ}L_{e_j}, L_{eᵢ}L_{e_j})`, `i < j`, with
/// `a` solved from the triality identity.
pub fn gen_spin7() -> GeneratorSet {
    let basis = PaperBasis::new();
    let solver = InfSolver::new(Slot::Second);
    let mut elements = Vec::with_capacity(21);
    let mut labels = Vec::with_capacity(21);
    for i in 1..=7 {
        for j in (i + 1)..=7 {
            let b = &left_op(&basis.e(i)) * &left_op(&basis.e(j));
            let t = solver.lift(&b).expect("second entry determines the triple");
            elements.push(LieElement::Triple(t));
            labels.push(GeneratorLabel::Pair { i, j });
        }
    }
    GeneratorSet {
        name: SetName::S1,
        elements,
        labels,
    }
}

/// Worst entry gap between the solved first entries of S₁ and the written
/// form `2(E_{ji} − E_{ij})`, together with the gap between the solved third
/// entry and the second.
pub fn spin7_transcription_defect(s1: &GeneratorSet) -> (f64, f64) {
    let basis = PaperBasis::new();
    let mut first = 0.0f64;
    let mut third = 0.0f64;
    for (el, label) in s1.elements.iter().zip(&s1.labels) {
        let (LieElement::Triple(t), GeneratorLabel::Pair { i, j }) = (el, label) else {
            continue;
        };
        let written = (&basis.matrix_unit(*j, *i) - &basis.matrix_unit(*i, *j)).scale(2.0);
        first = first.max((&t.a - &written).max_abs());
        third = third.max((&t.c - &t.b).max_abs());
    }
    (first, third)
}

/// S₁ plus the seven `(L_{eᵢ}, R_{eᵢ}, L_{eᵢ} + R_{eᵢ})`.
pub fn gen_spin8() -> GeneratorSet {
    let basis = PaperBasis::new();
    let mut set = gen_spin7();
    for i in 1..=7 {
        set.elements.push(LieElement::Triple(axis_generator(&basis, i)));
        set.labels.push(GeneratorLabel::Axis { i });
    }
    set.name = SetName::S2;
    set
}

pub fn axis_generator(basis: &PaperBasis, i: usize) -> InfTriple {
    let e = basis.e(i);
    let (l, r) = (left_op(&e), right_op(&e));
    let c = &l + &r;
    InfTriple::new(l, r, c)
}

/// S₂ embedded block-diagonally plus the rotation and the seven twists.
pub fn gen_spin9() -> GeneratorSet {
    let basis = PaperBasis::new();
    let s2 = gen_spin8();
    let mut elements: Vec<LieElement> = s2
        .elements
        .iter()
        .map(|e| LieElement::Spin9(e.to_spin9()))
        .collect();
    let mut labels = s2.labels;
    elements.push(LieElement::Spin9(Spin9Element::rotation()));
    labels.push(GeneratorLabel::Rotation);
    for i in 1..=7 {
        elements.push(LieElement::Spin9(Spin9Element::twist(&basis, i)));
        labels.push(GeneratorLabel::Twist { i });
    }
    GeneratorSet {
        name: SetName::S3,
        elements,
        labels,
    }
}

/// Orthogonal projector onto the span of a generator family.
struct SpanProjector {
    basis: Vec<Vec<f64>>,
}

impl SpanProjector {
    fn new(vectors: &[Vec<f64>]) -> Self {
        let a = Matrix::from_columns(vectors).expect("uniform generator shapes");
        let svd = Svd::new(&a);
        let rank = svd.rank(DEFAULT_RANK_TOL);
        let basis = (0..rank).map(|j| svd.u.column(j)).collect();
        Self { basis }
    }

    fn distance(&self, v: &[f64]) -> f64 {
        let mut r = v.to_vec();
        for u in &self.basis {
            let c = crate::numkit::dot(u, v);
            crate::numkit::axpy(-c, u, &mut r);
        }
        crate::numkit::norm(&r)
    }
}

/// Largest scaled distance `dist([X, Y], span G) / (‖X‖‖Y‖)` over all
/// generator pairs. Scaling by the factors rather than the bracket keeps
/// commuting pairs, whose brackets are pure rounding noise, from dominating.
pub fn closure_check(set: &GeneratorSet) -> f64 {
    let proj = SpanProjector::new(&set.flattened());
    let norms: Vec<f64> = set.elements.iter().map(LieElement::norm).collect();
    let mut worst = 0.0f64;
    for (k, x) in set.elements.iter().enumerate() {
        for (m, y) in set.elements.iter().enumerate().skip(k + 1) {
            let scale = norms[k] * norms[m];
            if scale == 0.0 {
                continue;
            }
            let br = bracket(x, y).expect("homogeneous generator set");
            worst = worst.max(proj.distance(&br.flatten()) / scale);
        }
    }
    worst
}

/// Basis of `{(d, d, d)} ∩ span(S₁)`: the derivation algebra g₂.
pub fn g2_subalgebra() -> Result<Vec<InfTriple>> {
    let s1 = gen_spin7();
    let triples: Vec<&InfTriple> = s1.triples().collect();
    let constraint_cols: Vec<Vec<f64>> = triples
        .iter()
        .map(|t| (&t.a - &t.b).as_slice().to_vec())
        .collect();
    let constraint = Matrix::from_columns(&constraint_cols)?;
    let ns = nullspace(&constraint, DEFAULT_RANK_TOL);
    if ns.cols() != 14 {
        return Err(Error::Domain(format!(
            "g2 has dimension {} instead of 14",
            ns.cols()
        )));
    }
    Ok((0..ns.cols())
        .map(|k| {
            triples
                .iter()
                .enumerate()
                .fold(InfTriple::zero(), |acc, (m, t)| acc.add(&t.scale(ns[(m, k)])))
        })
        .collect())
}

/// `max |d(xy) − d(x)y − x d(y)|` over imaginary basis pairs.
pub fn derivation_residual(d: &Matrix) -> f64 {
    let mut worst = 0.0f64;
    for a in 1..8 {
        for b in 1..8 {
            let (x, y) = (Octonion::unit(a), Octonion::unit(b));
            let lhs = Octonion::apply(d, &mul(&x, &y));
            let rhs = mul(&Octonion::apply(d, &x), &y) + mul(&x, &Octonion::apply(d, &y));
            worst = worst.max(lhs.dist(&rhs));
        }
    }
    worst
}

/// `T(z) = (L_z R_{z̄}, L_z, L_z)`.
pub fn conjugation_triple(z: &Octonion) -> TrialityTriple {
    let l = left_op(z);
    TrialityTriple::new(&l * &right_op(&z.conj()), l.clone(), l)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurvePair {
    pub i: usize,
    pub j: usize,
    /// Distance of the left-translated velocity to span(S₁).
    pub span_distance: f64,
    /// `|second entry of the raw velocity − L_{e_j}L_{eᵢ}|`.
    pub second_entry_error: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveReport {
    pub step: f64,
    pub pairs: Vec<CurvePair>,
    pub max_span_distance: f64,
    pub max_second_entry_error: f64,
    /// Velocity of the constant curve `T(eᵢ)·T(eᵢ)⁻¹`.
    pub constant_curve_velocity: f64,
}

impl CurveReport {
    pub fn passes(&self) -> bool {
        self.max_span_distance <= FD_TOL
            && self.max_second_entry_error <= FD_TOL
            && self.constant_curve_velocity <= FD_TOL
    }
}

fn central_difference(curve: impl Fn(f64) -> TrialityTriple, h: f64) -> InfTriple {
    let (p, m) = (curve(h), curve(-h));
    let d = |x: &Matrix, y: &Matrix| (x - y).scale(0.5 / h);
    InfTriple::new(d(&p.a, &m.a), d(&p.b, &m.b), d(&p.c, &m.c))
}

/// Differentiates `γ(t) = T(cos t eᵢ + sin t e_j)·T(eᵢ)` at `t = 0` by central
/// differences for every `i < j`.
///
/// `γ(0) = T(eᵢ)²` is the central triple `(I, −I, −I)`, so the velocity is
/// pulled back to the identity as `γ(0)⁻¹γ'(0)` before measuring its distance
/// to span(S₁).
pub fn curve_generator_crosscheck() -> CurveReport {
    let basis = PaperBasis::new();
    let s1 = gen_spin7();
    let proj = SpanProjector::new(&s1.flattened());
    let h = FD_STEP;
    let mut pairs = Vec::with_capacity(21);
    let mut constant = 0.0f64;

    for i in 1..=7 {
        let ei: Octonion = basis.e(i);
        let t_ei = conjugation_triple(&ei);
        for j in (i + 1)..=7 {
            let ej: Octonion = basis.e(j);
            let curve = |t: f64| conjugation_triple(&(ei.scale(t.cos()) + ej.scale(t.sin())));
            let velocity = central_difference(|t| curve(t).compose(&t_ei), h);
            let start = t_ei.compose(&t_ei);
            let pulled = InfTriple::new(
                &start.a.transpose() * &velocity.a,
                &start.b.transpose() * &velocity.b,
                &start.c.transpose() * &velocity.c,
            );
            let want_second = &left_op(&ej) * &left_op(&ei);
            pairs.push(CurvePair {
                i,
                j,
                span_distance: proj.distance(&pulled.flatten()),
                second_entry_error: (&velocity.b - &want_second).max_abs(),
            });
        }
        let still = central_difference(|_| t_ei.compose(&t_ei.inverse()), h);
        constant = constant.max(still.max_abs());
    }

    CurveReport {
        step: h,
        max_span_distance: pairs.iter().map(|p| p.span_distance).fold(0.0, f64::max),
        max_second_entry_error: pairs.iter().map(|p| p.second_entry_error).fold(0.0, f64::max),
        pairs,
        constant_curve_velocity: constant,
    }
}

/// Max entry gap between `exp(t G)` and the closed-form group curves for
/// the rotation and twist generators.
pub fn spin9_curve_defect(t: f64) -> f64 {
    let basis = PaperBasis::new();
    let mut worst =
        (mat_exp(&Spin9Element::rotation().0.scale(t)).expect("square") - rotation_curve(t))
            .max_abs();
    for i in 1..=7 {
        let g = mat_exp(&Spin9Element::twist(&basis, i).0.scale(t)).expect("square");
        worst = worst.max((g - twist_curve(&basis, i, t)).max_abs());
    }
    worst
}

/// `dist(v, span G)`.
pub fn span_distance_to(set: &GeneratorSet, v: &[f64]) -> f64 {
    span_distance(&set.flattened(), v).expect("uniform shapes")
}
