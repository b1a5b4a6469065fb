//! Triality triples `(A, B, C)` with `A(x)B(y) = C(xy)` and their
//! infinitesimal counterparts `a(x)y + x·b(y) = c(xy)`.
//!
//! The group of triples is the concrete model of Spin(8) used everywhere
//! else; its projection to SO(8) is the first entry.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{mat_exp, Matrix, Svd, DEFAULT_RANK_TOL};
use crate::octonion::{left_op, mul, Octonion};
use crate::scalar::Real;

/// Bound for triples built from closed-form operators.
pub const ANALYTIC_TOL: f64 = 1e-12;
/// Bound after linear solves or exponentials.
pub const SOLVED_TOL: f64 = 1e-9;

/// Group element: three orthogonal 8×8 operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialityTriple<T: Real> {
    #[serde(rename = "A")]
    pub a: Matrix<T>,
    #[serde(rename = "B")]
    pub b: Matrix<T>,
    #[serde(rename = "C")]
    pub c: Matrix<T>,
}

/// Lie-algebra element: three skew 8×8 operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfTriple<T: Real> {
    pub a: Matrix<T>,
    pub b: Matrix<T>,
    pub c: Matrix<T>,
}

/// Which entry of a triple is prescribed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    First,
    Second,
    Third,
}

impl Slot {
    fn others(self) -> [Slot; 2] {
        match self {
            Slot::First => [Slot::Second, Slot::Third],
            Slot::Second => [Slot::First, Slot::Third],
            Slot::Third => [Slot::First, Slot::Second],
        }
    }
}

fn basis_product<T: Real>(alpha: usize, beta: usize) -> Octonion<T> {
    mul(&Octonion::unit(alpha), &Octonion::unit(beta))
}

fn column<T: Real>(m: &Matrix<T>, j: usize) -> Octonion<T> {
    Octonion::from_slice(&m.column(j)).expect("8x8 operator")
}

/// `max_{α,β} |A(e_α)·B(e_β) − C(e_α e_β)|` over the Cayley–Dickson basis.
pub fn verify_triple<T: Real>(a: &Matrix<T>, b: &Matrix<T>, c: &Matrix<T>) -> T {
    let mut worst = T::zero();
    for alpha in 0..8 {
        let ax = column(a, alpha);
        for beta in 0..8 {
            let lhs = mul(&ax, &column(b, beta));
            let rhs = Octonion::apply(c, &basis_product(alpha, beta));
            worst = worst.max(lhs.dist(&rhs));
        }
    }
    worst
}

/// `max_{α,β} |a(e_α)e_β + e_α·b(e_β) − c(e_α e_β)|`.
pub fn inf_residual<T: Real>(a: &Matrix<T>, b: &Matrix<T>, c: &Matrix<T>) -> T {
    let mut worst = T::zero();
    for alpha in 0..8 {
        for beta in 0..8 {
            let d = slot_term(Slot::First, a, alpha, beta)
                + slot_term(Slot::Second, b, alpha, beta)
                + slot_term(Slot::Third, c, alpha, beta);
            worst = worst.max(d.norm());
        }
    }
    worst
}

/// Contribution of operator `m` in `slot` to the infinitesimal defect at
/// `(e_α, e_β)`.
fn slot_term<T: Real>(slot: Slot, m: &Matrix<T>, alpha: usize, beta: usize) -> Octonion<T> {
    match slot {
        Slot::First => mul(&column(m, alpha), &Octonion::unit(beta)),
        Slot::Second => mul(&Octonion::unit(alpha), &column(m, beta)),
        Slot::Third => -Octonion::apply(m, &basis_product(alpha, beta)),
    }
}

fn flatten_defect<T: Real>(slot: Slot, m: &Matrix<T>) -> Vec<T> {
    let mut out = Vec::with_capacity(512);
    for alpha in 0..8 {
        for beta in 0..8 {
            out.extend_from_slice(slot_term(slot, m, alpha, beta).components());
        }
    }
    out
}

/// Basis `E_pq − E_qp`, `p < q`, of so(8).
pub fn skew_basis<T: Real>(n: usize) -> Vec<Matrix<T>> {
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for p in 0..n {
        for q in (p + 1)..n {
            let mut m = Matrix::zeros(n, n);
            m[(p, q)] = T::one();
            m[(q, p)] = -T::one();
            out.push(m);
        }
    }
    out
}

fn from_skew_coords<T: Real>(coords: &[T]) -> Matrix<T> {
    let mut m = Matrix::zeros(8, 8);
    let mut k = 0;
    for p in 0..8 {
        for q in (p + 1)..8 {
            m[(p, q)] = coords[k];
            m[(q, p)] = -coords[k];
            k += 1;
        }
    }
    m
}

fn check_skew<T: Real>(m: &Matrix<T>, what: &str) -> Result<()> {
    if m.shape() != (8, 8) {
        return Err(Error::Dimension(format!("{what} must be 8x8, got {:?}", m.shape())));
    }
    let tol = T::lit(1e-10) * T::one().max(m.max_abs());
    if m.skew_defect() > tol {
        return Err(Error::Precondition(format!("{what} is not skew-symmetric")));
    }
    Ok(())
}

/// Solver for the two unknown entries of an infinitesimal triple given the
/// third.
///
/// The unknowns are parameterized by skew coordinates (28 each) and the 512
/// scalar equations over all basis pairs are solved in the least-squares
/// sense; the factorization is computed once and reused across right-hand
/// sides.
pub struct InfSolver<T: Real> {
    slot: Slot,
    svd: Svd<T>,
    nullity: usize,
}

impl<T: Real> InfSolver<T> {
    pub fn new(slot: Slot) -> Self {
        let basis = skew_basis::<T>(8);
        let mut cols = Vec::with_capacity(56);
        for unknown in slot.others() {
            for s in &basis {
                cols.push(flatten_defect(unknown, s));
            }
        }
        let system = Matrix::from_columns(&cols).expect("uniform columns");
        let svd = Svd::new(&system);
        let nullity = 56 - svd.rank(T::lit(DEFAULT_RANK_TOL));
        Self { slot, svd, nullity }
    }

    /// Dimension of the homogeneous solution space; zero when the prescribed
    /// entry determines the other two.
    pub fn nullity(&self) -> usize {
        self.nullity
    }

    /// Returns the unique infinitesimal triple with `known` in this solver's
    /// slot.
    pub fn lift(&self, known: &Matrix<T>) -> Result<InfTriple<T>> {
        check_skew(known, "prescribed entry")?;
        if self.nullity != 0 {
            return Err(Error::Degenerate {
                expected: 0,
                found: self.nullity,
            });
        }
        let rhs: Vec<T> = flatten_defect(self.slot, known).into_iter().map(|x| -x).collect();
        let (m, n) = self.svd.u.shape();
        let mut x = vec![T::zero(); n];
        for (j, &s) in self.svd.singular.iter().enumerate() {
            let coeff = (0..m).map(|i| self.svd.u[(i, j)] * rhs[i]).sum::<T>() / s;
            for (k, xk) in x.iter_mut().enumerate() {
                *xk = *xk + coeff * self.svd.v[(k, j)];
            }
        }
        let first = from_skew_coords(&x[..28]);
        let second = from_skew_coords(&x[28..]);
        let triple = match self.slot {
            Slot::First => InfTriple::new(known.clone(), first, second),
            Slot::Second => InfTriple::new(first, known.clone(), second),
            Slot::Third => InfTriple::new(first, second, known.clone()),
        };
        let scale = T::one().max(known.max_abs());
        let residual = triple.residual();
        if residual > T::lit(SOLVED_TOL) * scale {
            return Err(Error::Domain(format!(
                "infinitesimal lift left residual {residual}"
            )));
        }
        Ok(triple)
    }
}

/// `(b, c)` completing a skew `a` to an infinitesimal triple.
pub fn inf_lift<T: Real>(a: &Matrix<T>) -> Result<InfTriple<T>> {
    InfSolver::new(Slot::First).lift(a)
}

impl<T: Real> InfTriple<T> {
    pub fn new(a: Matrix<T>, b: Matrix<T>, c: Matrix<T>) -> Self {
        Self { a, b, c }
    }

    pub fn zero() -> Self {
        Self::new(Matrix::zeros(8, 8), Matrix::zeros(8, 8), Matrix::zeros(8, 8))
    }

    pub fn residual(&self) -> T {
        inf_residual(&self.a, &self.b, &self.c)
    }

    pub fn skew_defect(&self) -> T {
        self.a
            .skew_defect()
            .max(self.b.skew_defect())
            .max(self.c.skew_defect())
    }

    /// Componentwise commutator.
    pub fn bracket(&self, other: &Self) -> Self {
        Self::new(
            self.a.commutator(&other.a),
            self.b.commutator(&other.b),
            self.c.commutator(&other.c),
        )
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.a.scale(s), self.b.scale(s), self.c.scale(s))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.a + &other.a, &self.b + &other.b, &self.c + &other.c)
    }

    /// The 192 entries `a ‖ b ‖ c`, row-major.
    pub fn flatten(&self) -> Vec<T> {
        let mut v = self.a.as_slice().to_vec();
        v.extend_from_slice(self.b.as_slice());
        v.extend_from_slice(self.c.as_slice());
        v
    }

    pub fn max_abs(&self) -> T {
        self.a.max_abs().max(self.b.max_abs()).max(self.c.max_abs())
    }
}

impl<T: Real> TrialityTriple<T> {
    pub fn new(a: Matrix<T>, b: Matrix<T>, c: Matrix<T>) -> Self {
        Self { a, b, c }
    }

    pub fn identity() -> Self {
        Self::new(Matrix::identity(8), Matrix::identity(8), Matrix::identity(8))
    }

    pub fn residual(&self) -> T {
        verify_triple(&self.a, &self.b, &self.c)
    }

    pub fn orthogonality_defect(&self) -> T {
        self.a
            .orthogonality_defect()
            .max(self.b.orthogonality_defect())
            .max(self.c.orthogonality_defect())
    }

    /// Componentwise product, the group law.
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(&self.a * &other.a, &self.b * &other.b, &self.c * &other.c)
    }

    /// Componentwise transpose, the inverse of orthogonal entries.
    pub fn inverse(&self) -> Self {
        Self::new(self.a.transpose(), self.b.transpose(), self.c.transpose())
    }

    /// The other member `(A, −B, −C)` over the same first entry.
    pub fn flip(&self) -> Self {
        Self::new(self.a.clone(), -&self.b, -&self.c)
    }

    /// Max entry distance to `other`.
    pub fn distance(&self, other: &Self) -> T {
        (&self.a - &other.a)
            .max_abs()
            .max((&self.b - &other.b).max_abs())
            .max((&self.c - &other.c).max_abs())
    }

    /// Distance to `other` allowing the sign flip of the last two entries.
    pub fn distance_up_to_sign(&self, other: &Self) -> T {
        self.distance(other).min(self.flip().distance(other))
    }
}

/// `(e^{ta}, e^{tb}, e^{tc})`.
pub fn exp_triple<T: Real>(t: T, inf: &InfTriple<T>) -> Result<TrialityTriple<T>> {
    Ok(TrialityTriple::new(
        mat_exp(&inf.a.scale(t))?,
        mat_exp(&inf.b.scale(t))?,
        mat_exp(&inf.c.scale(t))?,
    ))
}

/// The two triality triples `(A, ±B, ±C)` over an orthogonal `A`.
#[derive(Debug, Clone)]
pub struct Companions<T: Real> {
    /// Representative whose largest-magnitude `B` entry is positive.
    pub positive: TrialityTriple<T>,
    pub negative: TrialityTriple<T>,
    /// Dimension of the solution space of the linear `B`-system.
    pub nullity: usize,
}

/// Solves `A(x)B(y) = A(1)·B(xy)` for `B` (64 unknowns, 512 equations), scales
/// the solution line to an orthogonal `B`, and recovers `C = L_{A(1)} B`.
pub fn companions<T: Real>(a: &Matrix<T>) -> Result<Companions<T>> {
    if a.shape() != (8, 8) {
        return Err(Error::Dimension(format!("companions of a {:?} operator", a.shape())));
    }
    if a.orthogonality_defect() > T::lit(1e-10) {
        return Err(Error::Precondition("companions needs an orthogonal operator".into()));
    }
    let a1 = column(a, 0);
    let cols: Vec<Octonion<T>> = (0..8).map(|k| column(a, k)).collect();
    let products: Vec<Vec<Octonion<T>>> = (0..8)
        .map(|alpha| (0..8).map(|beta| basis_product(alpha, beta)).collect())
        .collect();

    // Unknown index p*8 + q is the entry B[p][q], i.e. the matrix unit e_q ↦ e_p.
    let mut system = Matrix::zeros(512, 64);
    for alpha in 0..8 {
        for beta in 0..8 {
            let row0 = (alpha * 8 + beta) * 8;
            let xy = &products[alpha][beta];
            for p in 0..8 {
                let a_ep = mul(&cols[alpha], &Octonion::unit(p));
                let a1_ep = mul(&a1, &Octonion::unit(p));
                for q in 0..8 {
                    let mut term = Octonion::zero();
                    if q == beta {
                        term += a_ep;
                    }
                    let coeff = xy.0[q];
                    if coeff != T::zero() {
                        term = term - a1_ep.scale(coeff);
                    }
                    for r in 0..8 {
                        system[(row0 + r, p * 8 + q)] = term.0[r];
                    }
                }
            }
        }
    }

    let svd = Svd::new(&system);
    let rank = svd.rank(T::lit(DEFAULT_RANK_TOL));
    let nullity = 64 - rank;
    if nullity != 1 {
        return Err(Error::Degenerate {
            expected: 1,
            found: nullity,
        });
    }
    let null = svd.v.column(63);
    let mut b = Matrix::from_row_major(8, 8, null)?;
    let fro = b.norm_fro();
    b = b.scale(T::lit(8f64.sqrt()) / fro);

    let max = b.max_abs();
    let pivot = b
        .as_slice()
        .iter()
        .copied()
        .find(|x| x.abs() >= max - T::lit(1e-8) * max)
        .expect("nonzero solution");
    if pivot < T::zero() {
        b = -b;
    }
    let c = &left_op(&a1) * &b;
    let positive = TrialityTriple::new(a.clone(), b, c);
    let negative = positive.flip();

    let tol = T::lit(SOLVED_TOL);
    let worst = positive.residual().max(negative.residual());
    if worst > tol || positive.b.orthogonality_defect() > tol {
        return Err(Error::Domain(format!(
            "companion triple failed verification (residual {worst})"
        )));
    }
    Ok(Companions {
        positive,
        negative,
        nullity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::RngStream;
    use crate::octonion::{identities::random_unit_imaginary, right_op};

    type O = Octonion<f64>;

    fn unit_octonion(rng: &mut RngStream) -> O {
        O::from_slice(&rng.unit_vec(8)).unwrap()
    }

    #[test]
    fn identity_triple_is_exact() {
        let i = Matrix::<f64>::identity(8);
        assert_eq!(verify_triple(&i, &i, &i), 0.0);
    }

    #[test]
    fn conjugation_family_is_a_triple() {
        let e1 = O::unit(1);
        let lz = left_op(&e1);
        let a = &lz * &right_op(&e1.conj());
        assert!(verify_triple(&a, &lz, &lz) < ANALYTIC_TOL);

        let mut rng = RngStream::new(21);
        for _ in 0..20 {
            let z = random_unit_imaginary(&mut rng);
            let lz = left_op(&z);
            let a = &lz * &right_op(&z.conj());
            assert!(verify_triple(&a, &lz, &lz) < ANALYTIC_TOL);
        }
    }

    #[test]
    fn left_right_family_is_a_triple() {
        let mut rng = RngStream::new(22);
        for _ in 0..20 {
            let z = unit_octonion(&mut rng);
            let (l, r) = (left_op(&z), right_op(&z));
            assert!(verify_triple(&l, &r, &(&l * &r)) < ANALYTIC_TOL);
        }
    }

    #[test]
    fn inf_lift_of_zero() {
        let t = inf_lift(&Matrix::<f64>::zeros(8, 8)).unwrap();
        assert!(t.b.max_abs() < 1e-15 && t.c.max_abs() < 1e-15);
    }

    #[test]
    fn inf_lift_of_left_multiplication() {
        let e1 = O::unit(1);
        let t = inf_lift(&left_op(&e1)).unwrap();
        assert!((&t.b - &right_op(&e1)).max_abs() < 1e-12);
        assert!((&t.c - &(&left_op(&e1) + &right_op(&e1))).max_abs() < 1e-12);
    }

    #[test]
    fn inf_lift_solution_holds_off_the_basis_grid() {
        let mut rng = RngStream::new(23);
        let solver = InfSolver::<f64>::new(Slot::First);
        assert_eq!(solver.nullity(), 0);
        for _ in 0..5 {
            let a = rng.skew(8, 1.0);
            let t = solver.lift(&a).unwrap();
            assert!(t.skew_defect() < 1e-12);
            for _ in 0..100 {
                let x = O::from_slice(&rng.normal_vec(8)).unwrap();
                let y = O::from_slice(&rng.normal_vec(8)).unwrap();
                let lhs = mul(&O::apply(&t.a, &x), &y) + mul(&x, &O::apply(&t.b, &y));
                let rhs = O::apply(&t.c, &mul(&x, &y));
                assert!(lhs.dist(&rhs) < 1e-10);
            }
        }
    }

    #[test]
    fn every_slot_determines_the_others() {
        for slot in [Slot::First, Slot::Second, Slot::Third] {
            assert_eq!(InfSolver::<f64>::new(slot).nullity(), 0, "{slot:?}");
        }
        let mut rng = RngStream::new(24);
        let b = rng.skew(8, 1.0);
        let t = InfSolver::new(Slot::Second).lift(&b).unwrap();
        assert_eq!(t.b, b);
        assert!(t.residual() < 1e-10);
    }

    #[test]
    fn inf_lift_rejects_non_skew() {
        let m = Matrix::<f64>::identity(8);
        assert!(matches!(inf_lift(&m), Err(Error::Precondition(_))));
    }

    #[test]
    fn companions_of_identity() {
        let c = companions(&Matrix::<f64>::identity(8)).unwrap();
        assert_eq!(c.nullity, 1);
        assert!((&c.positive.b - &Matrix::identity(8)).max_abs() < 1e-12);
        assert!((&c.positive.c - &Matrix::identity(8)).max_abs() < 1e-12);
        assert!((&c.negative.b + &Matrix::identity(8)).max_abs() < 1e-12);
    }

    #[test]
    fn companions_of_conjugation() {
        let e1 = O::unit(1);
        let a = &left_op(&e1) * &right_op(&e1.conj());
        let c = companions(&a).unwrap();
        let want = TrialityTriple::new(a, left_op(&e1), left_op(&e1));
        assert!(c.positive.distance_up_to_sign(&want) < 1e-10);
    }

    #[test]
    fn companions_agree_with_path_lifting() {
        let mut rng = RngStream::new(25);
        let solver = InfSolver::new(Slot::First);
        for _ in 0..5 {
            let gen = rng.skew(8, 0.8);
            let inf = solver.lift(&gen).unwrap();
            let lifted = exp_triple(1.0, &inf).unwrap();
            let c = companions(&lifted.a).unwrap();
            assert!(c.positive.distance_up_to_sign(&lifted) < 1e-9);
            // C = R_{B(1)} A from the y = 1 slice.
            let b1 = column(&c.positive.b, 0);
            let c_alt = &right_op(&b1) * &c.positive.a;
            assert!((&c_alt - &c.positive.c).max_abs() < 1e-9);
        }
    }

    #[test]
    fn companions_reject_non_orthogonal() {
        let m = Matrix::<f64>::identity(8).scale(2.0);
        assert!(matches!(companions(&m), Err(Error::Precondition(_))));
    }

    #[test]
    fn exp_triple_basics() {
        let e1 = O::unit(1);
        let (l, r) = (left_op(&e1), right_op(&e1));
        let inf = InfTriple::new(l.clone(), r.clone(), &l + &r);
        let at_zero = exp_triple(0.0, &inf).unwrap();
        assert_eq!(at_zero, TrialityTriple::identity());

        // e^{t L_{e1}} = L_{cos t + sin t e1}.
        let t = std::f64::consts::FRAC_PI_2;
        let g = exp_triple(t, &inf).unwrap();
        let z = O::real(t.cos()) + e1.scale(t.sin());
        assert!((&g.a - &left_op(&z)).max_abs() < 1e-12);
        assert!(g.residual() < SOLVED_TOL);

        let mut rng = RngStream::new(26);
        let s = rng.uniform(-3.0, 3.0);
        let prod = exp_triple(s, &inf).unwrap().compose(&exp_triple(-s, &inf).unwrap());
        assert!(prod.distance(&TrialityTriple::identity()) < 1e-10);
    }

    #[test]
    fn json_keys() {
        let t = TrialityTriple::<f64>::identity();
        let v: serde_json::Value = serde_json::to_value(&t).unwrap();
        assert_eq!(v["A"][0][0], 1.0);
        assert_eq!(v["C"].as_array().unwrap().len(), 8);
    }
}
