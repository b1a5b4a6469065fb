//! Randomized residuals for the classical octonion identities: composition,
//! adjoint and inverse rules for multiplication operators, the Moufang
//! equalities and two-generator associativity.

use std::collections::BTreeMap;

use super::{left_op, mul, right_op, Octonion};
use crate::numkit::{Matrix, RngStream};

type O = Octonion<f64>;

/// Named maximum residuals over a batch of random inputs.
pub type Residuals = BTreeMap<String, f64>;

pub fn random_octonion(rng: &mut RngStream) -> O {
    O::from_slice(&rng.normal_vec(8)).expect("eight components")
}

pub fn random_unit_imaginary(rng: &mut RngStream) -> O {
    let mut v = rng.unit_vec(7);
    v.insert(0, 0.0);
    O::from_slice(&v).expect("eight components")
}

fn bump(res: &mut Residuals, name: &str, value: f64) {
    let slot = res.entry(name.to_string()).or_insert(0.0);
    *slot = slot.max(value);
}

/// Runs every identity on `samples` random triples `(x, y, z)` (plus a fourth
/// random `w` for the adjoint rule) and returns the worst residual per identity.
pub fn identity_residuals(samples: usize, rng: &mut RngStream) -> Residuals {
    let mut res = Residuals::new();
    for _ in 0..samples {
        let x = random_octonion(rng);
        let y = random_octonion(rng);
        let z = random_octonion(rng);
        let w = random_octonion(rng);
        let nx = x.norm_sq();

        bump(&mut res, "composition_norm", ((x * y).norm() - x.norm() * y.norm()).abs());
        bump(&mut res, "composition_left", ((x * y).inner(&(x * z)) - nx * y.inner(&z)).abs());
        bump(&mut res, "composition_right", ((y * x).inner(&(z * x)) - nx * y.inner(&z)).abs());

        bump(&mut res, "adjoint_left", (x.inner(&(w * y)) - (w.conj() * x).inner(&y)).abs());
        bump(&mut res, "adjoint_right", (x.inner(&(y * w)) - (x * w.conj()).inner(&y)).abs());
        bump(
            &mut res,
            "inner_symmetrized",
            (x * y.conj() + y * x.conj()).dist(&O::real(2.0 * x.inner(&y))),
        );

        bump(&mut res, "cancel_right", ((x * y) * y.conj()).dist(&x.scale(y.norm_sq())));
        bump(&mut res, "cancel_left", (x.conj() * (x * y)).dist(&y.scale(nx)));

        let xinv = x.inverse().expect("random octonion is nonzero");
        bump(&mut res, "left_division", (x * (xinv * y)).dist(&y));
        bump(&mut res, "right_division", ((y * xinv) * x).dist(&y));

        let id = Matrix::identity(8).scale(2.0 * x.inner(&y));
        let l_sum = &(&left_op(&x) * &left_op(&y.conj())) + &(&left_op(&y) * &left_op(&x.conj()));
        let r_sum =
            &(&right_op(&x) * &right_op(&y.conj())) + &(&right_op(&y) * &right_op(&x.conj()));
        bump(&mut res, "operator_anticommutator_left", (l_sum - id.clone()).max_abs());
        bump(&mut res, "operator_anticommutator_right", (r_sum - id).max_abs());

        let xyx = (x * y) * x;
        bump(&mut res, "moufang_left", (xyx * z).dist(&(x * (y * (x * z)))));
        bump(&mut res, "moufang_right", (z * xyx).dist(&(((z * x) * y) * x)));
        bump(&mut res, "moufang_middle", ((x * y) * (z * x)).dist(&((x * (y * z)) * x)));

        let gens = [x, y, x.conj(), y.conj()];
        let mut worst = 0.0f64;
        for a in &gens {
            for b in &gens {
                for c in &gens {
                    worst = worst.max(O::associator(a, b, c).norm());
                }
            }
        }
        bump(&mut res, "two_generator_associativity", worst);
    }
    res
}

/// Three basis octonions whose two parenthesizations differ, with the
/// distance between them.
pub fn non_associativity_witness() -> ([O; 3], f64) {
    let (i, l, j) = (O::unit(1), O::unit(4), O::unit(2));
    let d = mul(&mul(&i, &l), &j).dist(&mul(&i, &mul(&l, &j)));
    ([i, l, j], d)
}
