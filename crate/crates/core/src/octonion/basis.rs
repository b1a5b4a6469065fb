use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{mul, Octonion};
use crate::numkit::Matrix;
use crate::scalar::Real;

/// `sign · u_index` for a Cayley–Dickson imaginary unit `u_index`, `index ∈ 1..=7`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedUnit {
    pub index: usize,
    pub sign: i8,
}

impl SignedUnit {
    const fn new(index: usize, sign: i8) -> Self {
        Self { index, sign }
    }

    pub fn octonion<T: Real>(self) -> Octonion<T> {
        let mut o = Octonion::unit(self.index);
        if self.sign < 0 {
            o = -o;
        }
        o
    }
}

/// Signed relabeling `e₁, …, e₇` of the imaginary units with
/// `e₁e₂ = e₃e₄ = e₅e₆ = e₇`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperBasis {
    units: [SignedUnit; 7],
}

/// First hit of [`search_paper_basis`], frozen.
const SHIPPED: [SignedUnit; 7] = [
    SignedUnit::new(1, 1),
    SignedUnit::new(2, 1),
    SignedUnit::new(4, 1),
    SignedUnit::new(7, 1),
    SignedUnit::new(5, -1),
    SignedUnit::new(6, 1),
    SignedUnit::new(3, 1),
];

impl PaperBasis {
    pub fn new() -> Self {
        Self { units: SHIPPED }
    }

    pub fn units(&self) -> &[SignedUnit; 7] {
        &self.units
    }

    /// `eᵢ` for `i ∈ 1..=7`.
    pub fn e<T: Real>(&self, i: usize) -> Octonion<T> {
        assert!((1..=7).contains(&i), "basis index {i} out of range");
        self.units[i - 1].octonion()
    }

    /// `eᵢ` as a vector in `R⁸`.
    pub fn vector<T: Real>(&self, i: usize) -> Vec<T> {
        self.e::<T>(i).to_vec()
    }

    /// Matrix unit `E_{ij}` (maps `e_j ↦ e_i`, kills `1` and the other `e_k`)
    /// in Cayley–Dickson coordinates.
    pub fn matrix_unit<T: Real>(&self, i: usize, j: usize) -> Matrix<T> {
        let (ei, ej) = (self.vector::<T>(i), self.vector::<T>(j));
        Matrix::from_fn(8, 8, |r, c| ei[r] * ej[c])
    }

    /// Max defect of the three product constraints plus orthonormality.
    pub fn defect(&self) -> f64 {
        let e = |i| self.e::<f64>(i);
        let target = e(7);
        let mut d = [(1, 2), (3, 4), (5, 6)]
            .iter()
            .map(|&(a, b)| mul(&e(a), &e(b)).dist(&target))
            .fold(0.0, f64::max);
        for a in 1..=7 {
            d = d.max(e(a).re().abs()).max((e(a).norm() - 1.0).abs());
            for b in (a + 1)..=7 {
                d = d.max(e(a).inner(&e(b)).abs());
            }
        }
        d
    }
}

impl Default for PaperBasis {
    fn default() -> Self {
        Self::new()
    }
}

/// Exhaustive search over signed permutations of the seven imaginary units,
/// permutations in lexicographic order and sign masks ascending; returns the
/// first labeling meeting the product constraints.
pub fn search_paper_basis() -> Option<PaperBasis> {
    for perm in (1..=7usize).permutations(7) {
        for mask in 0u8..128 {
            let units: Vec<SignedUnit> = perm
                .iter()
                .enumerate()
                .map(|(k, &idx)| SignedUnit::new(idx, if mask >> k & 1 == 1 { -1 } else { 1 }))
                .collect();
            let candidate = PaperBasis {
                units: units.try_into().expect("seven units"),
            };
            let e = |i| candidate.e::<f64>(i);
            let target = e(7);
            if [(1, 2), (3, 4), (5, 6)]
                .iter()
                .all(|&(a, b)| mul(&e(a), &e(b)) == target)
            {
                return Some(candidate);
            }
        }
    }
    None
}
