//! Octonions, triality and the spin(7) ⊂ spin(8) ⊂ spin(9) chain, with
//! Finsler-geometric checks on homogeneous sphere orbits.
//!
//! The algebraic core is generic over [`Real`] (`f32`/`f64`); the aliases
//! below fix it to `f64`, which the Lie, sphere and scenario layers use.

pub mod caselab;
pub mod error;
pub mod finsler;
pub mod numkit;
pub mod octonion;
pub mod scalar;
pub mod spheres;
pub mod spinlie;
pub mod triality;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Matrix = numkit::Matrix<f64>;
pub type Matrix32 = numkit::Matrix<f32>;
pub type Octonion = octonion::Octonion<f64>;
pub type Octonion32 = octonion::Octonion<f32>;
pub type TrialityTriple = triality::TrialityTriple<f64>;
pub type TrialityTriple32 = triality::TrialityTriple<f32>;
pub type InfTriple = triality::InfTriple<f64>;
pub type InfTriple32 = triality::InfTriple<f32>;
