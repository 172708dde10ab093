//! Matrix-valued orthogonal polynomials for weights `e^{−N v(x)} e^{Ax} e^{A* x}`
//! on the real line, with `A` nilpotent and subdiagonal.
//!
//! Every numerical type is generic over [`Real`] (`f32` or `f64`); the `*F64`
//! aliases below fix the scalar to `f64`.

pub mod airy;
pub mod asymptotics;
pub mod direct;
pub mod equilibrium;
pub mod error;
pub mod laurent;
pub mod linalg;
pub mod quadrature;
pub mod scalar;
pub mod szego;
pub mod weight;

pub use error::{MvopError, Result};
pub use scalar::Real;

pub type CMatF64 = linalg::CMat<f64>;
pub type NilpotentMatrixF64 = weight::NilpotentMatrix<f64>;
pub type PotentialF64 = weight::Potential<f64>;
pub type MatrixWeightF64 = weight::MatrixWeight<f64>;
pub type SzegoFactorizationF64 = szego::SzegoFactorization<f64>;
pub type SzegoBoundaryDataF64 = szego::SzegoBoundaryData<f64>;
pub type EquilibriumDataF64 = equilibrium::EquilibriumData<f64>;
pub type MvopFamilyF64 = direct::MvopFamily<f64>;
pub type AsymptoticContextF64 = asymptotics::AsymptoticContext<f64>;
