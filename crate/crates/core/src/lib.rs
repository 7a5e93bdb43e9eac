//! Polynomial maps on configurations of distinct points and their
//! normalized determinants.
//!
//! A configuration of `n` labeled points in Euclidean 3-space, hyperbolic
//! 3-space, or the Riemann sphere determines, for every split
//! `n = d + k` and every `d`-subset of observers, a homogeneous polynomial
//! of degree `d` in `k + 1` complex variables. Expressing the resulting
//! family in the monomial basis indexed by subsets yields a square matrix
//! whose determinant `D` is independent of the Hopf-lift gauge choices.
//! This crate computes the families and `D`, verifies the projective
//! delta-pairing identities exactly, and probes the linear-independence and
//! `|D| >= 1` conjectures by randomized sampling and derivative-free
//! minimization.
//!
//! All numerics are generic over the scalar type through [`scalar::Real`];
//! the `*64` aliases at the crate root pin the default double-precision
//! instantiation.

pub mod algebra;
pub mod error;
pub mod geom;
pub mod io;
pub mod linalg;
pub mod maps;
pub mod scalar;
pub mod seeding;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

/// Double-precision complex scalar.
pub type C64 = num_complex::Complex<f64>;
/// Double-precision configuration.
pub type Configuration64 = geom::Configuration<f64>;
/// Double-precision sphere point.
pub type SpherePoint64 = geom::SpherePoint<f64>;
/// Double-precision Hopf lift.
pub type HopfLift64 = geom::HopfLift<f64>;
/// Double-precision lift table.
pub type HopfLiftTable64 = geom::HopfLiftTable<f64>;
/// Double-precision binary form.
pub type BinaryPoly64 = algebra::BinaryPoly<f64>;
/// Double-precision dense homogeneous polynomial.
pub type MultiPoly64 = algebra::MultiPoly<f64>;
/// Double-precision polynomial family.
pub type PolyFamily64 = maps::PolyFamily<f64>;
/// Double-precision determinant report.
pub type DeterminantReport64 = maps::DeterminantReport<f64>;
/// Double-precision minimizer result.
pub type MinimizeResult64 = verify::MinimizeResult<f64>;

/// Single-precision complex scalar.
pub type C32 = num_complex::Complex<f32>;
/// Single-precision configuration (experiments only; documented tolerances
/// assume `f64`).
pub type Configuration32 = geom::Configuration<f32>;
/// Single-precision binary form.
pub type BinaryPoly32 = algebra::BinaryPoly<f32>;
/// Single-precision dense homogeneous polynomial.
pub type MultiPoly32 = algebra::MultiPoly<f32>;
