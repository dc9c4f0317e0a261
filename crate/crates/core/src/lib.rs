//! Combinatorics and arithmetic of normal-crossing degenerations of surfaces.
//!
//! * [`delta`]: two-dimensional Δ-complexes, homology and collapsibility.
//! * [`lattice`]: intersection forms of blown-up planes.
//! * [`construct`]: glued configurations of surfaces and their dual complexes.
//! * [`obstruction`]: valuation bookkeeping for one-parameter degenerations.
//!
//! Linear algebra is generic over [`Scalar`]; exact rational arithmetic is the
//! default everywhere a result is reported.

pub mod construct;
pub mod delta;
pub mod json;
pub mod lattice;
pub mod matrix;
pub mod obstruction;
pub mod scalar;

pub use scalar::{ratio, ExactScalar, Scalar};

pub type Rational = num_rational::BigRational;
pub type RationalMatrix = matrix::Matrix<Rational>;
pub type FloatMatrix = matrix::Matrix<f64>;
pub type RationalModuliPoint = obstruction::ModuliPoint<Rational>;
pub type RationalQuadricZ = obstruction::QuadricZ<Rational>;
pub type RationalZOrderArc = obstruction::ZOrderArc<Rational>;
