//! Exact computations with strongly regular partitions of the subsets of a
//! finite set and the generalised orbit algebras they carry.
//!
//! Everything is generic over a [`Scalar`]; the exact rational instantiation
//! is the default used by the checks and the command line.

pub mod counterexample;
pub mod enumerate;
pub mod error;
pub mod graphs;
pub mod identities;
pub mod matrix;
pub mod operators;
pub mod partition;
pub mod permgroup;
pub mod poly;
pub mod reconstruction;
pub mod scalar;
pub mod srp;
pub mod subset;
pub mod zeta;

pub use error::{GoaError, Result};
pub use matrix::{EchelonBasis, Matrix};
pub use partition::Partition;
pub use permgroup::{PermGroup, Permutation};
pub use poly::{Basis, Poly};
pub use scalar::Scalar;
pub use srp::{coeff_matrix, verify_goa_closure, verify_strongly_regular, CoeffMatrix, SrpReport};
pub use subset::{GroundSet, SubsetMask};

/// Arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;
pub type RPoly = Poly<Rational>;
pub type RMatrix = Matrix<Rational>;
pub type ROperator = operators::OperatorMatrix<Rational>;
pub type FPoly = Poly<f64>;
