//! Exact integral E∞-coalgebra structures on normalized chains of simplicial sets:
//! transfer to homology, cobar graded ranks and low-degree invariants.
//!
//! Everything is generic over a [`scalar::Scalar`]; [`Int`] is the default.

pub mod algebra;
pub mod cobar;
pub mod coalgebra;
pub mod fixtures;
pub mod formats;
pub mod invariants;
pub mod operad;
pub mod scalar;
pub mod simplicial;
pub mod transfer;

pub use num_bigint::BigInt;

pub type Int = BigInt;
pub type Op = algebra::GradedOperator<Int>;
pub type Complex = algebra::ChainComplex<Int>;
pub type Structure = coalgebra::CoalgebraStructure<Int>;
pub type Package = transfer::TransferPackage<Int>;
