//! Exact linear algebra over the integers: matrices, Smith normal form,
//! chain complexes, graded operators, homology and deformation retractions.

pub mod chain;
pub mod complex;
pub mod homology;
pub mod matrix;
pub mod operator;
pub mod snf;

pub use chain::{TensorChain, Word};
pub use complex::{ChainComplex, ComplexError};
pub use homology::{build_sdr, build_sdr_variant, homology, tensor_complex, DegreeHomology, HomologyReport, Sdr, SdrError};
pub use matrix::Matrix;
pub use operator::{GradedOperator, OperatorError};
pub use snf::{smith_normal_form, solve, SmithForm};
