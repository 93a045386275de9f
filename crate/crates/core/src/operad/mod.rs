//! Symbolic calculus for the low-arity fragment: tree monomials, `∘_i`,
//! the symmetric group action and the differential table.

mod element;
mod generator;

pub use element::{check_d_squared, generator_differential, tabulated_generators, DSquaredReport, render_monomial, Monomial, OperadElement, OperadError, Tree};
pub use generator::{Generator, GeneratorError, Kind};
