//! Difference polynomials in shifted variables `x@i`, their grammar, and
//! endomorphisms acting on them.

mod endo;
mod parser;
mod poly;
mod shift;

pub use endo::{apply_endo, compose_endo, parse_endo, EndoSpec};
pub use parser::parse_poly;
pub use poly::{DifferencePolynomial, Monomial, PolyRing, VarShift};
pub use shift::ShiftOperator;

#[cfg(test)]
mod tests;
