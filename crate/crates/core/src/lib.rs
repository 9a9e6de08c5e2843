//! Amoebas of sparse Laurent polynomials.

pub mod corpus;
pub mod maps;
pub mod membership;
pub mod newton;
pub mod poly;
pub mod render;
pub mod roots;
pub mod tropical;

pub use num_complex::Complex64;
pub use poly::{parse_polynomial, parse_polynomial_with_arity, ComplexPoint, Exponent, LaurentPolynomial, LogPoint, PolyError};
