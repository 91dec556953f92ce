//! Exact integer kernels: fraction-free elimination, Smith normal form,
//! one-variable integer polynomials, combinatorial numbers and a
//! multi-modular rank with a Hadamard certificate.

mod combin;
mod matrix;
pub mod modular;
mod qpoly;

pub use combin::{binomial, factorial, multinomial, stirling2};
pub use matrix::{determinant, exact_rank, smith_normal_form, BigIntMatrix, SmithForm};
pub use qpoly::QPolynomial;
