//! Small dense linear algebra: complex matrices, Hermitian eigenvalues,
//! characteristic polynomials and low-degree polynomial roots.

mod cmat;
mod hermitian;
pub mod poly;
pub mod real;

pub use cmat::{subsets, CMat};
pub use hermitian::{hermitian_eigenvalues, JACOBI_OFF_TOL};
