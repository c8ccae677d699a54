//! Numerical toolkit for convolution with fractional singular measures on the
//! Heisenberg group `H^n = R^{2n} x R`.
//!
//! The crate is organised by subsystem:
//!
//! * [`special_fn`] scalar special functions (complex Gamma, Pochhammer,
//!   Laguerre, bump cutoffs, fractional integration kernel);
//! * [`quad`] adaptive Gauss-Kronrod quadrature with oscillation-aware panels;
//! * [`laguerre_transform`] the transform `int sigma^beta L_k^{n-1} e^{-sigma(1/2+i xi)}`
//!   by quadrature and in closed form;
//! * [`heisenberg`] group law, measures and direct convolution;
//! * [`spectrum`] diagonal entries of polyradial kernels and oscillatory factors;
//! * [`type_set`] exact geometry of type sets and a three-valued classifier;
//! * [`scaling`] dyadic and test-function scaling experiments.

pub mod error;
pub mod heisenberg;
pub mod laguerre_transform;
pub mod quad;
pub mod scaling;
pub mod special_fn;
pub mod spectrum;
pub mod type_set;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use num_rational::BigRational;
