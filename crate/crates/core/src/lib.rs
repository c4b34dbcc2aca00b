//! Constructive finite truncations of the Stieltjes moment problem with
//! complex exponents, together with the Mellin machinery and structural
//! checks that surround it.
//!
//! Functions on `(0, ∞)` are represented through the substitution
//! `x = log t`, `F(x) = e^x f(e^x)`. Under this map the Mellin transform
//! `M_z(f) = ∫ t^z f(t) dt` becomes the bilateral Laplace transform
//! `∫ e^{zx} F(x) dx`, and Mellin convolution becomes ordinary convolution.

pub mod error;
pub mod exponents;
pub mod function;
pub mod json;
pub mod linalg;
pub mod mellin;
pub mod parametric;
pub mod quadrature;
pub mod registry;
pub mod report;
pub mod seminorm;
pub mod solver;
pub mod term;
pub mod weights;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Version tag embedded in every serialized report.
pub const SCHEMA_VERSION: &str = "mmf-report/1";
