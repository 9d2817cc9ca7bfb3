//! Numerical toolkit for planar fourth-order heat kernels with a quartic
//! symbol A(xi) = a xi1^4 + 2b xi1^2 xi2^2 + g xi2^4.
//!
//! The crate classifies the coupling regimes of the symbol, produces exact
//! sum-of-squares certificates for the sharp Garding-type inequality behind
//! the kernel bounds, evaluates the anisotropic distance that controls the
//! decay, computes the kernel and its self-similar profile by adaptive
//! complex-contour quadrature, and assembles leading-order large-argument
//! estimates from the saddle-point data.

pub mod error;
pub mod field;
pub mod finsler;
pub mod quadrature;
pub mod saddle;
pub mod symbol;
pub mod vec2;
pub mod verify;

pub use error::{Error, Result};
pub use quadrature::{KernelValue, Method, QuadratureSpec};
pub use symbol::Coefficients;
