//! Certified two-sided estimates of the sharp Wiener constant `W_n(D)` for
//! positive definite functions on the torus.
//!
//! `W_n(D)` is the best constant in
//! `∫_{𝕋ⁿ}|f|² ≤ W_n(D) · |D|⁻¹ ∫_D |f|²` over positive definite `f`.
//! Lower bounds come from explicit witnesses (lattice combs), upper bounds
//! from Hlawka's inequality and from the Turán and Delsarte linear programs.

pub mod constructions;
pub mod delsarte;
pub mod error;
pub mod harmonic;
pub mod lp;
pub mod quadrature;
pub mod config;
pub mod report;
pub mod special;
pub mod suites;
pub mod turan;
pub mod wiener;

pub use error::{Error, Result};
pub use harmonic::{Domain, TrigPolynomial};
