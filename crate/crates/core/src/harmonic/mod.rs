//! Fourier analysis of trigonometric polynomials on the torus `𝕋ⁿ = ℝⁿ/ℤⁿ`,
//! with the fundamental cell fixed as `[-1/2, 1/2)ⁿ`.

pub mod domain;
pub mod integrate;
pub mod poly;

pub use domain::{ball_volume, Domain, Shape};
pub use integrate::{box_norm_sq, norm_sq_domain, quadrature_norm_sq, rayleigh_quotient};
pub use poly::{random_pd_poly, Freq, TrigPolynomial};
