//! Delsarte linear-programming bound for balls.
//!
//! Radial functions are expanded in `b_k(y) = L_k^{(n/2−1)}(2π|y|²) e^{−π|y|²}`,
//! which satisfy `b̂_k = (−1)^k b_k`. For the ball `rBⁿ` the basis is dilated by
//! `λ = r/2`: `h(x) = Σ c_k b_k(x/λ)` and `ĥ(ξ) = λⁿ Σ (−1)^k c_k b_k(λξ)`.
//! The program is therefore solved once in reference coordinates (radius 2)
//! and rescaled, so `A(λD) = λ^{−n} A(D)` holds exactly.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::harmonic::ball_volume;
use crate::lp::maximize_inequality_form;
use crate::special::{bessel_first_zero, laguerre_abs_coefficients, laguerre_all, ln_gamma};

/// Largest dimension accepted by [`delsarte_lp`].
pub const MAX_DIM: usize = 8;
pub const DEFAULT_BASIS: usize = 16;
pub const DEFAULT_GRID: usize = 1000;
/// Sampling extends six Gaussian widths past the reference radius.
pub const REFERENCE_RADIUS: f64 = 2.0;
const AUDIT_FACTOR: usize = 10;
const MAX_CUT_ROUNDS: usize = 8;
/// Audit points violating by more than this become constraint samples.
const CUT_TOL: f64 = 1e-9;
/// Relative slack for the audit of both sign constraints.
pub const AUDIT_TOL: f64 = 1e-6;
/// Exponent of the Kabatiansky–Levenshtein density bound.
pub const KL_EXPONENT: f64 = 0.5990;

/// `R_max = 2 + 6/√π` in reference coordinates.
pub fn reference_r_max() -> f64 {
    REFERENCE_RADIUS + 6.0 / PI.sqrt()
}

/// Radial function `Σ c_k b_k(|x|/λ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSchwartzFunction {
    pub dim: usize,
    pub scale: f64,
    pub coefficients: Vec<f64>,
}

impl RadialSchwartzFunction {
    pub fn new(dim: usize, scale: f64, coefficients: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be at least 1"));
        }
        if scale.is_nan() || scale <= 0.0 {
            return Err(invalid(format!("scale must be positive, got {scale}")));
        }
        Ok(RadialSchwartzFunction { dim, scale, coefficients })
    }

    fn alpha(&self) -> f64 {
        self.dim as f64 / 2.0 - 1.0
    }

    /// `Σ s_k c_k b_k(y)` in reference coordinates with signs `s_k`.
    fn reference_sum(&self, y: f64, alternate: bool) -> f64 {
        let k = self.coefficients.len().saturating_sub(1);
        let z = 2.0 * PI * y * y;
        let gauss = (-PI * y * y).exp();
        laguerre_all(k, self.alpha(), z)
            .iter()
            .zip(&self.coefficients)
            .enumerate()
            .map(|(i, (l, c))| if alternate && i % 2 == 1 { -c * l } else { c * l })
            .sum::<f64>()
            * gauss
    }

    /// `h(x)` at `|x| = r`.
    pub fn eval(&self, r: f64) -> f64 {
        self.reference_sum(r / self.scale, false)
    }

    /// `ĥ(ξ)` at `|ξ| = ρ`.
    pub fn fourier(&self, rho: f64) -> f64 {
        self.scale.powi(self.dim as i32) * self.reference_sum(rho * self.scale, true)
    }

    /// Bound on `sup_{|y| ≥ R} |Σ c_k b_k(y)|` in reference coordinates from the
    /// absolute monomial coefficients of the Laguerre polynomials. The same
    /// bound holds with alternating signs.
    pub fn reference_tail(&self, from: f64) -> f64 {
        let k = self.coefficients.len().saturating_sub(1);
        let mut majorant = vec![0.0; k + 1];
        for (deg, c) in self.coefficients.iter().enumerate() {
            for (i, a) in laguerre_abs_coefficients(deg, self.alpha()).iter().enumerate() {
                majorant[i] += c.abs() * a;
            }
        }
        let envelope = |y: f64| {
            let z = 2.0 * PI * y * y;
            majorant.iter().rev().fold(0.0, |acc, a| acc * z + a) * (-PI * y * y).exp()
        };
        // P(z)e^{−z/2} with nonnegative coefficients decreases once z ≥ 2·deg P.
        let turn = (k as f64 / PI).sqrt();
        if from >= turn {
            return envelope(from);
        }
        let steps = 200;
        (0..=steps).map(|i| envelope(from + (turn - from) * i as f64 / steps as f64)).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelsarteResiduals {
    /// `min(0, min ĥ)` on the audit grid and beyond it.
    pub fourier_min: f64,
    /// `max(0, max h)` outside the ball on the audit grid and beyond it.
    pub spatial_max: f64,
    /// Envelope bound past the sampled range, in the units of `h`.
    pub tail_envelope: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DelsarteBound {
    pub dim: usize,
    pub radius: f64,
    pub value: f64,
    pub basis_size: usize,
    pub grid_size: usize,
    pub r_max: f64,
    pub residuals: DelsarteResiduals,
    pub certified: bool,
    pub function: RadialSchwartzFunction,
}

fn grid(a: f64, b: f64, points: usize) -> impl Iterator<Item = f64> {
    (0..points).map(move |i| a + (b - a) * i as f64 / (points - 1) as f64)
}

/// Upper estimate of `A_{ℝⁿ}(rBⁿ)` over `b_0 … b_K` with `G` samples per
/// constraint family. Audit points on the `10G` grid that violate a sign
/// constraint are added as samples and the program is re-solved.
pub fn delsarte_lp(n: usize, r: f64, basis_size: usize, grid_size: usize) -> Result<DelsarteBound> {
    if n == 0 || n > MAX_DIM {
        return Err(invalid(format!(
            "dimension must be in 1..={MAX_DIM}; the Laguerre basis is not orthonormalized beyond that"
        )));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(invalid(format!("radius must be positive, got {r}")));
    }
    if basis_size < 2 {
        return Err(invalid(format!("basis size must be at least 2, got {basis_size}")));
    }
    if grid_size < 2 {
        return Err(invalid(format!("grid size must be at least 2, got {grid_size}")));
    }
    let alpha = n as f64 / 2.0 - 1.0;
    let vars = basis_size + 1;
    let r_max = reference_r_max();
    let basis_row = |y: f64, alternate: bool| -> Vec<f64> {
        let g = (-PI * y * y).exp();
        laguerre_all(basis_size, alpha, 2.0 * PI * y * y)
            .iter()
            .enumerate()
            .map(|(k, l)| if alternate && k % 2 == 1 { -l * g } else { l * g })
            .collect()
    };
    let at_origin = basis_row(0.0, false);
    let at_origin_hat = basis_row(0.0, true);

    // Reference problem: max −h(0) s.t. −ĥ ≤ 0, h ≤ 0 off the ball, ĥ(0) = 1.
    let mut fourier_pts: Vec<f64> = grid(0.0, r_max, grid_size).collect();
    let mut spatial_pts: Vec<f64> = grid(REFERENCE_RADIUS, r_max, grid_size).collect();
    let objective: Vec<f64> = at_origin.iter().map(|v| -v).collect();
    let lambda = r / REFERENCE_RADIUS;
    let volume_factor = lambda.powi(n as i32);
    let fine = AUDIT_FACTOR * grid_size;
    let mut round = 0;
    let (function, fourier_min, spatial_max) = loop {
        let mut rows = Vec::with_capacity(fourier_pts.len() + spatial_pts.len() + 2);
        let mut rhs = Vec::with_capacity(rows.capacity());
        for &rho in &fourier_pts {
            rows.push(basis_row(rho, true).iter().map(|v| -v).collect::<Vec<f64>>());
            rhs.push(0.0);
        }
        for &s in &spatial_pts {
            rows.push(basis_row(s, false));
            rhs.push(0.0);
        }
        rows.push(at_origin_hat.clone());
        rhs.push(1.0);
        rows.push(at_origin_hat.iter().map(|v| -v).collect());
        rhs.push(-1.0);
        let sol = maximize_inequality_form(&objective, &rows, &rhs).map_err(|e| match e {
            Error::Unbounded => Error::Degenerate("Delsarte program unbounded; normalization row missing".into()),
            other => other,
        })?;
        debug_assert_eq!(sol.x.len(), vars);
        let coefficients: Vec<f64> = sol.x.iter().map(|c| c / volume_factor).collect();
        let function = RadialSchwartzFunction::new(n, lambda, coefficients)?;
        let value = function.eval(0.0);

        // Audit on a finer grid, in the units of the scaled problem.
        let mut fourier_min = 0.0f64;
        let mut new_fourier = Vec::new();
        for rho in grid(0.0, r_max, fine) {
            let v = function.fourier(rho / lambda);
            fourier_min = fourier_min.min(v);
            if v < -CUT_TOL {
                new_fourier.push(rho);
            }
        }
        let mut spatial_max = 0.0f64;
        let mut new_spatial = Vec::new();
        for s in grid(REFERENCE_RADIUS, r_max, fine) {
            let v = function.eval(s * lambda);
            spatial_max = spatial_max.max(v);
            if v > CUT_TOL * value.abs() {
                new_spatial.push(s);
            }
        }
        round += 1;
        if round > MAX_CUT_ROUNDS || (new_fourier.is_empty() && new_spatial.is_empty()) {
            break (function, fourier_min, spatial_max);
        }
        fourier_pts.extend(new_fourier);
        spatial_pts.extend(new_spatial);
    };
    let value = function.eval(0.0);
    let tail_ref = function.reference_tail(r_max);
    let tail_h = tail_ref;
    let tail_hat = tail_ref * volume_factor;
    let residuals = DelsarteResiduals {
        fourier_min: fourier_min.min(-tail_hat),
        spatial_max: spatial_max.max(tail_h),
        tail_envelope: tail_h,
    };
    // ĥ(0) = 1 fixes the scale of the Fourier side; the spatial side is
    // measured against h(0).
    let certified = residuals.fourier_min >= -AUDIT_TOL && residuals.spatial_max <= AUDIT_TOL * value.abs();
    Ok(DelsarteBound {
        dim: n,
        radius: r,
        value,
        basis_size,
        grid_size,
        r_max: r_max * lambda,
        residuals,
        certified,
        function,
    })
}

/// `ln C_L(n)` with `C_L(n) = (q_{n/2}/4)ⁿ / Γ(n/2+1)²`.
pub fn levenshtein_ln_density(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    let nf = n as f64;
    let q = bessel_first_zero(nf / 2.0)?.value;
    Ok(nf * (q / 4.0).ln() - 2.0 * ln_gamma(nf / 2.0 + 1.0))
}

pub fn levenshtein_center_density(n: usize) -> Result<f64> {
    Ok(levenshtein_ln_density(n)?.exp())
}

/// `−log₂ C_L(n) / n`.
pub fn levenshtein_exponent(n: usize) -> Result<f64> {
    Ok(-levenshtein_ln_density(n)? / (n as f64 * std::f64::consts::LN_2))
}

/// Asymptotic envelope `2^{−0.5990 n}`; the o(1) term is dropped.
pub fn kl_center_density(n: usize) -> f64 {
    (-KL_EXPONENT * n as f64).exp2()
}

/// Improvements over `2ⁿ` smaller than this fraction are not reported, since
/// the LP value is an estimate from near-feasibility.
pub const DELSARTE_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BallUpper {
    pub dim: usize,
    pub value: f64,
    pub method: String,
    /// `2ⁿ|Bⁿ| A(2Bⁿ)` from the LP.
    pub delsarte_estimate: f64,
    pub kl_envelope: f64,
    pub certified: bool,
    pub bound: DelsarteBound,
}

/// `W_n(δBⁿ) ≤ min(2ⁿ, 2ⁿ|Bⁿ|A(2Bⁿ))`; independent of `δ`.
pub fn wiener_upper_ball(n: usize, delta: f64, basis_size: usize, grid_size: usize) -> Result<BallUpper> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(invalid(format!("delta must be in (0, 0.5), got {delta}")));
    }
    let bound = delsarte_lp(n, REFERENCE_RADIUS, basis_size, grid_size)?;
    let hlawka = 2f64.powi(n as i32);
    let estimate = hlawka * ball_volume(n, 1.0) * bound.value;
    let use_lp = bound.certified && estimate < hlawka * (1.0 - DELSARTE_MARGIN);
    Ok(BallUpper {
        dim: n,
        value: if use_lp { estimate } else { hlawka },
        method: if use_lp { "delsarte" } else { "hlawka" }.into(),
        delsarte_estimate: estimate,
        kl_envelope: hlawka * kl_center_density(n),
        certified: bound.certified,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levenshtein_small_dimensions() {
        assert!((levenshtein_center_density(1).unwrap() - 1.0).abs() < 1e-10);
        let c2 = levenshtein_center_density(2).unwrap();
        assert!((c2 - 0.917_62).abs() < 1e-4, "{c2}");
        assert!(levenshtein_center_density(0).is_err());
    }

    #[test]
    fn kl_values() {
        assert!((kl_center_density(1) - 0.6602).abs() < 1e-4);
        assert!((2.0 * kl_center_density(1) - 2f64.powf(0.401)).abs() < 1e-12);
        assert!((kl_center_density(10) - 2f64.powf(-5.99)).abs() < 1e-15);
    }

    #[test]
    fn function_and_transform_share_coefficients() {
        let f = RadialSchwartzFunction::new(3, 1.0, vec![1.0, 0.5, -0.25]).unwrap();
        let g = RadialSchwartzFunction::new(3, 1.0, vec![1.0, -0.5, -0.25]).unwrap();
        for r in [0.0, 0.3, 1.1, 2.5] {
            assert!((f.fourier(r) - g.eval(r)).abs() < 1e-14);
        }
    }

    #[test]
    fn tail_envelope_dominates() {
        let f = RadialSchwartzFunction::new(2, 1.0, vec![3.0, -2.0, 1.0, 0.5, -0.7]).unwrap();
        let bound = f.reference_tail(1.5);
        for i in 0..200 {
            let y = 1.5 + i as f64 * 0.02;
            assert!(f.eval(y).abs() <= bound + 1e-15);
            assert!(f.fourier(y).abs() <= bound + 1e-15);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(delsarte_lp(9, 2.0, 8, 100).is_err());
        assert!(delsarte_lp(0, 2.0, 8, 100).is_err());
        assert!(delsarte_lp(1, -1.0, 8, 100).is_err());
        assert!(delsarte_lp(1, 2.0, 1, 100).is_err());
    }

    #[test]
    fn one_dimensional_value_near_half() {
        let b = delsarte_lp(1, 2.0, 8, 200).unwrap();
        assert!(b.value > 0.45 && b.value < 0.6, "{}", b.value);
        assert!((b.function.fourier(0.0) - 1.0).abs() < 1e-9);
    }
}
