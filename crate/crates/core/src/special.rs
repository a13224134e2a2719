//! Special functions: log-gamma, Bessel functions of the first kind and their
//! first zeros, and generalized Laguerre polynomials.

use crate::error::{Error, Result};
use crate::quadrature::{self, base_rule};
use std::f64::consts::PI;

/// Natural logarithm of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Arguments at or below this use the power series.
pub const SERIES_LIMIT: f64 = 12.0;

/// Bessel function of the first kind `J_ν(x)` for real `ν >= 0`, `x >= 0`.
///
/// Three regimes:
/// * `x <= 12`: power series (at most ~4 digits of cancellation);
/// * `x >= 25` and `x >= 2ν²`: Hankel's large-argument expansion;
/// * otherwise the Schläfli integral
///   `J_ν(x) = (1/π)∫₀^π cos(νθ − x sin θ) dθ − (sin νπ/π)∫₀^∞ e^{−x sinh t − νt} dt`.
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    assert!(nu >= 0.0 && x >= 0.0, "bessel_j requires nu >= 0 and x >= 0");
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_LIMIT {
        bessel_series(nu, x)
    } else if x >= 25.0 && x >= 2.0 * nu * nu {
        bessel_hankel(nu, x)
    } else {
        bessel_integral(nu, x)
    }
}

fn bessel_series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let lead = (nu * half.ln() - ln_gamma(nu + 1.0)).exp();
    lead * normalized_series(nu, half * half)
}

/// `Σ_k (−q)^k Γ(ν+1) / (k! Γ(k+ν+1))`, i.e. `Γ(ν+1)(x/2)^{−ν} J_ν(x)` with `q = x²/4`.
fn normalized_series(nu: f64, q: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= -q / (k * (k + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k * k > q {
            break;
        }
        k += 1.0;
        if k > 500.0 {
            break;
        }
    }
    sum
}

fn bessel_hankel(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        term *= (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * x);
        if term.abs() >= last || term == 0.0 {
            break;
        }
        last = term.abs();
        // P collects the even terms with alternating sign, Q the odd ones.
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

fn bessel_integral(nu: f64, x: f64) -> f64 {
    let rule = base_rule();
    let panels = ((x + nu) / 4.0).ceil() as usize + 4;
    let first = rule.composite(0.0, PI, panels, |t| (nu * t - x * t.sin()).cos()) / PI;
    let s = (nu * PI).sin();
    if s.abs() < 1e-15 {
        return first;
    }
    // e^{-x sinh t - νt} < e^{-40} beyond t_max.
    let t_max = (40.0 / x).asinh().min(40.0 / nu.max(1e-300));
    let second = quadrature::adaptive(0.0, t_max, 1e-14, |t| (-x * t.sinh() - nu * t).exp());
    first - s / PI * second
}

/// `Γ(ν+1) (z/2)^{−ν} J_ν(z)`, normalized so the value at `z = 0` is 1.
///
/// For `ν = n/2` this is the Fourier transform of the normalized indicator of
/// the unit ball at `|ξ| = z / (2π)`.
pub fn bessel_lambda(nu: f64, z: f64) -> f64 {
    let z = z.abs();
    if z <= SERIES_LIMIT {
        normalized_series(nu, 0.25 * z * z)
    } else {
        (ln_gamma(nu + 1.0) - nu * (0.5 * z).ln()).exp() * bessel_j(nu, z)
    }
}

/// Orders above this use the asymptotic expansion in [`bessel_first_zero`].
pub const FIRST_ZERO_MAX_ORDER: f64 = 100.0;

/// First positive zero of `J_ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselZero {
    pub value: f64,
    /// Set when the value comes from the uniform asymptotic expansion
    /// (orders above [`FIRST_ZERO_MAX_ORDER`]); the expansion error there is
    /// below 1e-6.
    pub asymptotic: bool,
}

/// First positive zero `j_{ν,1}` of `J_ν`, bracketed then bisected to 1e-12.
pub fn bessel_first_zero(nu: f64) -> Result<BesselZero> {
    if !nu.is_finite() || nu < 0.0 {
        return Err(Error::InvalidParameter(format!("Bessel order must be >= 0, got {nu}")));
    }
    if nu > FIRST_ZERO_MAX_ORDER {
        return Ok(BesselZero { value: mcmahon_first_zero(nu), asymptotic: true });
    }
    let (mut lo, mut hi) = if nu < 1.0 {
        (2.0, 4.0)
    } else {
        // J_ν stays positive on (0, j_{ν,1}) and j_{ν,1} > ν, so scanning up
        // from ν in steps shorter than the zero spacing meets j_{ν,1} first.
        let guess = nu + 1.855_757_1 * nu.cbrt();
        let step = 0.25;
        let mut a = nu;
        let mut found = None;
        while a < guess + 10.0 {
            let b = a + step;
            if bessel_j(nu, b) <= 0.0 {
                found = Some((a, b));
                break;
            }
            a = b;
        }
        found.ok_or(Error::BracketFailure(nu))?
    };
    let f_lo = bessel_j(nu, lo);
    if f_lo <= 0.0 || bessel_j(nu, hi) > 0.0 {
        return Err(Error::BracketFailure(nu));
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if bessel_j(nu, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(BesselZero { value: 0.5 * (lo + hi), asymptotic: false })
}

fn mcmahon_first_zero(nu: f64) -> f64 {
    let c = nu.cbrt();
    nu + 1.855_757_1 * c + 1.033_150 / c - 0.003_97 / nu - 0.090_8 / (nu * c * c) + 0.043 / (nu * nu * c)
}

/// Generalized Laguerre polynomial `L_k^{(α)}(z)` by the three-term recurrence.
pub fn laguerre_eval(k: usize, alpha: f64, z: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - z;
    for m in 1..k {
        let mf = m as f64;
        let next = ((2.0 * mf + 1.0 + alpha - z) * cur - (mf + alpha) * prev) / (mf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Values `L_0^{(α)}(z), …, L_k^{(α)}(z)`.
pub fn laguerre_all(k: usize, alpha: f64, z: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(k + 1);
    out.push(1.0);
    if k == 0 {
        return out;
    }
    out.push(1.0 + alpha - z);
    for m in 1..k {
        let mf = m as f64;
        let next = ((2.0 * mf + 1.0 + alpha - z) * out[m] - (mf + alpha) * out[m - 1]) / (mf + 1.0);
        out.push(next);
    }
    out
}

/// Absolute values of the monomial coefficients of `L_k^{(α)}`, lowest degree
/// first. For `α > −1` all binomials are positive, so these majorize the
/// polynomial on `z >= 0`.
pub fn laguerre_abs_coefficients(k: usize, alpha: f64) -> Vec<f64> {
    let top = ln_gamma(k as f64 + alpha + 1.0);
    (0..=k)
        .map(|i| {
            (top - ln_gamma((k - i) as f64 + 1.0) - ln_gamma(alpha + i as f64 + 1.0) - ln_gamma(i as f64 + 1.0))
                .exp()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn j_half(x: f64) -> f64 {
        (2.0 / (PI * x)).sqrt() * x.sin()
    }

    #[test]
    fn half_order_closed_form() {
        for x in [1.0, 2.0, 3.0, 12.5, 20.0, 40.0, 150.0] {
            assert!((bessel_j(0.5, x) - j_half(x)).abs() < 1e-12, "x = {x}");
        }
        let j32 = |x: f64| (2.0 / (PI * x)).sqrt() * (x.sin() / x - x.cos());
        for x in [0.5, 7.0, 13.0, 30.0] {
            assert!((bessel_j(1.5, x) - j32(x)).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn origin_values() {
        assert_eq!(bessel_j(0.0, 0.0), 1.0);
        assert_eq!(bessel_j(2.0, 0.0), 0.0);
        assert_eq!(bessel_lambda(1.0, 0.0), 1.0);
    }

    #[test]
    fn series_and_integral_agree_at_seam() {
        for nu in [0.0, 0.5, 1.0, 2.5, 7.0, 30.0] {
            let x = SERIES_LIMIT;
            let s = bessel_series(nu, x);
            let i = bessel_integral(nu, x);
            assert!((s - i).abs() < 1e-10, "nu = {nu}: {s} vs {i}");
        }
        for nu in [0.0, 1.0, 3.5] {
            let x = 25.0 + 2.0 * nu * nu;
            assert!((bessel_hankel(nu, x) - bessel_integral(nu, x)).abs() < 1e-12);
        }
    }

    #[test]
    fn integer_order_known_values() {
        // J_0(5) and J_1(10) from standard tables.
        assert!((bessel_j(0.0, 5.0) + 0.177_596_771_314_338_3).abs() < 1e-13);
        assert!((bessel_j(1.0, 10.0) - 0.043_472_746_168_861_44).abs() < 1e-13);
    }

    #[test]
    fn first_zeros() {
        let z = bessel_first_zero(0.5).unwrap();
        assert!((z.value - PI).abs() < 1e-10);
        assert!(!z.asymptotic);
        assert!((bessel_first_zero(1.0).unwrap().value - 3.831_705_970).abs() < 1e-8);
        assert!((bessel_first_zero(0.0).unwrap().value - 2.404_825_557_7).abs() < 1e-9);
        let big = bessel_first_zero(150.0).unwrap();
        assert!(big.asymptotic);
    }

    #[test]
    fn first_zero_near_asymptotic_switch() {
        let exact = bessel_first_zero(100.0).unwrap();
        assert!((exact.value - mcmahon_first_zero(100.0)).abs() < 1e-4);
        assert!(bessel_j(100.0, exact.value).abs() < 1e-10);
    }

    #[test]
    fn rejects_negative_order() {
        assert!(bessel_first_zero(-1.0).is_err());
    }

    #[test]
    fn laguerre_low_degree() {
        for (a, z) in [(0.0, 0.3), (-0.5, 2.0), (1.5, 7.0)] {
            assert_eq!(laguerre_eval(0, a, z), 1.0);
            assert!((laguerre_eval(1, a, z) - (1.0 + a - z)).abs() < 1e-15);
            let l2 = 0.5 * (z * z - 2.0 * (a + 2.0) * z + (a + 1.0) * (a + 2.0));
            assert!((laguerre_eval(2, a, z) - l2).abs() < 1e-13);
        }
        let all = laguerre_all(6, 0.5, 3.0);
        assert!((all[6] - laguerre_eval(6, 0.5, 3.0)).abs() < 1e-14);
    }

    #[test]
    fn laguerre_majorant() {
        let c = laguerre_abs_coefficients(5, -0.5);
        for z in [0.0, 1.0, 10.0, 40.0] {
            let bound: f64 = c.iter().enumerate().map(|(i, a)| a * f64::powi(z, i as i32)).sum();
            assert!(laguerre_eval(5, -0.5, z).abs() <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn ln_gamma_half_integers() {
        // Γ(1/2) = √π, Γ(5/2) = 3√π/4, Γ(11/2) = 945√π/32
        let sp = PI.sqrt();
        for (x, g) in [(0.5, sp), (2.5, 0.75 * sp), (5.5, 945.0 * sp / 32.0)] {
            assert!((ln_gamma(x) - f64::ln(g)).abs() < 1e-12);
        }
    }
}
