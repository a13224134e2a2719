//! Integrals of `|f|²` over domains inside the fundamental cell.

use super::domain::{AxisFactor, Domain};
use super::poly::TrigPolynomial;
use crate::error::{Error, Result};
use crate::quadrature;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Default relative tolerance for the adaptive ball quadrature.
pub const BALL_QUADRATURE_TOL: f64 = 1e-9;

/// Dense coefficient tensor over the per-axis sets of occurring frequencies.
///
/// Axis `i` only carries the distinct values of `ν_i` that occur in the
/// polynomial, so sublattice-supported polynomials (combs) stay compact.
#[derive(Debug, Clone)]
pub(crate) struct DenseCoeffs {
    pub axes: Vec<Vec<i64>>,
    pub data: Vec<Complex64>,
}

impl DenseCoeffs {
    pub fn size_for(f: &TrigPolynomial) -> (Vec<Vec<i64>>, usize) {
        let mut axes: Vec<Vec<i64>> = vec![Vec::new(); f.dim()];
        for (nu, _) in f.iter() {
            for (axis, v) in axes.iter_mut().zip(nu) {
                axis.push(*v);
            }
        }
        for axis in &mut axes {
            axis.sort_unstable();
            axis.dedup();
        }
        let size = axes.iter().map(Vec::len).product();
        (axes, size)
    }

    pub fn from_poly(f: &TrigPolynomial) -> Self {
        let (axes, size) = Self::size_for(f);
        let mut data = vec![Complex64::new(0.0, 0.0); size];
        for (nu, c) in f.iter() {
            let mut idx = 0;
            for (axis, v) in axes.iter().zip(nu) {
                idx = idx * axis.len() + axis.binary_search(v).expect("value collected above");
            }
            data[idx] = *c;
        }
        DenseCoeffs { axes, data }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.axes.iter().map(Vec::len).collect()
    }
}

/// `∫_{-δ}^{δ} e(λx) dx`.
pub fn interval_kernel(lambda: i64, halfwidth: f64) -> f64 {
    if lambda == 0 {
        2.0 * halfwidth
    } else {
        let l = lambda as f64;
        (TAU * l * halfwidth).sin() / (PI * l)
    }
}

/// Largest dense tensor the closed-form box route will allocate.
const MAX_DENSE: usize = 50_000_000;

/// `∫_B |f|²` over the box `B = Π [-δ_i, δ_i]` in closed form.
///
/// Expanding `|f|² = Σ f̂_ν conj(f̂_μ) e((ν−μ)·x)` and integrating termwise
/// gives a quadratic form whose matrix is the Kronecker product of the 1-D
/// kernels `K_i[a][b] = ∫ e((v_a − v_b)x) dx`; it is applied one axis at a
/// time. Very sparse polynomials use the direct double sum instead.
pub fn box_norm_sq(f: &TrigPolynomial, halfwidths: &[f64]) -> Result<f64> {
    if halfwidths.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: halfwidths.len() });
    }
    let (axes, size) = DenseCoeffs::size_for(f);
    let terms = f.len();
    let dense_cost = size.saturating_mul(axes.iter().map(Vec::len).sum::<usize>());
    let pair_cost = terms.saturating_mul(terms).saturating_mul(f.dim());
    if size > MAX_DENSE || pair_cost <= dense_cost {
        return Ok(pairwise_box(f, halfwidths));
    }
    let dense = DenseCoeffs::from_poly(f);
    let dims = dense.dims();
    let mut g = dense.data.clone();
    for (axis, (values, &h)) in dense.axes.iter().zip(halfwidths).enumerate() {
        let m = values.len();
        let mut kernel = vec![0.0; m * m];
        for a in 0..m {
            for b in 0..m {
                kernel[a * m + b] = interval_kernel(values[a] - values[b], h);
            }
        }
        g = apply_along_axis(&g, &dims, axis, &kernel);
    }
    let total: Complex64 = dense.data.iter().zip(&g).map(|(c, v)| c.conj() * v).sum();
    Ok(total.re.max(0.0))
}

fn pairwise_box(f: &TrigPolynomial, halfwidths: &[f64]) -> f64 {
    let terms: Vec<(&Vec<i64>, &Complex64)> = f.iter().collect();
    let mut total = Complex64::new(0.0, 0.0);
    for (nu, a) in &terms {
        for (mu, b) in &terms {
            let k: f64 = nu.iter().zip(mu.iter()).zip(halfwidths).map(|((x, y), h)| interval_kernel(x - y, *h)).product();
            total += *a * b.conj() * k;
        }
    }
    total.re.max(0.0)
}

fn apply_along_axis(data: &[Complex64], dims: &[usize], axis: usize, kernel: &[f64]) -> Vec<Complex64> {
    let m = dims[axis];
    let inner: usize = dims[axis + 1..].iter().product();
    let outer: usize = dims[..axis].iter().product();
    let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
    let mut column = vec![Complex64::new(0.0, 0.0); m];
    for o in 0..outer {
        let base = o * m * inner;
        for i in 0..inner {
            for (a, slot) in column.iter_mut().enumerate() {
                *slot = data[base + a * inner + i];
            }
            for a in 0..m {
                let row = &kernel[a * m..(a + 1) * m];
                let acc: Complex64 = row.iter().zip(&column).map(|(k, c)| c * k).sum();
                out[base + a * inner + i] = acc;
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
enum AxisRole {
    Interval(f64),
    /// Axis inside a ball factor; `first` marks the axis that starts a new ball.
    BallAxis { radius: f64, first: bool },
}

/// `∫_D |f|²` by nested adaptive Gauss–Legendre quadrature.
///
/// Each axis is integrated adaptively; ball factors use the substitution
/// `x = ρ sin θ` on every axis (with `ρ` the radius left by the outer axes),
/// which removes the square-root endpoint behaviour of the section widths.
/// Partial Fourier sums are reduced one axis at a time, so an inner node
/// costs only the size of the remaining coefficient tensor.
pub fn quadrature_norm_sq(f: &TrigPolynomial, domain: &Domain, rel_tol: f64) -> Result<f64> {
    if domain.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: domain.dim() });
    }
    let mut roles = Vec::with_capacity(f.dim());
    for factor in domain.axis_factors() {
        match factor {
            AxisFactor::Interval(h) => roles.push(AxisRole::Interval(h)),
            AxisFactor::Ball { dim, radius } => {
                for k in 0..dim {
                    roles.push(AxisRole::BallAxis { radius, first: k == 0 });
                }
            }
        }
    }
    let dense = DenseCoeffs::from_poly(f);
    let dims = dense.dims();
    let ctx = NestedQuadrature { axes: &dense.axes, roles: &roles, rel_tol };
    Ok(ctx.level(0, &dense.data, &dims, 0.0))
}

struct NestedQuadrature<'a> {
    axes: &'a [Vec<i64>],
    roles: &'a [AxisRole],
    rel_tol: f64,
}

impl NestedQuadrature<'_> {
    fn level(&self, axis: usize, data: &[Complex64], dims: &[usize], rho: f64) -> f64 {
        if axis == self.roles.len() {
            return data[0].norm_sqr();
        }
        // Inner levels get a tighter tolerance so their noise does not stall
        // the outer refinement.
        let tol = if axis == 0 { self.rel_tol } else { 0.1 * self.rel_tol };
        let values = &self.axes[axis];
        let reduce = |x: f64| -> Vec<Complex64> {
            let phases: Vec<Complex64> = values.iter().map(|v| Complex64::from_polar(1.0, TAU * *v as f64 * x)).collect();
            let inner: usize = dims[1..].iter().product();
            let mut out = vec![Complex64::new(0.0, 0.0); inner];
            for (a, p) in phases.iter().enumerate() {
                let slice = &data[a * inner..(a + 1) * inner];
                for (o, c) in out.iter_mut().zip(slice) {
                    *o += c * p;
                }
            }
            out
        };
        match self.roles[axis] {
            AxisRole::Interval(h) => quadrature::adaptive(-h, h, tol, |x| {
                let reduced = reduce(x);
                self.level(axis + 1, &reduced, &dims[1..], 0.0)
            }),
            AxisRole::BallAxis { radius, first } => {
                let r = if first { radius } else { rho };
                if r <= 0.0 {
                    return 0.0;
                }
                quadrature::adaptive(-FRAC_PI_2, FRAC_PI_2, tol, |theta| {
                    let (s, c) = theta.sin_cos();
                    let reduced = reduce(r * s);
                    r * c * self.level(axis + 1, &reduced, &dims[1..], r * c)
                })
            }
        }
    }
}

/// `∫_D |f|²`: closed form for boxes, adaptive quadrature (relative
/// tolerance [`BALL_QUADRATURE_TOL`]) otherwise.
pub fn norm_sq_domain(f: &TrigPolynomial, domain: &Domain) -> Result<f64> {
    if domain.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: domain.dim() });
    }
    domain.check_in_cell()?;
    match domain.box_halfwidths() {
        Some(h) => box_norm_sq(f, &h),
        None => quadrature_norm_sq(f, domain, BALL_QUADRATURE_TOL),
    }
}

/// `∫_{𝕋ⁿ}|f|² / (|D|⁻¹ ∫_D |f|²)`. Every value is a lower bound for `W_n(D)`.
pub fn rayleigh_quotient(f: &TrigPolynomial, domain: &Domain) -> Result<f64> {
    let local = norm_sq_domain(f, domain)?;
    let volume = domain.volume();
    let torus = f.norm_sq_torus();
    if local <= 1e-300 || local <= 1e-14 * torus * volume {
        return Err(Error::Degenerate(format!(
            "integral of |f|^2 over the {} vanishes numerically",
            domain.label()
        )));
    }
    Ok(torus * volume / local)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::poly::random_pd_poly;

    fn one_plus_cos() -> TrigPolynomial {
        TrigPolynomial::from_real_coeffs(1, [(vec![0], 1.0), (vec![1], 0.5), (vec![-1], 0.5)]).unwrap()
    }

    #[test]
    fn constant_over_cube_is_volume() {
        let d = Domain::cube(1, 0.25).unwrap();
        assert!((norm_sq_domain(&TrigPolynomial::constant(1, 1.0), &d).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn one_plus_cos_over_interval() {
        // ∫_{-1/4}^{1/4} (1 + cos 2πx)² dx = 3/4 + 2/π
        let d = Domain::cube(1, 0.25).unwrap();
        let v = norm_sq_domain(&one_plus_cos(), &d).unwrap();
        assert!((v - (0.75 + 2.0 / PI)).abs() < 1e-14);
    }

    #[test]
    fn constant_over_disk() {
        let d = Domain::ball(2, 0.4).unwrap();
        let v = norm_sq_domain(&TrigPolynomial::constant(2, 1.0), &d).unwrap();
        assert!((v - 0.16 * PI).abs() < 1e-12);
    }

    #[test]
    fn domain_outside_cell_rejected() {
        let d = Domain::cube(1, 0.5).unwrap();
        assert!(matches!(norm_sq_domain(&one_plus_cos(), &d), Err(Error::DomainExceedsCell(_))));
    }

    #[test]
    fn dense_and_pairwise_routes_agree() {
        let f = random_pd_poly(5, 2, 4, 1.0);
        let h = [0.2, 0.3];
        let pair = pairwise_box(&f, &h);
        let dense = box_norm_sq(&f, &h).unwrap();
        assert!((pair - dense).abs() < 1e-12 * pair);
    }

    #[test]
    fn quadrature_matches_box_closed_form() {
        let f = random_pd_poly(9, 2, 3, 0.5);
        let d = Domain::cube(2, 0.3).unwrap();
        let exact = box_norm_sq(&f, &[0.3, 0.3]).unwrap();
        let quad = quadrature_norm_sq(&f, &d, 1e-11).unwrap();
        assert!((exact - quad).abs() < 1e-9 * exact);
    }

    #[test]
    fn rayleigh_of_constant_is_one() {
        for d in [Domain::cube(2, 0.1).unwrap(), Domain::ball(2, 0.3).unwrap()] {
            let r = rayleigh_quotient(&TrigPolynomial::constant(2, 1.0), &d).unwrap();
            assert!((r - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn vanishing_polynomial_is_degenerate() {
        let d = Domain::cube(1, 0.25).unwrap();
        assert!(matches!(rayleigh_quotient(&TrigPolynomial::zero(1), &d), Err(Error::Degenerate(_))));
    }
}
