//! Explicit extremal and auxiliary functions: convolution roots, periodized
//! mollifiers, lattice combs and mollification.

use crate::error::{invalid, Error, Result};
use crate::harmonic::{ball_volume, Domain, Freq, Shape, TrigPolynomial};
use crate::quadrature;
use crate::special::bessel_lambda;
use num_complex::Complex64;
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::{FRAC_PI_2, PI};

/// Relative tolerance of the cap-volume quadrature behind ball overlaps.
pub const OVERLAP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvRootKind {
    IntervalTriangle,
    CubeProductTriangle,
    BallRadial,
}

/// The convolution root `h* = b⁻¹ χ_K * χ_K` with `K = ½D` and `b = |K|`.
///
/// `h*(0) = 1`, `h*` vanishes outside `D`, and
/// `ĥ*(ξ) = b⁻¹ χ̂_K(ξ)² >= 0` with `ĥ*(0) = |½D|`.
#[derive(Debug, Clone)]
pub struct ConvRoot {
    domain: Domain,
    kind: ConvRootKind,
    size: f64,
    normalization: f64,
}

impl ConvRoot {
    pub fn new(domain: &Domain) -> Result<Self> {
        let (kind, size) = match domain.shape() {
            Shape::Cube { halfwidth } if domain.dim() == 1 => (ConvRootKind::IntervalTriangle, *halfwidth),
            Shape::Cube { halfwidth } => (ConvRootKind::CubeProductTriangle, *halfwidth),
            Shape::Ball { radius } if domain.dim() == 1 => (ConvRootKind::IntervalTriangle, *radius),
            Shape::Ball { radius } => (ConvRootKind::BallRadial, *radius),
            Shape::Product { .. } => return Err(Error::UnsupportedShape("convolution root")),
        };
        Ok(ConvRoot { domain: domain.clone(), kind, size, normalization: domain.half().volume() })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn kind(&self) -> ConvRootKind {
        self.kind
    }

    /// `b = |½D|`.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// `h*(x)`.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.domain.dim() {
            return Err(Error::DimensionMismatch { expected: self.domain.dim(), got: x.len() });
        }
        let d = self.size;
        Ok(match self.kind {
            ConvRootKind::IntervalTriangle | ConvRootKind::CubeProductTriangle => {
                x.iter().map(|v| (1.0 - v.abs() / d).max(0.0)).product()
            }
            ConvRootKind::BallRadial => {
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                ball_overlap_fraction(self.domain.dim(), r / d)
            }
        })
    }

    /// `ĥ*(ξ)`.
    pub fn fourier(&self, xi: &[f64]) -> Result<f64> {
        if xi.len() != self.domain.dim() {
            return Err(Error::DimensionMismatch { expected: self.domain.dim(), got: xi.len() });
        }
        let d = self.size;
        let n = self.domain.dim() as f64;
        Ok(match self.kind {
            ConvRootKind::IntervalTriangle | ConvRootKind::CubeProductTriangle => {
                self.normalization * xi.iter().map(|v| sinc(PI * v * d).powi(2)).product::<f64>()
            }
            ConvRootKind::BallRadial => {
                let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
                self.normalization * bessel_lambda(0.5 * n, PI * d * r).powi(2)
            }
        })
    }

    /// `ĥ*(0) = |½D|`.
    pub fn fourier_at_zero(&self) -> f64 {
        self.normalization
    }
}

pub(crate) fn sinc(z: f64) -> f64 {
    if z.abs() < 1e-8 {
        1.0 - z * z / 6.0
    } else {
        z.sin() / z
    }
}

/// `|B_R ∩ (B_R + x)| / |B_R|` for two balls of radius `R` in `n` dimensions
/// whose centres are `|x| = 2Rt` apart.
///
/// The intersection is two caps of height `R(1 − t)`; the cap volume is the
/// integral of `(n−1)`-ball cross sections, written as
/// `(2|B^{n−1}|/|Bⁿ|) ∫_{asin t}^{π/2} cosⁿφ dφ`.
pub fn ball_overlap_fraction(n: usize, t: f64) -> f64 {
    let t = t.abs();
    if t >= 1.0 {
        return 0.0;
    }
    if n == 1 {
        return 1.0 - t;
    }
    let ratio = 2.0 * ball_volume(n - 1, 1.0) / ball_volume(n, 1.0);
    let ni = n as i32;
    ratio * quadrature::adaptive(t.asin(), FRAC_PI_2, OVERLAP_TOL, |phi| phi.cos().powi(ni))
}

/// Spatial profile of the mollifier `φ = h*_{Bⁿ} / ĥ*_{Bⁿ}(0)`, supported in
/// the unit ball, with `φ̂(ξ) = Λ_{n/2}(π|ξ|)²`.
#[derive(Debug, Clone, Copy)]
pub struct Mollifier {
    dim: usize,
}

impl Mollifier {
    pub fn new(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Mollifier { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `φ(x)` as a function of `|x|`.
    pub fn eval_radial(&self, r: f64) -> f64 {
        ball_overlap_fraction(self.dim, r) / self.half_ball_volume()
    }

    /// `φ̂(ξ)` as a function of `|ξ|`.
    pub fn fourier_radial(&self, rho: f64) -> f64 {
        bessel_lambda(0.5 * self.dim as f64, PI * rho).powi(2)
    }

    fn half_ball_volume(&self) -> f64 {
        ball_volume(self.dim, 0.5)
    }

    /// `φ(0) = |½Bⁿ|⁻¹`.
    pub fn value_at_origin(&self) -> f64 {
        1.0 / self.half_ball_volume()
    }

    /// `∫ φ²` by radial quadrature of the spatial closed form.
    pub fn l2_norm_sq(&self) -> f64 {
        let n = self.dim;
        let sphere = n as f64 * ball_volume(n, 1.0);
        let ni = n as i32;
        let integral = quadrature::adaptive(0.0, 1.0, 1e-12, |r| {
            ball_overlap_fraction(n, r).powi(2) * r.powi(ni - 1)
        });
        sphere * integral / self.half_ball_volume().powi(2)
    }
}

/// Default frequency cutoff `⌈10/ε⌉` for periodized mollifiers.
pub fn default_cutoff(epsilon: f64) -> usize {
    (10.0 / epsilon).ceil() as usize
}

/// Truncated periodization `ψ_ε` together with its exact truncation residuals.
#[derive(Debug, Clone)]
pub struct Periodization {
    pub poly: TrigPolynomial,
    pub epsilon: f64,
    pub cutoff: usize,
    /// `Σ_{|ν|_∞ > N} φ̂(εν)`, a bound on `sup |ψ_ε − ψ_{ε,N}|`.
    pub sup_tail: f64,
    /// `Σ_{|ν|_∞ > N} φ̂(εν)²`, the squared `L²` distance to `ψ_ε`.
    pub l2_tail: f64,
    /// `‖ψ_ε‖²_{L²(𝕋ⁿ)}` from the spatial form.
    pub l2_norm_sq: f64,
}

/// Builds `(ψ̂_ε)_ν = φ̂(εν)` for `ν` in `qℤⁿ ∩ [−N, N]ⁿ`.
fn mollifier_coefficients(dim: usize, epsilon: f64, cutoff: usize, stride: i64) -> BTreeMap<Freq, Complex64> {
    let phi = Mollifier::new(dim);
    let reach = cutoff as i64 / stride;
    let side = (2 * reach + 1) as usize;
    let mut cache: HashMap<i64, f64> = HashMap::new();
    let mut map = BTreeMap::new();
    for idx in 0..side.pow(dim as u32) {
        let mut rem = idx;
        let mut nu = vec![0i64; dim];
        for slot in nu.iter_mut().rev() {
            *slot = stride * ((rem % side) as i64 - reach);
            rem /= side;
        }
        let norm_sq: i64 = nu.iter().map(|v| v * v).sum();
        let c = *cache
            .entry(norm_sq)
            .or_insert_with(|| if norm_sq == 0 { 1.0 } else { phi.fourier_radial(epsilon * (norm_sq as f64).sqrt()) });
        map.insert(nu, Complex64::new(c, 0.0));
    }
    map
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 0.5 {
        Ok(())
    } else {
        Err(invalid(format!("epsilon must be in (0, 1/2), got {epsilon}")))
    }
}

/// `ψ_ε(x) = Σ_ν φ_ε(x + ν)` truncated to `|ν|_∞ <= cutoff` in frequency.
///
/// `cutoff = None` uses [`default_cutoff`]. Both tails are exact: by Poisson
/// summation and the support of `φ_ε`, `Σ_ν φ̂(εν) = ψ_ε(0) = ε⁻ⁿφ(0)` and
/// `Σ_ν φ̂(εν)² = ε⁻ⁿ‖φ‖²`.
pub fn periodize(epsilon: f64, dim: usize, cutoff: Option<usize>) -> Result<Periodization> {
    check_epsilon(epsilon)?;
    if dim == 0 {
        return Err(invalid("dimension must be positive"));
    }
    let cutoff = cutoff.unwrap_or_else(|| default_cutoff(epsilon));
    let map = mollifier_coefficients(dim, epsilon, cutoff, 1);
    let poly = TrigPolynomial::from_map_unchecked(dim, map, true, true);
    let phi = Mollifier::new(dim);
    let scale = epsilon.powi(-(dim as i32));
    let l2_norm_sq = scale * phi.l2_norm_sq();
    let sup_tail = (scale * phi.value_at_origin() - poly.coeff_l1()).max(0.0);
    let l2_tail = (l2_norm_sq - poly.norm_sq_torus()).max(0.0);
    Ok(Periodization { poly, epsilon, cutoff, sup_tail, l2_tail, l2_norm_sq })
}

/// Doubles the cutoff from 8 until the relative `L²` tail of `ψ_ε` drops
/// below `rel_tol`; fails once `max_cutoff` is exceeded.
pub fn periodize_to_tolerance(epsilon: f64, dim: usize, rel_tol: f64, max_cutoff: usize) -> Result<Periodization> {
    let mut cutoff = 8;
    loop {
        let p = periodize(epsilon, dim, Some(cutoff))?;
        if p.l2_tail <= rel_tol * p.l2_norm_sq {
            return Ok(p);
        }
        cutoff *= 2;
        if cutoff > max_cutoff {
            return Err(invalid(format!(
                "frequency cutoff {max_cutoff} too small for relative L2 tail {rel_tol} at epsilon {epsilon}"
            )));
        }
    }
}

/// `|Γ|⁻¹ Σ_{γ∈Γ} e(−ν·γ)` over `Γ = (1/q)ℤⁿ/ℤⁿ`, by direct summation.
pub fn character_average(q: u32, nu: &[i64]) -> f64 {
    nu.iter()
        .map(|&v| {
            let s: Complex64 = (0..q)
                .map(|k| Complex64::from_polar(1.0, -2.0 * PI * v as f64 * k as f64 / q as f64))
                .sum();
            s.re / q as f64
        })
        .product()
}

/// The lattice comb `f = |Γ|⁻¹ Σ_{γ∈Γ} ψ_ε(· − γ)`, `Γ = (1/q)ℤⁿ/ℤⁿ`.
#[derive(Debug, Clone)]
pub struct LatticeComb {
    pub poly: TrigPolynomial,
    pub q: u32,
    pub epsilon: f64,
    pub cutoff: usize,
    /// `Σ` of the discarded comb coefficients; bounds the sup-norm error.
    pub sup_tail: f64,
    /// `Σ` of the squared discarded comb coefficients.
    pub l2_tail: f64,
    /// `‖ψ_ε‖²_{L²(𝕋ⁿ)}`.
    pub psi_l2_norm_sq: f64,
}

impl LatticeComb {
    /// `|Γ| = qⁿ`.
    pub fn lattice_size(&self) -> f64 {
        (self.q as f64).powi(self.poly.dim() as i32)
    }
}

/// Builds the lattice comb: `f̂_ν = (ψ̂_ε)_ν` when `q` divides every
/// component of `ν`, zero otherwise. Requires `q >= 2` and `ε < 1/(2q)`.
pub fn lattice_comb(q: u32, dim: usize, epsilon: f64, cutoff: Option<usize>) -> Result<LatticeComb> {
    if q < 2 {
        return Err(invalid(format!("q must be >= 2, got {q}")));
    }
    if dim == 0 {
        return Err(invalid("dimension must be positive"));
    }
    if !(epsilon > 0.0 && epsilon < 0.5 / q as f64) {
        return Err(invalid(format!(
            "epsilon must be in (0, 1/(2q)) = (0, {}) so translates stay disjoint, got {epsilon}",
            0.5 / q as f64
        )));
    }
    let cutoff = cutoff.unwrap_or_else(|| default_cutoff(epsilon));
    let map = mollifier_coefficients(dim, epsilon, cutoff, q as i64);
    let poly = TrigPolynomial::from_map_unchecked(dim, map, true, true);
    let phi = Mollifier::new(dim);
    let size = (q as f64).powi(dim as i32);
    let scale = epsilon.powi(-(dim as i32));
    let psi_l2_norm_sq = scale * phi.l2_norm_sq();
    // f(0) = |Γ|⁻¹ψ_ε(0) and ‖f‖² = |Γ|⁻¹‖ψ_ε‖², both exact.
    let sup_tail = (scale * phi.value_at_origin() / size - poly.coeff_l1()).max(0.0);
    let l2_tail = (psi_l2_norm_sq / size - poly.norm_sq_torus()).max(0.0);
    Ok(LatticeComb { poly, q, epsilon, cutoff, sup_tail, l2_tail, psi_l2_norm_sq })
}

/// A mollified function `f_ε = b (f * ψ_ε)` with `b = ‖ψ_ε‖⁻¹_{L²(𝕋ⁿ)}`.
#[derive(Debug, Clone)]
pub struct Mollified {
    pub poly: TrigPolynomial,
    pub b: f64,
}

/// `(f̂_ε)_ν = b f̂_ν (ψ̂_ε)_ν`. By Cauchy–Schwarz `‖f_ε‖_∞ <= ‖f‖₂`.
pub fn mollify(f: &TrigPolynomial, epsilon: f64) -> Result<Mollified> {
    if !f.is_positive_definite() {
        return Err(invalid("mollify requires a positive definite polynomial"));
    }
    check_epsilon(epsilon)?;
    let dim = f.dim();
    let phi = Mollifier::new(dim);
    let b = (epsilon.powi(dim as i32) / phi.l2_norm_sq()).sqrt();
    let map = f
        .iter()
        .map(|(nu, c)| {
            let r = nu.iter().map(|v| (v * v) as f64).sum::<f64>().sqrt();
            let w = if r == 0.0 { 1.0 } else { phi.fourier_radial(epsilon * r) };
            (nu.clone(), c * (b * w))
        })
        .collect();
    Ok(Mollified { poly: TrigPolynomial::from_map_unchecked(dim, map, f.is_real_valued(), true), b })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_root() {
        let h = ConvRoot::new(&Domain::interval(0.3).unwrap()).unwrap();
        assert_eq!(h.kind(), ConvRootKind::IntervalTriangle);
        assert_eq!(h.eval(&[0.0]).unwrap(), 1.0);
        assert!((h.eval(&[0.15]).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(h.eval(&[0.31]).unwrap(), 0.0);
        assert!((h.fourier(&[0.0]).unwrap() - 0.3).abs() < 1e-15);
        assert!((h.fourier_at_zero() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn disk_root() {
        let h = ConvRoot::new(&Domain::ball(2, 0.4).unwrap()).unwrap();
        assert!((h.fourier(&[0.0, 0.0]).unwrap() - PI * 0.04).abs() < 1e-14);
        assert!((h.eval(&[0.0, 0.0]).unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(h.eval(&[0.3, 0.3]).unwrap(), 0.0);
        // Lens area of two unit disks at distance 1: 2π/3 − √3/2.
        let lens = 2.0 * PI / 3.0 - 0.75f64.sqrt();
        assert!((ball_overlap_fraction(2, 0.5) - lens / PI).abs() < 1e-10);
    }

    #[test]
    fn ball_root_transform_integrates_to_root() {
        // ∫ ĥ* = h*(0) = 1, radially in 3-D: 4π ∫ ĥ*(ρ) ρ² dρ.
        let h = ConvRoot::new(&Domain::ball(3, 1.0).unwrap()).unwrap();
        let total = 4.0 * PI * quadrature::adaptive(0.0, 400.0, 1e-10, |r| h.fourier(&[r, 0.0, 0.0]).unwrap() * r * r);
        assert!((total - 1.0).abs() < 5e-3, "{total}");
    }

    #[test]
    fn product_root_unsupported() {
        let d = Domain::product(vec![Domain::interval(0.1).unwrap(), Domain::interval(0.2).unwrap()]).unwrap();
        assert!(matches!(ConvRoot::new(&d), Err(Error::UnsupportedShape(_))));
    }

    #[test]
    fn mollifier_norms() {
        // n = 1: φ = (1 − |x|)₊, ∫φ² = 2/3, φ(0) = 1.
        let m = Mollifier::new(1);
        assert!((m.l2_norm_sq() - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.value_at_origin() - 1.0).abs() < 1e-15);
        assert!((m.fourier_radial(0.5) - (2.0 / PI).powi(2)).abs() < 1e-14);
    }

    #[test]
    fn periodization_basic_properties() {
        let p = periodize(0.2, 1, Some(200)).unwrap();
        assert_eq!(p.poly.coeff(&[0]).re, 1.0);
        assert!(p.poly.iter().all(|(_, c)| c.re >= 0.0 && c.im == 0.0));
        assert!(p.sup_tail > 0.0 && p.sup_tail < 0.1);
        assert!(p.l2_tail < 1e-6);
        for x in [0.2, 0.25, 0.3, 0.45, -0.21] {
            assert!(p.poly.evaluate(&[x]).unwrap().re.abs() <= p.sup_tail, "x = {x}");
        }
        assert!(periodize(0.5, 1, None).is_err());
        assert!(periodize(0.0, 1, None).is_err());
    }

    #[test]
    fn periodization_tolerance_search() {
        let p = periodize_to_tolerance(0.1, 1, 1e-6, 1 << 16).unwrap();
        assert!(p.l2_tail <= 1e-6 * p.l2_norm_sq);
        assert!(periodize_to_tolerance(0.1, 1, 1e-14, 64).is_err());
    }

    #[test]
    fn comb_support() {
        let c = lattice_comb(3, 1, 0.05, Some(60)).unwrap();
        assert_eq!(c.poly.coeff(&[1]).re, 0.0);
        assert_eq!(c.poly.coeff(&[0]).re, 1.0);
        let p = periodize(0.05, 1, Some(60)).unwrap();
        assert_eq!(c.poly.coeff(&[3]), p.poly.coeff(&[3]));
        assert!(lattice_comb(3, 1, 1.0 / 6.0, None).is_err());
        assert!(lattice_comb(1, 1, 0.1, None).is_err());
    }

    #[test]
    fn mollify_constant() {
        let m = mollify(&TrigPolynomial::constant(1, 1.0), 0.1).unwrap();
        assert!((m.poly.coeff(&[0]).re - m.b).abs() < 1e-15);
        let not_pd = TrigPolynomial::from_real_coeffs(1, [(vec![0], -1.0)]).unwrap();
        assert!(mollify(&not_pd, 0.1).is_err());
    }
}
