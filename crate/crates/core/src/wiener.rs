//! Two-sided bounds for `W_n(D)`: lattice-comb lower bounds, Hlawka / Turán /
//! Delsarte upper bounds, the defect `θ(δ)`, the `L^p` variant and the
//! real-line inequality together with its failure without periodization.

use crate::constructions::{lattice_comb, LatticeComb};
use crate::delsarte::{self, wiener_upper_ball};
use crate::error::{invalid, Error, Result};
use crate::harmonic::{norm_sq_domain, rayleigh_quotient, Domain, Shape, TrigPolynomial};
use crate::quadrature::{self, Rule};
use crate::turan::{self, turan_cube, turan_lp_lower};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Slack on the ordering `1 ≤ lower ≤ upper ≤ 2ⁿ`.
pub const ORDER_SLACK: f64 = 1e-9;
/// Relative tolerance between numeric comb quotients and `|D|qⁿ`.
pub const COMB_TOL: f64 = 1e-6;
/// Largest number of distinct frequencies per axis for which the comb is
/// built and checked numerically; beyond it the closed form is reported.
pub const MAX_COMB_AXIS: usize = 2001;
/// Largest comb checked numerically on boxes (closed-form integrals).
pub const MAX_COMB_TERMS_BOX: usize = 250_000;
/// Largest comb checked numerically on other shapes (nested quadrature).
pub const MAX_COMB_TERMS_QUADRATURE: usize = 5_000;
/// Slack in the Hlawka and real-line inequality verdicts.
pub const VERDICT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowerMethod {
    ConstantOne,
    LatticeComb,
    Theorem3Formula,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpperMethod {
    Hlawka,
    Turan,
    Delsarte,
}

impl LowerMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            LowerMethod::ConstantOne => "constant-one",
            LowerMethod::LatticeComb => "lattice-comb",
            LowerMethod::Theorem3Formula => "theorem3-formula",
        }
    }
}

impl UpperMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            UpperMethod::Hlawka => "hlawka",
            UpperMethod::Turan => "turan",
            UpperMethod::Delsarte => "delsarte",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bound<M> {
    pub value: f64,
    pub method: M,
    pub params: BTreeMap<String, f64>,
}

/// A certified sandwich `lower ≤ W_n(D) ≤ upper`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub domain: Domain,
    pub dim: usize,
    pub lower: Bound<LowerMethod>,
    pub upper: Bound<UpperMethod>,
    pub residuals: BTreeMap<String, f64>,
    pub certified: bool,
}

impl BoundReport {
    /// Checks `1 ≤ lower ≤ upper ≤ 2ⁿ` up to [`ORDER_SLACK`].
    pub fn check_order(&self) -> Result<()> {
        let top = 2f64.powi(self.dim as i32);
        let (lo, up) = (self.lower.value, self.upper.value);
        if lo < 1.0 - ORDER_SLACK || lo > up + ORDER_SLACK || up > top + ORDER_SLACK {
            return Err(Error::Mismatch(format!("bounds out of order: 1 <= {lo} <= {up} <= {top} fails")));
        }
        Ok(())
    }

    pub fn gap(&self) -> f64 {
        self.upper.value - self.lower.value
    }
}

/// Knobs of the linear programs behind the upper bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverParams {
    pub turan_grid: usize,
    /// `None` selects [`turan::default_freq_bound`].
    pub turan_freq: Option<usize>,
    pub delsarte_basis: usize,
    pub delsarte_grid: usize,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            turan_grid: turan::DEFAULT_GRID,
            turan_freq: None,
            delsarte_basis: delsarte::DEFAULT_BASIS,
            delsarte_grid: delsarte::DEFAULT_GRID,
        }
    }
}

impl SolverParams {
    fn freq(&self, delta: f64) -> usize {
        self.turan_freq.unwrap_or_else(|| turan::default_freq_bound(delta, self.turan_grid))
    }
}

/// Default comb width `0.9 · min{inradius, 1/q − δ}`.
pub fn default_epsilon(domain: &Domain, q: u32) -> f64 {
    0.9 * domain.inradius().min(1.0 / q as f64 - domain.enclosing_halfwidth())
}

/// Largest `q` with `D ⊂ δIⁿ`, `δ < 1/q`; `None` when no `q ≥ 2` fits.
pub fn best_lattice_q(domain: &Domain) -> Option<u32> {
    let delta = domain.enclosing_halfwidth();
    let mut q = (1.0 / delta).floor() as u32;
    if q as f64 * delta >= 1.0 {
        q -= 1;
    }
    (q >= 2).then_some(q)
}

fn check_lattice(domain: &Domain, q: u32, epsilon: f64) -> Result<()> {
    let delta = domain.enclosing_halfwidth();
    if q < 2 {
        return Err(invalid(format!("q must be >= 2, got {q}")));
    }
    if delta * q as f64 >= 1.0 {
        return Err(invalid(format!("domain halfwidth {delta} must be below 1/q = {}", 1.0 / q as f64)));
    }
    let cap = domain.inradius().min(1.0 / q as f64 - delta);
    if !(epsilon > 0.0 && epsilon < cap) {
        return Err(invalid(format!("epsilon must be in (0, {cap}), got {epsilon}")));
    }
    Ok(())
}

/// Per-axis frequency count of the comb with the default cutoff.
fn comb_axis_len(q: u32, epsilon: f64) -> usize {
    let reach = crate::constructions::default_cutoff(epsilon) / q as usize;
    2 * reach + 1
}

/// Numeric comb check behind [`wiener_lower_lattice`].
#[derive(Debug, Clone)]
pub struct LatticeCheck {
    pub closed_form: f64,
    pub numeric: f64,
    pub rel_error: f64,
    pub comb: LatticeComb,
}

/// Builds the lattice comb for `D`, `q`, `ε` and compares its Rayleigh
/// quotient with `|D|qⁿ`.
pub fn lattice_check(domain: &Domain, q: u32, epsilon: f64) -> Result<LatticeCheck> {
    check_lattice(domain, q, epsilon)?;
    let n = domain.dim();
    let comb = lattice_comb(q, n, epsilon, None)?;
    let closed_form = domain.volume() * (q as f64).powi(n as i32);
    let numeric = rayleigh_quotient(&comb.poly, domain)?;
    let rel_error = (numeric - closed_form).abs() / closed_form;
    Ok(LatticeCheck { closed_form, numeric, rel_error, comb })
}

/// `|D|qⁿ ≤ W_n(D)`, returned in closed form after the numeric comb quotient
/// has been checked against it to [`COMB_TOL`]. Non-box domains go through
/// nested quadrature, which takes tens of seconds for a two-dimensional ball.
pub fn wiener_lower_lattice(domain: &Domain, q: u32, epsilon: f64) -> Result<f64> {
    let check = lattice_check(domain, q, epsilon)?;
    if check.rel_error > COMB_TOL {
        return Err(Error::Mismatch(format!(
            "comb quotient {} differs from |D|q^n = {} by {:.3e} relative",
            check.numeric, check.closed_form, check.rel_error
        )));
    }
    Ok(check.closed_form)
}

/// Lower bound: the better of `1` and `|D|qⁿ`; the comb is checked
/// numerically when small enough.
pub fn wiener_lower(domain: &Domain, q: Option<u32>, epsilon: Option<f64>) -> Result<(Bound<LowerMethod>, BTreeMap<String, f64>)> {
    domain.check_in_cell()?;
    let mut residuals = BTreeMap::new();
    let one = Bound { value: 1.0, method: LowerMethod::ConstantOne, params: BTreeMap::new() };
    let q = match q {
        Some(q) => q,
        None => match best_lattice_q(domain) {
            Some(q) => q,
            None => return Ok((one, residuals)),
        },
    };
    let eps = epsilon.unwrap_or_else(|| default_epsilon(domain, q));
    check_lattice(domain, q, eps)?;
    let n = domain.dim();
    let formula = domain.volume() * (q as f64).powi(n as i32);
    let mut params = BTreeMap::from([("q".to_string(), q as f64), ("epsilon".to_string(), eps)]);
    if formula <= 1.0 {
        return Ok((one, residuals));
    }
    let axis = comb_axis_len(q, eps);
    let cap = if domain.is_box() { MAX_COMB_TERMS_BOX } else { MAX_COMB_TERMS_QUADRATURE };
    let method = if axis <= MAX_COMB_AXIS && axis.saturating_pow(n as u32) <= cap {
        let check = lattice_check(domain, q, eps)?;
        residuals.insert("comb_rel_error".into(), check.rel_error);
        residuals.insert("comb_sup_tail".into(), check.comb.sup_tail);
        params.insert("cutoff".into(), check.comb.cutoff as f64);
        if check.rel_error > COMB_TOL {
            return Err(Error::Mismatch(format!(
                "comb quotient {} differs from |D|q^n = {} by {:.3e} relative",
                check.numeric, check.closed_form, check.rel_error
            )));
        }
        LowerMethod::LatticeComb
    } else {
        LowerMethod::Theorem3Formula
    };
    Ok((Bound { value: formula, method, params }, residuals))
}

/// Upper bound: minimum of Hlawka's `2ⁿ`, the certified Turán bound
/// `|D| / a_𝕋(D)` for cubes (ties go to Turán) and the Delsarte bound for
/// balls. Returns the bound, its residuals and whether every ingredient
/// that was used is certified.
pub fn wiener_upper(domain: &Domain, params: &SolverParams) -> Result<(Bound<UpperMethod>, BTreeMap<String, f64>)> {
    domain.check_in_cell()?;
    let n = domain.dim();
    let hlawka = 2f64.powi(n as i32);
    let mut best = Bound { value: hlawka, method: UpperMethod::Hlawka, params: BTreeMap::new() };
    let mut residuals = BTreeMap::new();
    match domain.shape() {
        Shape::Cube { halfwidth } => {
            let delta = *halfwidth;
            let base = turan_lp_lower(delta, params.turan_grid, params.freq(delta))?;
            let cube = turan_cube(&base, n)?;
            residuals.insert("turan_min_residual".into(), base.min_residual);
            if cube.certified && cube.lower > 0.0 {
                let value = domain.volume() / cube.lower;
                if value <= hlawka + ORDER_SLACK {
                    best = Bound {
                        value: value.min(hlawka),
                        method: UpperMethod::Turan,
                        params: BTreeMap::from([
                            ("a_lower".into(), cube.lower),
                            ("grid_size".into(), base.grid_size as f64),
                            ("freq_bound".into(), base.freq_bound as f64),
                        ]),
                    };
                }
            }
        }
        Shape::Ball { radius } if n <= delsarte::MAX_DIM => {
            let ball = wiener_upper_ball(n, *radius, params.delsarte_basis, params.delsarte_grid)?;
            residuals.insert("delsarte_fourier_min".into(), ball.bound.residuals.fourier_min);
            residuals.insert("delsarte_spatial_max".into(), ball.bound.residuals.spatial_max);
            residuals.insert("delsarte_estimate".into(), ball.delsarte_estimate);
            if ball.method == UpperMethod::Delsarte.as_str() {
                best = Bound {
                    value: ball.value,
                    method: UpperMethod::Delsarte,
                    params: BTreeMap::from([
                        ("basis_size".into(), ball.bound.basis_size as f64),
                        ("grid_size".into(), ball.bound.grid_size as f64),
                    ]),
                };
            }
        }
        _ => {}
    }
    Ok((best, residuals))
}

/// Full sandwich for `D`. `q = None` picks [`best_lattice_q`].
pub fn wiener_bounds(domain: &Domain, q: Option<u32>, epsilon: Option<f64>, params: &SolverParams) -> Result<BoundReport> {
    let (lower, mut residuals) = wiener_lower(domain, q, epsilon)?;
    let (upper, up_res) = wiener_upper(domain, params)?;
    residuals.extend(up_res);
    let report = BoundReport { domain: domain.clone(), dim: domain.dim(), lower, upper, residuals, certified: true };
    report.check_order()?;
    Ok(report)
}

/// `θ(δ) = 1 − δ / a` from a certified Turán lower witness `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theta {
    pub delta: f64,
    pub value: f64,
    pub a_lower: f64,
    pub certified: bool,
}

pub fn theta(delta: f64, params: &SolverParams) -> Result<Theta> {
    let est = turan_lp_lower(delta, params.turan_grid, params.freq(delta))?;
    Ok(Theta { delta, value: 1.0 - delta / est.lower, a_lower: est.lower, certified: est.certified })
}

/// `W_n((1/q)Iⁿ) ∈ [2ⁿ(δq)ⁿ, 2ⁿ]`, the lower end from the probe cube
/// `δIⁿ ⊂ (1/q)Iⁿ`.
pub fn cube_wiener_sandwich(q: u32, n: usize, delta_probe: f64) -> Result<BoundReport> {
    if q < 3 {
        return Err(invalid(format!("q must be >= 3, got {q}")));
    }
    let side = 1.0 / q as f64;
    if !(delta_probe > 0.0 && delta_probe < side) {
        return Err(invalid(format!("delta_probe must be in (0, 1/q) = (0, {side}), got {delta_probe}")));
    }
    let top = 2f64.powi(n as i32);
    let lower = top * (delta_probe * q as f64).powi(n as i32);
    let report = BoundReport {
        domain: Domain::cube(n, side)?,
        dim: n,
        lower: Bound {
            value: lower,
            method: LowerMethod::Theorem3Formula,
            params: BTreeMap::from([("q".into(), q as f64), ("delta_probe".into(), delta_probe)]),
        },
        upper: Bound { value: top, method: UpperMethod::Hlawka, params: BTreeMap::new() },
        residuals: BTreeMap::from([("gap".into(), top - lower)]),
        certified: true,
    };
    report.check_order()?;
    Ok(report)
}

/// Outcome of `∫_{𝕋ⁿ}|f|² ≤ |½D|⁻¹ ∫_D |f|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HlawkaCheck {
    pub torus: f64,
    /// `|½D|⁻¹ ∫_D |f|²`.
    pub bound: f64,
    /// Rayleigh quotient `∫_{𝕋ⁿ}|f|² / (|D|⁻¹∫_D|f|²)`, at most `2ⁿ`.
    pub rayleigh: f64,
    pub passed: bool,
}

pub fn hlawka_verify(f: &TrigPolynomial, domain: &Domain) -> Result<HlawkaCheck> {
    let local = norm_sq_domain(f, domain)?;
    let torus = f.norm_sq_torus();
    let bound = local / domain.half().volume();
    let top = 2f64.powi(domain.dim() as i32);
    let rayleigh = if local > 0.0 { torus * domain.volume() / local } else if torus == 0.0 { 0.0 } else { f64::INFINITY };
    Ok(HlawkaCheck { torus, bound, rayleigh, passed: rayleigh <= top + VERDICT_SLACK })
}

/// `∫_{𝕋ⁿ}|f|^p / (|D|⁻¹ ∫_D |f|^p)` for a real-valued `f` and even `p`,
/// through `|f|^p = (f^{p/2})²`.
pub fn p_rayleigh_quotient(f: &TrigPolynomial, domain: &Domain, p: u32) -> Result<f64> {
    check_p(p)?;
    if !f.is_real_valued() {
        return Err(invalid("p-power quotient needs a real-valued polynomial"));
    }
    let mut g = f.clone();
    for _ in 1..p / 2 {
        g = g.multiply(f)?;
    }
    rayleigh_quotient(&g, domain)
}

fn check_p(p: u32) -> Result<()> {
    if p >= 2 && p.is_multiple_of(2) {
        Ok(())
    } else {
        Err(invalid(format!("p must be an even integer >= 2, got {p}")))
    }
}

/// Sandwich for `W_{n,p}(D)`: lower `|D|qⁿ` (comb checked at `p = 2` and
/// `p = 4`), upper the `p = 2` upper bound.
pub fn wiener_p_bounds(domain: &Domain, p: u32, q: u32, params: &SolverParams) -> Result<BoundReport> {
    check_p(p)?;
    let eps = default_epsilon(domain, q);
    let mut report = wiener_bounds(domain, Some(q), Some(eps), params)?;
    report.lower.params.insert("p".into(), p as f64);
    if report.lower.method == LowerMethod::LatticeComb {
        let comb = lattice_comb(q, domain.dim(), eps, None)?;
        let closed = domain.volume() * (q as f64).powi(domain.dim() as i32);
        for pp in [2u32, 4] {
            let ratio = p_rayleigh_quotient(&comb.poly, domain, pp)?;
            let rel = (ratio - closed).abs() / closed;
            report.residuals.insert(format!("comb_p{pp}_rel_error"), rel);
            if rel > COMB_TOL {
                return Err(Error::Mismatch(format!("p = {pp} comb quotient {ratio} differs from {closed}")));
            }
        }
    }
    Ok(report)
}

/// `f = |B_r|⁻¹ χ_{B_r} * χ_{B_r}` on `ℝⁿ` against the unit cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealLineCounterexample {
    pub radius: f64,
    pub dim: usize,
    /// `∫_{ℝⁿ} f²`.
    pub full_norm_sq: f64,
    /// `∫_{[-1/2,1/2]ⁿ} f²`.
    pub cell_norm_sq: f64,
    pub ratio: f64,
    /// `∫ f = |B_r|`.
    pub mass: f64,
}

fn disk_overlap(t: f64) -> f64 {
    if t >= 1.0 {
        0.0
    } else {
        (2.0 / std::f64::consts::PI) * (t.acos() - t * (1.0 - t * t).sqrt())
    }
}

/// Ratio `∫_{ℝⁿ}f² / ∫_{cell} f²` for the ball autocorrelation, `n ∈ {1, 2}`.
/// It grows like `|B_r|`, so no constant bounds `∫_{ℝⁿ}` by a single cell.
pub fn realline_counterexample(r: f64, n: usize) -> Result<RealLineCounterexample> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(invalid(format!("radius must be positive, got {r}")));
    }
    let (full, cell, mass) = match n {
        1 => {
            let s = 2.0 * r;
            let cell = if s <= 0.5 { 4.0 * r / 3.0 } else { (2.0 * s / 3.0) * (1.0 - (1.0 - 0.5 / s).powi(3)) };
            (4.0 * r / 3.0, cell, 2.0 * r)
        }
        2 => {
            let tau = std::f64::consts::TAU;
            let s = 2.0 * r;
            let f = |x: f64, y: f64| disk_overlap((x * x + y * y).sqrt() / s);
            let full = tau * quadrature::adaptive(0.0, s, 1e-12, |rho| disk_overlap(rho / s).powi(2) * rho);
            let mass = tau * quadrature::adaptive(0.0, s, 1e-12, |rho| disk_overlap(rho / s) * rho);
            let reach = 0.5f64.min(s);
            let cell = 4.0
                * quadrature::adaptive(0.0, reach, 1e-10, |x| {
                    quadrature::adaptive(0.0, reach, 1e-10, |y| f(x, y).powi(2))
                });
            (full, cell, mass)
        }
        _ => return Err(invalid(format!("real-line counterexample supports n = 1 or 2, got {n}"))),
    };
    Ok(RealLineCounterexample { radius: r, dim: n, full_norm_sq: full, cell_norm_sq: cell, ratio: full / cell, mass })
}

/// `f(x) = Σ wᵢ (1 − |x|/sᵢ)₊`, a positive combination of one-dimensional
/// convolution roots; positive definite with support `[−max sᵢ, max sᵢ]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleMixture {
    pub weights: Vec<f64>,
    pub halfwidths: Vec<f64>,
}

impl TriangleMixture {
    pub fn new(weights: Vec<f64>, halfwidths: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.len() != halfwidths.len() {
            return Err(invalid("need matching, nonempty weight and halfwidth lists"));
        }
        if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) || halfwidths.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
            return Err(invalid("weights must be nonnegative and halfwidths positive"));
        }
        Ok(TriangleMixture { weights, halfwidths })
    }

    /// The convolution root of `[-s, s]`: the triangle of halfwidth `s`.
    pub fn conv_root(s: f64) -> Result<Self> {
        Self::new(vec![1.0], vec![s])
    }

    pub fn support(&self) -> f64 {
        self.halfwidths.iter().cloned().fold(0.0, f64::max)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.weights.iter().zip(&self.halfwidths).map(|(w, s)| w * (1.0 - x.abs() / s).max(0.0)).sum()
    }

    /// `∫_a^b f²`, exact: `f` is piecewise linear between the kinks `0, ±sᵢ`.
    pub fn norm_sq_on(&self, a: f64, b: f64) -> f64 {
        let mut cuts: Vec<f64> = self.halfwidths.iter().flat_map(|s| [-s, *s]).chain([0.0, a, b]).filter(|x| *x >= a && *x <= b).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let rule = Rule::new(3);
        cuts.windows(2).map(|w| rule.integrate(w[0], w[1], |x| self.eval(x).powi(2))).sum()
    }
}

/// Seeded mixture of one to four triangles, halfwidths in `[0.05, 5]`.
pub fn random_triangle_mixture(seed: u64) -> TriangleMixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms = rng.random_range(1..=4usize);
    let weights = (0..terms).map(|_| rng.random_range(0.05..1.0)).collect();
    let halfwidths = (0..terms).map(|_| rng.random_range(0.05..5.0)).collect();
    TriangleMixture { weights, halfwidths }
}

/// Outcome of `∫_ℝ f² ≤ |½D|⁻¹ ∫_{D+ℤ} f²` with `D = [-δ, δ]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealLineCheck {
    pub delta: f64,
    pub full_norm_sq: f64,
    pub periodic_norm_sq: f64,
    /// `δ⁻¹ ∫_{D+ℤ} f²`.
    pub bound: f64,
    pub passed: bool,
}

/// Checks the real-line Hlawka inequality with `∫_{D+ℤ}` summed over the
/// cells `|k| ≤ k_cells`, which must cover the support of `f`.
pub fn realline_inequality_check(f: &TriangleMixture, delta: f64, k_cells: usize) -> Result<RealLineCheck> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(invalid(format!("delta must be in (0, 0.5), got {delta}")));
    }
    let reach = f.support();
    if reach > k_cells as f64 + 1.0 - delta {
        return Err(invalid(format!("{k_cells} cells do not cover the support [-{reach}, {reach}]")));
    }
    let full = f.norm_sq_on(-reach, reach);
    let k = k_cells as i64;
    let periodic: f64 = (-k..=k).map(|c| f.norm_sq_on(c as f64 - delta, c as f64 + delta)).sum();
    let bound = periodic / delta;
    Ok(RealLineCheck { delta, full_norm_sq: full, periodic_norm_sq: periodic, bound, passed: full <= bound * (1.0 + VERDICT_SLACK) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_values() {
        let d = Domain::cube(1, 0.3).unwrap();
        let eps = default_epsilon(&d, 3);
        assert!((wiener_lower_lattice(&d, 3, eps).unwrap() - 1.8).abs() < 1e-12);
        assert!(wiener_lower_lattice(&d, 4, 0.01).is_err());
        assert!(wiener_lower_lattice(&d, 3, 0.05).is_err());
    }

    #[test]
    fn best_q() {
        assert_eq!(best_lattice_q(&Domain::cube(1, 0.3).unwrap()), Some(3));
        assert_eq!(best_lattice_q(&Domain::cube(1, 0.25).unwrap()), Some(3));
        assert_eq!(best_lattice_q(&Domain::cube(1, 0.45).unwrap()), Some(2));
    }

    #[test]
    fn sandwich_examples() {
        let r = cube_wiener_sandwich(3, 1, 0.33).unwrap();
        assert!((r.lower.value - 1.98).abs() < 1e-12 && r.upper.value == 2.0);
        let r = cube_wiener_sandwich(3, 2, 0.33).unwrap();
        assert!((r.lower.value - 3.9204).abs() < 1e-12);
        let r = cube_wiener_sandwich(4, 1, 0.249).unwrap();
        assert!((r.lower.value - 1.992).abs() < 1e-12);
        assert!(cube_wiener_sandwich(3, 1, 0.34).is_err());
        assert!(cube_wiener_sandwich(2, 1, 0.3).is_err());
    }

    #[test]
    fn hlawka_constant() {
        let c = hlawka_verify(&TrigPolynomial::constant(1, 1.0), &Domain::cube(1, 0.25).unwrap()).unwrap();
        assert!((c.torus - 1.0).abs() < 1e-15 && (c.bound - 2.0).abs() < 1e-15 && c.passed);
    }

    #[test]
    fn realline_closed_form() {
        let a = realline_counterexample(1.0, 1).unwrap();
        let b = realline_counterexample(10.0, 1).unwrap();
        assert_eq!(b.full_norm_sq, 40.0 / 3.0);
        assert!(b.ratio >= 5.0 * a.ratio);
        let t = TriangleMixture::conv_root(20.0).unwrap();
        assert!((t.norm_sq_on(-20.0, 20.0) - b.full_norm_sq).abs() < 1e-12);
        assert!((t.norm_sq_on(-0.5, 0.5) - b.cell_norm_sq).abs() < 1e-12);
    }

    #[test]
    fn realline_disk() {
        let c = realline_counterexample(2.0, 2).unwrap();
        let area = std::f64::consts::PI * 4.0;
        assert!((c.mass - area).abs() < 1e-8 * area);
        assert!((crate::constructions::ball_overlap_fraction(2, 0.3) - disk_overlap(0.3)).abs() < 1e-9);
    }

    #[test]
    fn realline_inequality() {
        let f = TriangleMixture::conv_root(1.0).unwrap();
        assert!(realline_inequality_check(&f, 0.3, 2).unwrap().passed);
        assert!(realline_inequality_check(&TriangleMixture::conv_root(0.2).unwrap(), 0.3, 0).unwrap().passed);
        assert!(realline_inequality_check(&TriangleMixture::conv_root(5.0).unwrap(), 0.3, 2).is_err());
    }

    #[test]
    fn odd_p_rejected() {
        let d = Domain::cube(1, 0.3).unwrap();
        assert!(wiener_p_bounds(&d, 3, 3, &SolverParams::default()).is_err());
    }
}
