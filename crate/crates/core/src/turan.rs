//! Periodic Turán constant of an interval `[-δ, δ]`.
//!
//! Lower estimates come from a linear program over even piecewise-linear
//! profiles. Breakpoints are the uniform grid `t_j = jδ/M` together with the
//! points `|a + bδ| < δ` for small integers `a, b`, where extremal profiles
//! tend to bend. With slopes `s_k` between consecutive nodes and jumps
//! `J_k = s_k − s_{k−1}` (`J_0 = s_0`, `s_K = 0`),
//!
//! `ĝ_ν = −(2π²ν²)⁻¹ Σ_k J_k cos(2πν x_k)`,
//!
//! which on the uniform grid alone is `(δ/M)·sinc²(πνδ/M)·(1 + 2Σ g_j cos(2πν t_j))`.
//!
//! Only frequencies `ν ≤ N` enter the program; every result is re-audited up to
//! `10N`. Frequencies that fail the audit are added as cuts and the program is
//! re-solved a bounded number of times before the estimate is reported.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::harmonic::Domain;
use crate::lp::maximize_inequality_form;

/// Largest allowed violation `-ĝ_ν` for a certified witness.
pub const AUDIT_TOL: f64 = 1e-9;
pub const DEFAULT_GRID: usize = 64;
pub const DEFAULT_FREQ: usize = 256;
/// Range of `a, b` in the extra breakpoints `|a + bδ|`.
pub const DEFAULT_COMBO_ORDER: u32 = 4;
const AUDIT_FACTOR: usize = 10;
const MAX_CUT_ROUNDS: usize = 12;
const CUTS_PER_ROUND: usize = 256;
/// Violations above rounding level still produce cuts, since at high `ν` the
/// `1/ν²` decay hides genuine infeasibility inside [`AUDIT_TOL`].
const CUT_TOL: f64 = 1e-14;

/// Breakpoints `0 = x_0 < … < x_K = δ`.
///
/// Grid nodes closer than `δ/(8M)` to an extra breakpoint are dropped, which
/// keeps node sets nested under `M → 2M`.
pub fn profile_nodes(delta: f64, grid_size: usize, combo_order: u32) -> Vec<f64> {
    let gap = delta / (8.0 * grid_size as f64);
    let mut extra: Vec<f64> = Vec::new();
    let order = combo_order as i64;
    for a in 0..=order {
        for b in -order..=order {
            let x = (a as f64 + b as f64 * delta).abs();
            if x > gap && x < delta - gap && extra.iter().all(|e| (e - x).abs() > 1e-12) {
                extra.push(x);
            }
        }
    }
    let mut nodes: Vec<f64> = (0..=grid_size)
        .map(|j| j as f64 * delta / grid_size as f64)
        .filter(|t| {
            let endpoint = *t == 0.0 || (t - delta).abs() < 1e-15;
            endpoint || extra.iter().all(|e| (e - t).abs() >= gap)
        })
        .collect();
    nodes.extend(extra);
    nodes.sort_by(f64::total_cmp);
    nodes.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    *nodes.last_mut().expect("grid has endpoints") = delta;
    nodes
}

/// Even piecewise-linear function supported in `[-δ, δ]`.
///
/// `values[k] = g(nodes[k])`; `values[0] = 1` and the last value is `0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinearProfile {
    pub halfwidth: f64,
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
}

impl PiecewiseLinearProfile {
    /// Builds a profile from its interior values on `nodes`.
    pub fn from_interior(nodes: Vec<f64>, interior: &[f64]) -> Result<Self> {
        if nodes.len() != interior.len() + 2 {
            return Err(Error::DimensionMismatch { expected: nodes.len() - 2, got: interior.len() });
        }
        if nodes[0] != 0.0 || nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("profile nodes must start at 0 and increase strictly"));
        }
        let mut values = Vec::with_capacity(nodes.len());
        values.push(1.0);
        values.extend_from_slice(interior);
        values.push(0.0);
        Ok(PiecewiseLinearProfile { halfwidth: *nodes.last().unwrap(), nodes, values })
    }

    /// Profile on the uniform grid `jδ/M` from `g_1..g_{M-1}`.
    pub fn uniform(halfwidth: f64, interior: &[f64]) -> Result<Self> {
        let m = interior.len() + 1;
        let nodes = (0..=m).map(|j| j as f64 * halfwidth / m as f64).collect();
        Self::from_interior(nodes, interior)
    }

    /// The triangle `(1 - |x|/δ)₊` sampled on `nodes`.
    pub fn triangle_on(nodes: Vec<f64>) -> Self {
        let delta = *nodes.last().expect("nonempty nodes");
        let values = nodes.iter().map(|x| 1.0 - x / delta).collect();
        PiecewiseLinearProfile { halfwidth: delta, nodes, values }
    }

    pub fn triangle(halfwidth: f64, grid_size: usize) -> Self {
        Self::triangle_on((0..=grid_size).map(|j| j as f64 * halfwidth / grid_size as f64).collect())
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = x.abs();
        if t >= self.halfwidth {
            return 0.0;
        }
        let k = self.nodes.partition_point(|&n| n <= t) - 1;
        let (a, b) = (self.nodes[k], self.nodes[k + 1]);
        let frac = (t - a) / (b - a);
        self.values[k] * (1.0 - frac) + self.values[k + 1] * frac
    }

    fn slopes(&self) -> Vec<f64> {
        self.nodes
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, g)| (g[1] - g[0]) / (x[1] - x[0]))
            .collect()
    }

    /// Fourier coefficient `ĝ_ν` on the unit torus.
    pub fn fourier(&self, nu: i64) -> f64 {
        if nu == 0 {
            return self.mean();
        }
        let w = 2.0 * PI * nu as f64;
        let s = self.slopes();
        // Σ_k J_k c_k = Σ_k s_k (c_k − c_{k+1}).
        let sum: f64 = s
            .iter()
            .enumerate()
            .map(|(k, sk)| sk * ((w * self.nodes[k]).cos() - (w * self.nodes[k + 1]).cos()))
            .sum();
        -sum / (2.0 * PI * PI * (nu as f64).powi(2))
    }

    /// The same function viewed as supported in `[-δ', δ']`, `δ' ≥ δ`.
    /// Fourier coefficients are unchanged.
    pub fn zero_extend(&self, halfwidth: f64) -> Self {
        let mut out = self.clone();
        if halfwidth > self.halfwidth {
            out.nodes.push(halfwidth);
            out.values.push(0.0);
            out.halfwidth = halfwidth;
        }
        out
    }

    /// `ĝ₀ = ∫ g`.
    pub fn mean(&self) -> f64 {
        self.nodes
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, g)| (x[1] - x[0]) * (g[0] + g[1]))
            .sum()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TuranEstimate {
    pub delta: f64,
    pub dim: usize,
    pub lower: f64,
    pub upper: f64,
    pub upper_method: String,
    pub checked_freq: usize,
    pub min_residual: f64,
    pub grid_size: usize,
    pub freq_bound: usize,
    pub constraints: usize,
    pub certified: bool,
    /// Halfwidth of the solve that produced the witness when it was carried
    /// over from a smaller support in a sweep.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extended_from: Option<f64>,
    pub witness: PiecewiseLinearProfile,
}

/// `a_𝕋([-1/q, 1/q]) = 1/q`.
pub fn turan_exact_1d(q: u32) -> Result<f64> {
    if q < 2 {
        return Err(invalid(format!("q must be at least 2, got {q}")));
    }
    Ok(1.0 / q as f64)
}

pub fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(invalid(format!("delta must be in (0, 0.5], got {delta}")));
    }
    Ok(())
}

/// `ĝ₀ ≤ |D|·g(0) = 2δ`.
pub fn turan_trivial_upper(delta: f64) -> Result<f64> {
    check_delta(delta)?;
    Ok(2.0 * delta)
}

/// Frequency bound large enough that every distinct constraint row appears
/// when `δ/M` has small denominator: `max(256, ⌈M/(2δ)⌉)`.
pub fn default_freq_bound(delta: f64, grid_size: usize) -> usize {
    DEFAULT_FREQ.max((grid_size as f64 / (2.0 * delta)).ceil() as usize)
}

/// Every node lies in `ℤ + (δ/M)ℤ`, so the row of frequency `ν` depends only
/// on `±νδ/M mod 1`.
fn row_key(nu: usize, h: f64) -> u64 {
    let t = (nu as f64 * h).rem_euclid(1.0);
    (t.min(1.0 - t) * 1e12).round() as u64
}

/// Row `Σ_i a_i g_i ≤ b` equivalent to `ĝ_ν ≥ 0`, from `Σ_k s_k (c_k − c_{k+1}) ≤ 0`.
fn constraint_row(nu: usize, nodes: &[f64]) -> (Vec<f64>, f64) {
    let w = 2.0 * PI * nu as f64;
    let c: Vec<f64> = nodes.iter().map(|x| (w * x).cos()).collect();
    let d: Vec<f64> = (0..nodes.len() - 1).map(|k| (c[k] - c[k + 1]) / (nodes[k + 1] - nodes[k])).collect();
    let k = nodes.len() - 1;
    let row = (1..k).map(|i| d[i - 1] - d[i]).collect();
    (row, d[0])
}

fn solve_profile(nodes: &[f64], freqs: &[usize]) -> Result<PiecewiseLinearProfile> {
    let k = nodes.len() - 1;
    let vars = k - 1;
    // ĝ₀ = Σ_i (x_{i+1} − x_{i−1}) g_i + x_1.
    let objective: Vec<f64> = (1..k).map(|i| nodes[i + 1] - nodes[i - 1]).collect();
    let mut rows = Vec::with_capacity(2 * vars + freqs.len());
    let mut rhs = Vec::with_capacity(rows.capacity());
    // |g_i| ≤ g(0) = 1.
    for j in 0..vars {
        for sign in [1.0, -1.0] {
            let mut row = vec![0.0; vars];
            row[j] = sign;
            rows.push(row);
            rhs.push(1.0);
        }
    }
    for &nu in freqs {
        let (row, b) = constraint_row(nu, nodes);
        if row.iter().all(|v| v.abs() < 1e-300) {
            continue;
        }
        rows.push(row);
        rhs.push(b);
    }
    let sol = maximize_inequality_form(&objective, &rows, &rhs).map_err(|e| match e {
        Error::Infeasible => Error::Degenerate("Turán program infeasible although the triangle is feasible".into()),
        other => other,
    })?;
    let interior: Vec<f64> = sol.x.iter().map(|g| g.clamp(-1.0, 1.0)).collect();
    PiecewiseLinearProfile::from_interior(nodes.to_vec(), &interior)
}

/// Returns `(min residual, violating frequencies sorted by severity)`.
fn audit(profile: &PiecewiseLinearProfile, limit: usize) -> (f64, Vec<(usize, f64)>) {
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for nu in 1..=limit {
        let c = profile.fourier(nu as i64);
        worst = worst.min(c);
        if c < -CUT_TOL {
            bad.push((nu, c));
        }
    }
    bad.sort_by(|a, b| a.1.total_cmp(&b.1));
    (worst, bad)
}

/// LP lower estimate of `a_𝕋([-δ, δ])` with grid size `M` and frequency bound `N`.
pub fn turan_lp_lower(delta: f64, grid_size: usize, freq_bound: usize) -> Result<TuranEstimate> {
    turan_lp_lower_with(delta, grid_size, freq_bound, DEFAULT_COMBO_ORDER)
}

/// As [`turan_lp_lower`] with an explicit breakpoint order; order 0 keeps the
/// uniform grid only.
pub fn turan_lp_lower_with(delta: f64, grid_size: usize, freq_bound: usize, combo_order: u32) -> Result<TuranEstimate> {
    check_delta(delta)?;
    if grid_size < 4 {
        return Err(invalid(format!("grid size must be at least 4, got {grid_size}")));
    }
    if freq_bound < grid_size {
        return Err(invalid(format!("frequency bound {freq_bound} must be at least the grid size {grid_size}")));
    }
    let h = delta / grid_size as f64;
    let nodes = profile_nodes(delta, grid_size, combo_order);
    let mut keys = BTreeSet::new();
    let mut freqs = Vec::new();
    for nu in 1..=freq_bound {
        if keys.insert(row_key(nu, h)) {
            freqs.push(nu);
        }
    }
    let checked = AUDIT_FACTOR * freq_bound;
    let mut profile = solve_profile(&nodes, &freqs)?;
    let (mut worst, mut bad) = audit(&profile, checked);
    for _ in 0..MAX_CUT_ROUNDS {
        if worst >= -CUT_TOL {
            break;
        }
        let before = freqs.len();
        for &(nu, _) in bad.iter() {
            if keys.insert(row_key(nu, h)) {
                freqs.push(nu);
                if freqs.len() - before >= CUTS_PER_ROUND {
                    break;
                }
            }
        }
        if freqs.len() == before {
            break;
        }
        profile = solve_profile(&nodes, &freqs)?;
        (worst, bad) = audit(&profile, checked);
    }
    // The triangle is always admissible; never report less.
    if profile.mean() < delta && worst < -AUDIT_TOL {
        profile = PiecewiseLinearProfile::triangle_on(nodes);
        worst = 0.0;
    }
    let upper = 2.0 * delta;
    Ok(TuranEstimate {
        delta,
        dim: 1,
        lower: profile.mean().min(upper),
        upper,
        upper_method: "trivial".into(),
        checked_freq: checked,
        min_residual: worst.min(0.0),
        grid_size,
        freq_bound,
        constraints: freqs.len(),
        certified: worst >= -AUDIT_TOL,
        extended_from: None,
        witness: profile,
    })
}

/// Solves an increasing sequence of halfwidths, then carries every certified
/// witness forward by zero extension, so the lower values are nondecreasing.
pub fn turan_sweep(deltas: &[f64], grid_size: usize, freq_bound: usize) -> Result<Vec<TuranEstimate>> {
    use rayon::prelude::*;
    if deltas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("sweep halfwidths must increase strictly"));
    }
    let mut out: Vec<TuranEstimate> =
        deltas.par_iter().map(|&d| turan_lp_lower(d, grid_size, freq_bound)).collect::<Result<_>>()?;
    let mut best: Option<TuranEstimate> = None;
    for est in out.iter_mut() {
        if let Some(prev) = &best {
            if prev.lower > est.lower {
                let source = prev.extended_from.unwrap_or(prev.delta);
                est.witness = prev.witness.zero_extend(est.delta);
                est.lower = prev.lower;
                est.min_residual = prev.min_residual;
                est.certified = true;
                est.extended_from = Some(source);
            }
        }
        if est.certified && best.as_ref().is_none_or(|b| est.lower >= b.lower) {
            best = Some(est.clone());
        }
    }
    Ok(out)
}

/// Estimate with the default grid and frequency bound.
pub fn turan_default(delta: f64) -> Result<TuranEstimate> {
    check_delta(delta)?;
    turan_lp_lower(delta, DEFAULT_GRID, default_freq_bound(delta, DEFAULT_GRID))
}

/// `a_𝕋ⁿ([-δ,δ]ⁿ) = a_𝕋([-δ,δ])ⁿ` applied to both endpoints.
pub fn turan_cube(base: &TuranEstimate, n: usize) -> Result<TuranEstimate> {
    if n == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    if base.dim != 1 {
        return Err(invalid("turan_cube expects a one-dimensional estimate"));
    }
    let mut out = base.clone();
    out.dim = n;
    out.lower = base.lower.powi(n as i32);
    out.upper = base.upper.powi(n as i32);
    Ok(out)
}

/// `|½D|`, the value of the convolution root.
pub fn turan_spatial_lower(domain: &Domain) -> f64 {
    domain.half().volume()
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TuranChain {
    pub spatial_lower: f64,
    pub lp_lower: f64,
    pub trivial_upper: f64,
    pub certified: bool,
}

/// Checks `|½D| ≤ a_𝕋 estimate ≤ (2δ)ⁿ` for the cube `[-δ,δ]ⁿ`.
pub fn turan_chain_check(delta: f64, n: usize) -> Result<TuranChain> {
    let base = turan_default(delta)?;
    let cube = turan_cube(&base, n)?;
    let spatial = turan_spatial_lower(&Domain::cube(n, delta)?);
    let slack = 1e-9;
    if spatial > cube.lower + slack || cube.lower > cube.upper + slack {
        return Err(Error::Mismatch(format!(
            "Turán chain out of order: {spatial} ≤ {} ≤ {}",
            cube.lower, cube.upper
        )));
    }
    Ok(TuranChain { spatial_lower: spatial, lp_lower: cube.lower, trivial_upper: cube.upper, certified: cube.certified })
}
