//! Seeded property suites run by `pdw verify`.

use crate::error::{invalid, Result};
use crate::harmonic::{random_pd_poly, Domain, TrigPolynomial};
use crate::wiener::{hlawka_verify, random_triangle_mixture, realline_inequality_check};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// At most this many failing samples are kept in a summary.
pub const MAX_REPORTED_FAILURES: usize = 5;
/// Relative tolerance of the Parseval check.
pub const PARSEVAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteFailure {
    pub index: usize,
    pub detail: String,
    /// The offending function in its canonical text form.
    pub function: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub samples: usize,
    pub passed: usize,
    pub failed: usize,
    /// Largest normalized statistic; at most 1 (up to slack) when all pass.
    pub worst: f64,
    pub failures: Vec<SuiteFailure>,
}

impl SuiteSummary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Per-sample seed derived from the suite seed.
pub fn sample_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index as u64)
}

struct Outcome {
    stat: f64,
    passed: bool,
    detail: String,
    function: String,
}

fn summarize(suite: &str, outcomes: Vec<Outcome>) -> SuiteSummary {
    let samples = outcomes.len();
    let worst = outcomes.iter().map(|o| o.stat).fold(0.0, f64::max);
    let mut failures = Vec::new();
    let mut failed = 0;
    for (index, o) in outcomes.into_iter().enumerate() {
        if !o.passed {
            failed += 1;
            if failures.len() < MAX_REPORTED_FAILURES {
                failures.push(SuiteFailure { index, detail: o.detail, function: o.function });
            }
        }
    }
    SuiteSummary { suite: suite.into(), samples, passed: samples - failed, failed, worst, failures }
}

fn sample_degree(dim: usize, index: usize) -> u32 {
    let cap = match dim {
        1 => 12,
        2 => 5,
        _ => 2,
    };
    1 + (index % cap) as u32
}

fn sample_decay(index: usize) -> f64 {
    [0.0, 0.5, 1.0, 2.0][index % 4]
}

/// Hlawka's inequality on `samples` random positive definite polynomials.
/// The statistic is the Rayleigh quotient divided by `2ⁿ`.
pub fn hlawka_suite(domain: &Domain, samples: usize, seed: u64) -> Result<SuiteSummary> {
    domain.check_in_cell()?;
    let n = domain.dim();
    let top = 2f64.powi(n as i32);
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|i| {
            let f = random_pd_poly(sample_seed(seed, i), n, sample_degree(n, i), sample_decay(i));
            let check = hlawka_verify(&f, domain)?;
            Ok(Outcome {
                stat: check.rayleigh / top,
                passed: check.passed,
                detail: format!("Rayleigh quotient {} exceeds {top}", check.rayleigh),
                function: f.to_text(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize("hlawka", outcomes))
}

/// The real-line inequality on random triangle mixtures. `delta = None`
/// draws `δ` per sample from `[0.05, 0.45]`. The statistic is
/// `∫_ℝ f² / (δ⁻¹ ∫_{D+ℤ} f²)`.
pub fn realline_suite(samples: usize, cells: usize, delta: Option<f64>, seed: u64) -> Result<SuiteSummary> {
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = sample_seed(seed, i);
            let f = random_triangle_mixture(s);
            let d = delta.unwrap_or_else(|| ChaCha8Rng::seed_from_u64(s ^ 0x5DEE_CE66).random_range(0.05..0.45));
            let check = realline_inequality_check(&f, d, cells)?;
            let function = f.weights.iter().zip(&f.halfwidths).map(|(w, h)| format!("{w:e} {h:e}\n")).collect();
            Ok(Outcome {
                stat: check.full_norm_sq / check.bound,
                passed: check.passed,
                detail: format!("at delta {d}: {} > {}", check.full_norm_sq, check.bound),
                function,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize("realline", outcomes))
}

/// `Σ|f̂_ν|²` against the grid mean of `|f|²` on `L = 2·degree + 1` points
/// per axis, which is exact for trigonometric polynomials.
pub fn parseval_residual(f: &TrigPolynomial) -> Result<f64> {
    let n = f.dim();
    let side = (2 * f.degree() + 1) as usize;
    let total = side.checked_pow(n as u32).filter(|t| *t <= 50_000_000).ok_or_else(|| invalid("polynomial too large for the Parseval grid"))?;
    let mut sum = 0.0;
    let mut x = vec![0.0; n];
    for idx in 0..total {
        let mut rem = idx;
        for slot in x.iter_mut().rev() {
            *slot = (rem % side) as f64 / side as f64;
            rem /= side;
        }
        sum += f.evaluate(&x)?.norm_sqr();
    }
    let grid = sum / total as f64;
    let exact = f.norm_sq_torus();
    Ok((grid - exact).abs() / exact.max(f64::MIN_POSITIVE))
}

/// Parseval on random polynomials; the statistic is the relative residual
/// divided by [`PARSEVAL_TOL`].
pub fn parseval_suite(dim: usize, samples: usize, seed: u64) -> Result<SuiteSummary> {
    if dim == 0 || dim > 3 {
        return Err(invalid(format!("parseval suite supports dim 1..=3, got {dim}")));
    }
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|i| {
            let f = random_pd_poly(sample_seed(seed, i), dim, sample_degree(dim, i), sample_decay(i));
            let r = parseval_residual(&f)?;
            Ok(Outcome {
                stat: r / PARSEVAL_TOL,
                passed: r <= PARSEVAL_TOL,
                detail: format!("relative Parseval residual {r:e}"),
                function: f.to_text(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize("parseval", outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let d = Domain::cube(1, 0.25).unwrap();
        assert!(hlawka_suite(&d, 200, 1).unwrap().all_passed());
        assert!(realline_suite(20, 6, None, 1).unwrap().all_passed());
        assert!(parseval_suite(2, 20, 1).unwrap().all_passed());
    }

    #[test]
    fn too_few_cells_is_an_error() {
        assert!(realline_suite(20, 1, Some(0.3), 1).is_err());
    }
}
