//! Gauss–Legendre rules and a small adaptive integrator.

use gauss_quad::GaussLegendre;
use std::sync::OnceLock;

/// Order of the base rule used by [`adaptive`].
pub const BASE_ORDER: usize = 20;

/// Maximum bisection depth of [`adaptive`].
pub const MAX_DEPTH: u32 = 18;

/// Nodes and weights of an `order`-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn new(order: usize) -> Self {
        let gl = GaussLegendre::new(order.try_into().expect("order must be >= 2"));
        let (nodes, weights) = gl.into_iter().unzip();
        Rule { nodes, weights }
    }

    /// Applies the rule on `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Composite rule over `panels` equal subintervals of `[a, b]`.
    pub fn composite<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, panels: usize, mut f: F) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|p| {
                let lo = a + p as f64 * h;
                self.integrate(lo, lo + h, &mut f)
            })
            .sum()
    }
}

pub(crate) fn base_rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| Rule::new(BASE_ORDER))
}

/// Adaptive bisection with a Gauss–Legendre base rule.
///
/// The rule on an interval is accepted when it agrees with the sum over the
/// two halves to within the interval's share of `rel_tol * |I|`, where `I` is
/// the first two-level estimate of the integral. The recursion stops at
/// [`MAX_DEPTH`] regardless of convergence.
pub fn adaptive<F: FnMut(f64) -> f64>(a: f64, b: f64, rel_tol: f64, mut f: F) -> f64 {
    let rule = base_rule();
    let mid = 0.5 * (a + b);
    let whole = rule.integrate(a, b, &mut f);
    let left = rule.integrate(a, mid, &mut f);
    let right = rule.integrate(mid, b, &mut f);
    let refined = left + right;
    let scale = refined.abs().max(whole.abs());
    let tol = (rel_tol * scale).max(f64::MIN_POSITIVE);
    if (refined - whole).abs() <= tol {
        return refined;
    }
    recurse(rule, a, mid, left, 0.5 * tol, 1, &mut f) + recurse(rule, mid, b, right, 0.5 * tol, 1, &mut f)
}

fn recurse<F: FnMut(f64) -> f64>(rule: &Rule, a: f64, b: f64, whole: f64, tol: f64, depth: u32, f: &mut F) -> f64 {
    let mid = 0.5 * (a + b);
    let left = rule.integrate(a, mid, &mut *f);
    let right = rule.integrate(mid, b, &mut *f);
    let refined = left + right;
    if depth >= MAX_DEPTH || (refined - whole).abs() <= tol {
        return refined;
    }
    recurse(rule, a, mid, left, 0.5 * tol, depth + 1, f) + recurse(rule, mid, b, right, 0.5 * tol, depth + 1, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        let r = Rule::new(5);
        let v = r.integrate(-1.0, 2.0, |x| x.powi(9) - 3.0 * x.powi(4));
        let exact = (2f64.powi(10) - 1.0) / 10.0 - 3.0 * (32.0 + 1.0) / 5.0;
        assert!((v - exact).abs() < 1e-11);
    }

    #[test]
    fn adaptive_handles_oscillation() {
        let v = adaptive(0.0, 1.0, 1e-12, |x| (200.0 * x).cos());
        assert!((v - (200f64).sin() / 200.0).abs() < 1e-13);
    }

    #[test]
    fn adaptive_sqrt_endpoint() {
        let v = adaptive(0.0, 1.0, 1e-10, f64::sqrt);
        assert!((v - 2.0 / 3.0).abs() < 1e-9);
    }
}
