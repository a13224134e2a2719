//! Independent numerical oracles for closed forms used by the solvers.

use pdw_core::delsarte::{delsarte_lp, RadialSchwartzFunction};
use pdw_core::harmonic::{norm_sq_domain, random_pd_poly, Domain, TrigPolynomial};
use pdw_core::quadrature::Rule;
use pdw_core::special::{bessel_first_zero, bessel_j};
use pdw_core::turan::turan_lp_lower;
use std::f64::consts::PI;

/// Composite Gauss–Legendre nodes and weights on `[a, b]`, built directly
/// from `gauss-quad` rather than the crate's own rule.
fn composite_nodes(a: f64, b: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let gl = gauss_quad::GaussLegendre::new(order.try_into().unwrap());
    let h = (b - a) / panels as f64;
    (0..panels)
        .flat_map(|p| {
            let mid = a + (p as f64 + 0.5) * h;
            gl.iter().map(move |(x, w)| (mid + 0.5 * h * x, 0.5 * h * w)).collect::<Vec<_>>()
        })
        .collect()
}

/// Radial Fourier transform by direct quadrature on `[0, 8]`:
/// `f̂(ρ) = 2π ρ^{1−n/2} ∫ f(r) J_{n/2−1}(2πρr) r^{n/2} dr`, or the cosine
/// transform when `n = 1`.
#[test]
fn laguerre_gaussian_basis_is_self_dual() {
    let nodes = composite_nodes(0.0, 8.0, 400, 10);
    let radii: Vec<f64> = (1..=20).map(|i| 0.15 * i as f64).collect();
    for n in 1..=4usize {
        let half = n as f64 / 2.0;
        let kernel: Vec<Vec<f64>> = radii
            .iter()
            .map(|&rho| {
                nodes
                    .iter()
                    .map(|&(r, w)| {
                        if n == 1 {
                            2.0 * w * (2.0 * PI * rho * r).cos()
                        } else {
                            2.0 * PI * rho.powf(1.0 - half) * w * bessel_j(half - 1.0, 2.0 * PI * rho * r) * r.powf(half)
                        }
                    })
                    .collect()
            })
            .collect();
        for k in 0..=10usize {
            let mut c = vec![0.0; k + 1];
            c[k] = 1.0;
            let f = RadialSchwartzFunction::new(n, 1.0, c).unwrap();
            let values: Vec<f64> = nodes.iter().map(|&(r, _)| f.eval(r)).collect();
            for (rho, row) in radii.iter().zip(&kernel) {
                let numeric: f64 = row.iter().zip(&values).map(|(a, b)| a * b).sum();
                let expected = f.fourier(*rho);
                assert!(
                    (numeric - expected).abs() <= 1e-6,
                    "n = {n}, k = {k}, rho = {rho}: quadrature {numeric} vs closed form {expected}"
                );
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                assert!((expected - sign * f.eval(*rho)).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn parseval_on_grid() {
    for seed in 0..20u64 {
        let dim = 1 + (seed % 2) as usize;
        let f = random_pd_poly(seed, dim, 4, 0.5);
        let side = 2 * f.degree() as usize + 1;
        let total = side.pow(dim as u32);
        let mut acc = 0.0;
        for idx in 0..total {
            let x: Vec<f64> = (0..dim).map(|a| ((idx / side.pow(a as u32)) % side) as f64 / side as f64).collect();
            acc += f.evaluate(&x).unwrap().norm_sqr();
        }
        let grid = acc / total as f64;
        assert!((grid - f.norm_sq_torus()).abs() <= 1e-12 * grid, "seed {seed}");
    }
}

#[test]
fn box_norm_of_single_cosine() {
    // ∫_{-δ}^{δ} (1 + cos 2πx)² dx = 3δ + 2 sin(2πδ)/π + sin(4πδ)/(4π).
    let f = TrigPolynomial::from_real_coeffs(1, [(vec![0], 1.0), (vec![1], 0.5), (vec![-1], 0.5)]).unwrap();
    for delta in [0.05, 0.2, 0.37, 0.49] {
        let exact = 3.0 * delta + 2.0 * (2.0 * PI * delta).sin() / PI + (4.0 * PI * delta).sin() / (4.0 * PI);
        let got = norm_sq_domain(&f, &Domain::interval(delta).unwrap()).unwrap();
        assert!((got - exact).abs() < 1e-14, "delta {delta}");
    }
}

#[test]
fn bessel_zero_bisection_oracle() {
    // Independent bisection on J_1 using the integral representation
    // J_1(x) = (1/π) ∫₀^π cos(θ − x sin θ) dθ.
    let rule = Rule::new(40);
    let j1 = |x: f64| rule.composite(0.0, PI, 8, |t| (t - x * t.sin()).cos()) / PI;
    let (mut a, mut b) = (3.0, 4.5);
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        if j1(a) * j1(m) <= 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    let z = bessel_first_zero(1.0).unwrap().value;
    assert!((z - 0.5 * (a + b)).abs() < 1e-9, "{z}");
    assert!((bessel_first_zero(0.5).unwrap().value - PI).abs() < 1e-10);
}

#[test]
fn turan_exact_reciprocals() {
    for q in 2..=5u32 {
        let e = turan_lp_lower(1.0 / q as f64, 32, 256).unwrap();
        assert!(e.certified);
        assert!((e.lower - 1.0 / q as f64).abs() < 1e-6, "q = {q}: {}", e.lower);
    }
}

#[test]
fn delsarte_monotone_in_basis_size() {
    for n in [1usize, 2, 3] {
        let mut prev = f64::INFINITY;
        for k in [8usize, 12, 16, 20] {
            let b = delsarte_lp(n, 2.0, k, 1000).unwrap();
            assert!(b.certified);
            assert!(b.value <= prev + 1e-9, "n = {n}, K = {k}: {} after {prev}", b.value);
            prev = b.value;
        }
    }
}

#[test]
fn delsarte_near_known_packing_bounds() {
    // |Bⁿ|·A(2Bⁿ) approaches the linear programming density bounds:
    // 1 on the line, about 0.9069 (hexagonal) in the plane.
    let one = delsarte_lp(1, 2.0, 20, 1000).unwrap();
    assert!((2.0 * one.value - 1.0).abs() < 1e-5);
    let two = delsarte_lp(2, 2.0, 30, 1000).unwrap();
    let density = PI * two.value;
    assert!(density > 0.9068 && density < 0.91, "{density}");
}
