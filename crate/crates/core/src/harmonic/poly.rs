use crate::error::{invalid, Error, Result};
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt::Write as _;

/// A frequency vector `ν ∈ ℤⁿ`.
pub type Freq = Vec<i64>;

/// A trigonometric polynomial `f(x) = Σ f̂_ν e(ν·x)` on `𝕋ⁿ`, `e(t) = e^{2πit}`.
///
/// Coefficients live in a sparse map; zero coefficients are never stored.
/// Two marks can be attached:
/// * real-valued: `f̂_{−ν} = conj(f̂_ν)` for every stored `ν`;
/// * positive definite: every coefficient is real and nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    dim: usize,
    coeffs: BTreeMap<Freq, Complex64>,
    real_valued: bool,
    positive_definite: bool,
}

impl TrigPolynomial {
    pub fn zero(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        TrigPolynomial { dim, coeffs: BTreeMap::new(), real_valued: true, positive_definite: true }
    }

    pub fn constant(dim: usize, value: f64) -> Self {
        let mut p = Self::zero(dim);
        p.insert_raw(vec![0; dim], Complex64::new(value, 0.0));
        p.positive_definite = value >= 0.0;
        p
    }

    /// Builds a polynomial from `(ν, f̂_ν)` pairs. Repeated frequencies are
    /// summed. Marks are inferred from the data.
    pub fn from_coeffs<I>(dim: usize, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Freq, Complex64)>,
    {
        if dim == 0 {
            return Err(invalid("dimension must be positive"));
        }
        let mut map: BTreeMap<Freq, Complex64> = BTreeMap::new();
        for (nu, c) in coeffs {
            if nu.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: nu.len() });
            }
            *map.entry(nu).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| c.norm_sqr() != 0.0);
        let mut p = TrigPolynomial { dim, coeffs: map, real_valued: false, positive_definite: false };
        p.real_valued = p.check_hermitian();
        p.positive_definite = p.check_nonnegative();
        Ok(p)
    }

    /// Real coefficients `(ν, f̂_ν)`.
    pub fn from_real_coeffs<I>(dim: usize, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Freq, f64)>,
    {
        Self::from_coeffs(dim, coeffs.into_iter().map(|(nu, c)| (nu, Complex64::new(c, 0.0))))
    }

    /// Trusted constructor for coefficient maps produced inside the crate.
    pub(crate) fn from_map_unchecked(
        dim: usize,
        mut coeffs: BTreeMap<Freq, Complex64>,
        real_valued: bool,
        positive_definite: bool,
    ) -> Self {
        coeffs.retain(|_, c| c.norm_sqr() != 0.0);
        TrigPolynomial { dim, coeffs, real_valued, positive_definite }
    }

    fn insert_raw(&mut self, nu: Freq, c: Complex64) {
        if c.norm_sqr() != 0.0 {
            self.coeffs.insert(nu, c);
        }
    }

    fn check_hermitian(&self) -> bool {
        self.coeffs.iter().all(|(nu, c)| {
            let neg: Freq = nu.iter().map(|v| -v).collect();
            self.coeffs.get(&neg).is_some_and(|d| *d == c.conj())
        })
    }

    fn check_nonnegative(&self) -> bool {
        self.coeffs.values().all(|c| c.im == 0.0 && c.re >= 0.0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_real_valued(&self) -> bool {
        self.real_valued
    }

    pub fn is_positive_definite(&self) -> bool {
        self.positive_definite
    }

    /// `f̂_ν`; zero when `ν` is not stored.
    pub fn coeff(&self, nu: &[i64]) -> Complex64 {
        self.coeffs.get(nu).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Freq, &Complex64)> {
        self.coeffs.iter()
    }

    /// Largest `|ν|_∞` among stored frequencies.
    pub fn degree(&self) -> i64 {
        self.coeffs.keys().flat_map(|nu| nu.iter().map(|v| v.abs())).max().unwrap_or(0)
    }

    /// `f(x)`. The imaginary part is dropped for real-valued polynomials.
    pub fn evaluate(&self, x: &[f64]) -> Result<Complex64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for (nu, c) in &self.coeffs {
            let phase: f64 = nu.iter().zip(x).map(|(v, xi)| *v as f64 * xi).sum();
            sum += c * Complex64::from_polar(1.0, TAU * phase);
        }
        if self.real_valued {
            sum.im = 0.0;
        }
        Ok(sum)
    }

    /// `Σ |f̂_ν|²`, which equals `∫_{𝕋ⁿ} |f|²` by Parseval.
    pub fn norm_sq_torus(&self) -> f64 {
        self.coeffs.values().map(Complex64::norm_sqr).sum()
    }

    /// `Σ |f̂_ν|`, an upper bound for `sup |f|`.
    pub fn coeff_l1(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    /// Pointwise product, i.e. the convolution of coefficient sequences
    /// `(fg)^_ν = Σ_μ f̂_{ν−μ} ĝ_μ`.
    pub fn multiply(&self, other: &TrigPolynomial) -> Result<TrigPolynomial> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let mut out: BTreeMap<Freq, Complex64> = BTreeMap::new();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let nu: Freq = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *out.entry(nu).or_default() += ca * cb;
            }
        }
        Ok(Self::from_map_unchecked(
            self.dim,
            out,
            self.real_valued && other.real_valued,
            self.positive_definite && other.positive_definite,
        ))
    }

    /// Multiplies every coefficient by a real factor. Positive definiteness
    /// survives only for nonnegative factors.
    pub fn scale(&self, factor: f64) -> TrigPolynomial {
        let coeffs = self.coeffs.iter().map(|(k, c)| (k.clone(), c * factor)).collect();
        Self::from_map_unchecked(self.dim, coeffs, self.real_valued, self.positive_definite && factor >= 0.0)
    }

    /// Canonical text form: one line per coefficient, `ν₁ … νₙ  re im`,
    /// sorted lexicographically by frequency.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (nu, c) in &self.coeffs {
            let freq: Vec<String> = nu.iter().map(i64::to_string).collect();
            let _ = writeln!(s, "{}  {:e} {:e}", freq.join(" "), c.re, c.im);
        }
        s
    }

    /// Parses the canonical text form. Blank lines and `#` comments are skipped.
    pub fn from_text(dim: usize, text: &str) -> Result<TrigPolynomial> {
        let mut coeffs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != dim + 2 {
                return Err(invalid(format!(
                    "line {}: expected {} fields, found {}",
                    lineno + 1,
                    dim + 2,
                    parts.len()
                )));
            }
            let bad = |what: &str| invalid(format!("line {}: bad {what}", lineno + 1));
            let nu = parts[..dim]
                .iter()
                .map(|t| t.parse::<i64>().map_err(|_| bad("frequency")))
                .collect::<Result<Freq>>()?;
            let re = parts[dim].parse::<f64>().map_err(|_| bad("real part"))?;
            let im = parts[dim + 1].parse::<f64>().map_err(|_| bad("imaginary part"))?;
            coeffs.push((nu, Complex64::new(re, im)));
        }
        Self::from_coeffs(dim, coeffs)
    }
}

/// Seeded random positive definite polynomial of degree `degree` in `|·|_∞`.
///
/// `f̂_ν = u_ν (1+|ν|)^{−decay}` with `u_ν ~ U[0,1]` drawn for `ν` in the
/// canonical half-space (first nonzero component positive) and mirrored to
/// `−ν`. The result is real-valued and positive definite.
pub fn random_pd_poly(seed: u64, dim: usize, degree: u32, decay: f64) -> TrigPolynomial {
    assert!(dim > 0, "dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = degree as i64;
    let side = (2 * n + 1) as usize;
    let mut map = BTreeMap::new();
    let total = side.pow(dim as u32);
    for idx in 0..total {
        let mut rem = idx;
        let mut nu = vec![0i64; dim];
        for slot in nu.iter_mut().rev() {
            *slot = (rem % side) as i64 - n;
            rem /= side;
        }
        let lead = nu.iter().find(|v| **v != 0).copied();
        if lead.is_some_and(|v| v < 0) {
            continue;
        }
        let u: f64 = rng.random::<f64>();
        let norm = nu.iter().map(|v| (v * v) as f64).sum::<f64>().sqrt();
        let c = u * (1.0 + norm).powf(-decay);
        let neg: Freq = nu.iter().map(|v| -v).collect();
        map.insert(neg, Complex64::new(c, 0.0));
        map.insert(nu, Complex64::new(c, 0.0));
    }
    TrigPolynomial::from_map_unchecked(dim, map, true, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_plus_cos() -> TrigPolynomial {
        TrigPolynomial::from_real_coeffs(1, [(vec![0], 1.0), (vec![1], 0.5), (vec![-1], 0.5)]).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let one = TrigPolynomial::constant(2, 1.0);
        assert_eq!(one.evaluate(&[0.13, -0.4]).unwrap().re, 1.0);
        let f = one_plus_cos();
        assert!(f.is_real_valued() && f.is_positive_definite());
        assert!(f.evaluate(&[0.5]).unwrap().re.abs() < 1e-15);
        assert!((f.evaluate(&[0.25]).unwrap().re - 1.0).abs() < 1e-15);
        assert_eq!(f.evaluate(&[0.1]).unwrap().im, 0.0);
    }

    #[test]
    fn evaluate_dimension_mismatch() {
        let f = one_plus_cos();
        assert!(matches!(f.evaluate(&[0.1, 0.2]), Err(Error::DimensionMismatch { expected: 1, got: 2 })));
    }

    #[test]
    fn parseval_sums() {
        assert_eq!(TrigPolynomial::constant(1, 1.0).norm_sq_torus(), 1.0);
        assert!((one_plus_cos().norm_sq_torus() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn multiply_examples() {
        let g = one_plus_cos();
        let id = TrigPolynomial::constant(1, 1.0);
        assert_eq!(id.multiply(&g).unwrap(), g);
        let c = TrigPolynomial::from_real_coeffs(1, [(vec![1], 0.5), (vec![-1], 0.5)]).unwrap();
        let sq = c.multiply(&c).unwrap();
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coeff(&[2]).re, 0.25);
        assert_eq!(sq.coeff(&[0]).re, 0.5);
        assert_eq!(sq.coeff(&[-2]).re, 0.25);
        assert!(sq.is_positive_definite());
        assert!(c.multiply(&TrigPolynomial::constant(2, 1.0)).is_err());
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = TrigPolynomial::from_real_coeffs(1, [(vec![3], 1.0), (vec![3], -1.0), (vec![0], 2.0)]).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.coeff(&[3]).re, 0.0);
    }

    #[test]
    fn marks_are_inferred() {
        let p = TrigPolynomial::from_coeffs(1, [(vec![1], Complex64::new(0.0, 1.0))]).unwrap();
        assert!(!p.is_real_valued());
        assert!(!p.is_positive_definite());
        let q = TrigPolynomial::from_real_coeffs(1, [(vec![1], -1.0), (vec![-1], -1.0)]).unwrap();
        assert!(q.is_real_valued());
        assert!(!q.is_positive_definite());
    }

    #[test]
    fn text_form_sorted_and_parsed() {
        let f = random_pd_poly(11, 2, 2, 1.0);
        let text = f.to_text();
        let first = text.lines().next().unwrap();
        assert!(first.starts_with("-2 -2  "));
        let back = TrigPolynomial::from_text(2, &text).unwrap();
        assert_eq!(back, f);
        assert!(TrigPolynomial::from_text(2, "1 2 3\n").is_err());
    }

    #[test]
    fn random_poly_deterministic_and_symmetric() {
        let a = random_pd_poly(42, 2, 3, 1.5);
        let b = random_pd_poly(42, 2, 3, 1.5);
        assert_eq!(a, b);
        assert_ne!(a, random_pd_poly(43, 2, 3, 1.5));
        assert!(a.is_positive_definite() && a.is_real_valued());
        for (nu, c) in a.iter() {
            let neg: Vec<i64> = nu.iter().map(|v| -v).collect();
            assert_eq!(a.coeff(&neg), *c);
            assert!(c.re >= 0.0 && c.im == 0.0);
        }
        assert_eq!(a.degree(), 3);
    }
}
