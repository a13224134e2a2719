use crate::error::{invalid, Error, Result};
use crate::special::ln_gamma;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Volume of the Euclidean ball of radius `r` in `n` dimensions.
pub fn ball_volume(n: usize, r: f64) -> f64 {
    if n > 64 {
        let nf = n as f64;
        return (0.5 * nf * PI.ln() - ln_gamma(0.5 * nf + 1.0) + nf * r.ln()).exp();
    }
    // V_n = 2π V_{n−2} / n with V_0 = 1, V_1 = 2.
    let mut v = if n.is_multiple_of(2) { 1.0 } else { 2.0 };
    let mut k = if n.is_multiple_of(2) { 2 } else { 3 };
    while k <= n {
        v *= 2.0 * PI / k as f64;
        k += 2;
    }
    v * r.powi(n as i32)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Shape {
    Cube { halfwidth: f64 },
    Ball { radius: f64 },
    Product { factors: Vec<Domain> },
}

/// An origin-symmetric convex body: a cube `δIⁿ`, a ball `δBⁿ`, or a
/// Cartesian product of such bodies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    dim: usize,
    shape: Shape,
}

impl Domain {
    pub fn cube(dim: usize, halfwidth: f64) -> Result<Self> {
        check_dim(dim)?;
        check_size(halfwidth, "cube halfwidth")?;
        Ok(Domain { dim, shape: Shape::Cube { halfwidth } })
    }

    pub fn interval(halfwidth: f64) -> Result<Self> {
        Self::cube(1, halfwidth)
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        check_dim(dim)?;
        check_size(radius, "ball radius")?;
        Ok(Domain { dim, shape: Shape::Ball { radius } })
    }

    pub fn product(factors: Vec<Domain>) -> Result<Self> {
        if factors.is_empty() {
            return Err(invalid("product domain needs at least one factor"));
        }
        let dim = factors.iter().map(Domain::dim).sum();
        Ok(Domain { dim, shape: Shape::Product { factors } })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn volume(&self) -> f64 {
        match &self.shape {
            Shape::Cube { halfwidth } => (2.0 * halfwidth).powi(self.dim as i32),
            Shape::Ball { radius } => ball_volume(self.dim, *radius),
            Shape::Product { factors } => factors.iter().map(Domain::volume).product(),
        }
    }

    /// The dilate `λD`.
    pub fn scaled(&self, lambda: f64) -> Domain {
        let shape = match &self.shape {
            Shape::Cube { halfwidth } => Shape::Cube { halfwidth: halfwidth * lambda },
            Shape::Ball { radius } => Shape::Ball { radius: radius * lambda },
            Shape::Product { factors } => Shape::Product {
                factors: factors.iter().map(|f| f.scaled(lambda)).collect(),
            },
        };
        Domain { dim: self.dim, shape }
    }

    /// `½D`.
    pub fn half(&self) -> Domain {
        self.scaled(0.5)
    }

    /// Smallest `δ` with `D ⊂ δIⁿ`.
    pub fn enclosing_halfwidth(&self) -> f64 {
        match &self.shape {
            Shape::Cube { halfwidth } => *halfwidth,
            Shape::Ball { radius } => *radius,
            Shape::Product { factors } => factors.iter().map(Domain::enclosing_halfwidth).fold(0.0, f64::max),
        }
    }

    /// Largest `r` with `rBⁿ ⊂ D`.
    pub fn inradius(&self) -> f64 {
        match &self.shape {
            Shape::Cube { halfwidth } => *halfwidth,
            Shape::Ball { radius } => *radius,
            Shape::Product { factors } => factors.iter().map(Domain::inradius).fold(f64::INFINITY, f64::min),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match &self.shape {
            Shape::Cube { halfwidth } => x.iter().all(|v| v.abs() <= *halfwidth),
            Shape::Ball { radius } => x.iter().map(|v| v * v).sum::<f64>() <= radius * radius,
            Shape::Product { factors } => {
                let mut offset = 0;
                factors.iter().all(|f| {
                    let part = &x[offset..offset + f.dim];
                    offset += f.dim;
                    f.contains(part)
                })
            }
        }
    }

    /// True when every factor is a cube, so the domain is an axis-aligned box.
    pub fn is_box(&self) -> bool {
        match &self.shape {
            Shape::Cube { .. } => true,
            Shape::Ball { .. } => self.dim == 1,
            Shape::Product { factors } => factors.iter().all(Domain::is_box),
        }
    }

    /// Per-axis halfwidths when [`Domain::is_box`] holds.
    pub fn box_halfwidths(&self) -> Option<Vec<f64>> {
        if !self.is_box() {
            return None;
        }
        let mut out = Vec::with_capacity(self.dim);
        self.push_halfwidths(&mut out);
        Some(out)
    }

    fn push_halfwidths(&self, out: &mut Vec<f64>) {
        match &self.shape {
            Shape::Cube { halfwidth } => out.extend(std::iter::repeat_n(*halfwidth, self.dim)),
            Shape::Ball { radius } => out.push(*radius),
            Shape::Product { factors } => factors.iter().for_each(|f| f.push_halfwidths(out)),
        }
    }

    /// Checks that `D` lies strictly inside the fundamental cell `[-1/2, 1/2)ⁿ`.
    pub fn check_in_cell(&self) -> Result<()> {
        let h = self.enclosing_halfwidth();
        if h < 0.5 {
            Ok(())
        } else {
            Err(Error::DomainExceedsCell(format!("{} with halfwidth {h} >= 1/2", self.label())))
        }
    }

    /// Short shape name used in reports: `cube`, `ball` or `product`.
    pub fn label(&self) -> &'static str {
        match &self.shape {
            Shape::Cube { .. } => "cube",
            Shape::Ball { .. } => "ball",
            Shape::Product { .. } => "product",
        }
    }

    /// Flattened factor list; cubes of dimension > 1 are split into intervals.
    pub(crate) fn axis_factors(&self) -> Vec<AxisFactor> {
        let mut out = Vec::new();
        self.push_axis_factors(&mut out);
        out
    }

    fn push_axis_factors(&self, out: &mut Vec<AxisFactor>) {
        match &self.shape {
            Shape::Cube { halfwidth } => out.extend(std::iter::repeat_n(AxisFactor::Interval(*halfwidth), self.dim)),
            Shape::Ball { radius } => out.push(AxisFactor::Ball { dim: self.dim, radius: *radius }),
            Shape::Product { factors } => factors.iter().for_each(|f| f.push_axis_factors(out)),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum AxisFactor {
    Interval(f64),
    Ball { dim: usize, radius: f64 },
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(invalid("dimension must be positive"))
    } else {
        Ok(())
    }
}

fn check_size(v: f64, what: &str) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{what} must be positive and finite, got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volumes() {
        assert!((Domain::cube(3, 0.25).unwrap().volume() - 0.125).abs() < 1e-15);
        assert!((Domain::ball(2, 0.4).unwrap().volume() - 0.16 * PI).abs() < 1e-14);
        assert!((Domain::ball(3, 1.0).unwrap().volume() - 4.0 * PI / 3.0).abs() < 1e-13);
        assert!((Domain::ball(1, 0.3).unwrap().volume() - 0.6).abs() < 1e-15);
        let p = Domain::product(vec![Domain::interval(0.1).unwrap(), Domain::ball(2, 0.2).unwrap()]).unwrap();
        assert_eq!(p.dim(), 3);
        assert!((p.volume() - 0.2 * 0.04 * PI).abs() < 1e-15);
    }

    #[test]
    fn half_scales_volume() {
        let d = Domain::ball(4, 0.3).unwrap();
        assert!((d.half().volume() * 16.0 - d.volume()).abs() < 1e-14);
    }

    #[test]
    fn cell_check() {
        assert!(Domain::cube(2, 0.49).unwrap().check_in_cell().is_ok());
        assert!(matches!(Domain::ball(2, 0.5).unwrap().check_in_cell(), Err(Error::DomainExceedsCell(_))));
        assert!(Domain::cube(1, 0.0).is_err());
        assert!(Domain::cube(0, 0.1).is_err());
    }

    #[test]
    fn membership() {
        let d = Domain::ball(2, 0.3).unwrap();
        assert!(d.contains(&[0.2, 0.2]));
        assert!(!d.contains(&[0.25, 0.2]));
        let c = Domain::cube(2, 0.3).unwrap();
        assert!(c.contains(&[0.25, 0.2]));
    }
}
