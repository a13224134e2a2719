//! Dense two-phase tableau simplex.
//!
//! Pricing is Dantzig's rule with a fallback to Bland's rule on degenerate
//! stretches. Every choice is index-ordered, so solves are deterministic.
//! Programs with few variables and many inequality rows go through
//! [`maximize_inequality_form`], which solves the much narrower dual.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// Lower bound of a structural variable; `None` means free.
pub type LowerBound = Option<f64>;

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    sense: Sense,
    objective: Vec<f64>,
    lower: Vec<LowerBound>,
    constraints: Vec<Constraint>,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// One multiplier per constraint with `c_j = Σ_i y_i a_ij` on every
    /// basic structural column and `objective = Σ_i y_i b_i`.
    pub duals: Vec<f64>,
    pub pivots: usize,
}

/// Pivot and feasibility tolerance.
pub const TOL: f64 = 1e-9;

const BLAND_AFTER: usize = 50;
const PIVOT_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-11;
const MAX_PIVOTS: usize = 200_000;

impl LinearProgram {
    /// All variables default to `x >= 0`.
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram { sense, objective, lower: vec![Some(0.0); n], constraints: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn set_lower(&mut self, var: usize, bound: LowerBound) {
        self.lower[var] = bound;
    }

    pub fn set_free(&mut self, var: usize) {
        self.lower[var] = None;
    }

    pub fn add(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        assert_eq!(coeffs.len(), self.num_vars(), "constraint width must match variable count");
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn solve(&self) -> Result<Solution> {
        // Column map: structural var -> (positive column, optional negative column).
        let n = self.num_vars();
        let mut columns: Vec<(usize, Option<usize>)> = Vec::with_capacity(n);
        let mut ncols = 0;
        for lb in &self.lower {
            match lb {
                Some(_) => {
                    columns.push((ncols, None));
                    ncols += 1;
                }
                None => {
                    columns.push((ncols, Some(ncols + 1)));
                    ncols += 2;
                }
            }
        }
        let shift: Vec<f64> = self.lower.iter().map(|l| l.unwrap_or(0.0)).collect();

        // Rows in terms of the shifted, split variables with b >= 0.
        let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::with_capacity(self.constraints.len());
        // (original index, sign flip times 1/scale) for every kept row.
        let mut origin: Vec<(usize, f64)> = Vec::with_capacity(self.constraints.len());
        for (ci, c) in self.constraints.iter().enumerate() {
            let mut a = vec![0.0; ncols];
            let mut rhs = c.rhs;
            for (j, &v) in c.coeffs.iter().enumerate() {
                let (p, m) = columns[j];
                a[p] = v;
                if let Some(m) = m {
                    a[m] = -v;
                }
                rhs -= v * shift[j];
            }
            let scale = a.iter().fold(0.0f64, |s, v| s.max(v.abs()));
            if scale == 0.0 {
                let ok = match c.relation {
                    Relation::Le => rhs >= -TOL,
                    Relation::Ge => rhs <= TOL,
                    Relation::Eq => rhs.abs() <= TOL,
                };
                if ok {
                    continue;
                }
                return Err(Error::Infeasible);
            }
            a.iter_mut().for_each(|v| *v /= scale);
            rhs /= scale;
            let mut rel = c.relation;
            let mut factor = 1.0 / scale;
            if rhs < 0.0 {
                factor = -factor;
                a.iter_mut().for_each(|v| *v = -*v);
                rhs = -rhs;
                rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            rows.push((a, rel, rhs));
            origin.push((ci, factor));
        }

        let mut cost = vec![0.0; ncols];
        let sign = if self.sense == Sense::Maximize { 1.0 } else { -1.0 };
        for (j, &c) in self.objective.iter().enumerate() {
            let (p, m) = columns[j];
            cost[p] = sign * c;
            if let Some(m) = m {
                cost[m] = -sign * c;
            }
        }

        let mut tab = Tableau::build(ncols, &rows);
        tab.phase_one()?;
        tab.phase_two(&cost)?;

        let values = tab.primal(ncols);
        let x: Vec<f64> = columns
            .iter()
            .zip(&shift)
            .map(|(&(p, m), s)| values[p] - m.map_or(0.0, |m| values[m]) + s)
            .collect();
        let objective = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        let mut full = cost.clone();
        full.resize(tab.width, 0.0);
        let mut duals = vec![0.0; self.constraints.len()];
        for (t, &(ci, factor)) in origin.iter().enumerate() {
            duals[ci] = sign * factor * tab.multiplier(&full, tab.identity_col[t]);
        }
        Ok(Solution { x, objective, duals, pivots: tab.pivots })
    }
}

/// Solution of `max c·x` subject to `A x ≤ b` with `x` free.
#[derive(Debug, Clone)]
pub struct InequalitySolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Multipliers `y ≥ 0` of the rows, with `Aᵀy = c`.
    pub multipliers: Vec<f64>,
    pub pivots: usize,
}

/// Solves `max c·x, A x ≤ b, x free` through its dual `min b·y, Aᵀy = c, y ≥ 0`.
///
/// The dual tableau has one row per variable, so programs with thousands of
/// sampled constraints stay cheap. `x` is read off the dual multipliers.
/// An unbounded primal shows up as an infeasible dual.
pub fn maximize_inequality_form(c: &[f64], rows: &[Vec<f64>], rhs: &[f64]) -> Result<InequalitySolution> {
    let n = c.len();
    let m = rows.len();
    if rhs.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: rhs.len() });
    }
    // Unit-scale every primal row; this rescales dual columns only.
    let mut scales = Vec::with_capacity(m);
    for r in rows {
        if r.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: r.len() });
        }
        let s = r.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        scales.push(if s > 0.0 { s } else { 1.0 });
    }
    let objective: Vec<f64> = rhs.iter().zip(&scales).map(|(b, s)| b / s).collect();
    let mut dual = LinearProgram::new(Sense::Minimize, objective);
    for i in 0..n {
        let coeffs: Vec<f64> = rows.iter().zip(&scales).map(|(r, s)| r[i] / s).collect();
        dual.add(coeffs, Relation::Eq, c[i]);
    }
    let sol = dual.solve().map_err(|e| match e {
        Error::Infeasible => Error::Unbounded,
        Error::Unbounded => Error::Infeasible,
        other => other,
    })?;
    let x = sol.duals;
    let objective = c.iter().zip(&x).map(|(a, b)| a * b).sum();
    let multipliers = sol.x.iter().zip(&scales).map(|(y, s)| y / s).collect();
    Ok(InequalitySolution { x, objective, multipliers, pivots: sol.pivots })
}

struct Tableau {
    /// Row-major `m × (width + 1)`; the last column is the right-hand side.
    a: Vec<f64>,
    m: usize,
    width: usize,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    /// Column that held the identity entry of each original row.
    identity_col: Vec<usize>,
    /// First artificial column; artificials occupy `artificial_start..width`.
    artificial_start: usize,
    pivots: usize,
}

impl Tableau {
    fn build(ncols: usize, rows: &[(Vec<f64>, Relation, f64)]) -> Self {
        let m = rows.len();
        let slacks = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let artificials = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let artificial_start = ncols + slacks;
        let width = artificial_start + artificials;
        let stride = width + 1;
        let mut a = vec![0.0; m * stride];
        let mut basis = vec![0; m];
        let mut identity_col = vec![0; m];
        let (mut s, mut art) = (ncols, artificial_start);
        for (i, (coeffs, rel, rhs)) in rows.iter().enumerate() {
            let row = &mut a[i * stride..(i + 1) * stride];
            row[..ncols].copy_from_slice(coeffs);
            row[width] = *rhs;
            match rel {
                Relation::Le => {
                    row[s] = 1.0;
                    basis[i] = s;
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = -1.0;
                    s += 1;
                    row[art] = 1.0;
                    basis[i] = art;
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = 1.0;
                    basis[i] = art;
                    art += 1;
                }
            }
        }
        let mut in_basis = vec![false; width];
        basis.iter().for_each(|&b| in_basis[b] = true);
        identity_col.copy_from_slice(&basis);
        Tableau { a, m, width, basis, in_basis, identity_col, artificial_start, pivots: 0 }
    }

    fn stride(&self) -> usize {
        self.width + 1
    }

    fn rhs(&self, i: usize) -> f64 {
        self.a[i * self.stride() + self.width]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let stride = self.stride();
        let p = self.a[row * stride + col];
        for v in &mut self.a[row * stride..(row + 1) * stride] {
            *v /= p;
        }
        let pivot_row: Vec<f64> = self.a[row * stride..(row + 1) * stride].to_vec();
        for i in 0..self.m {
            if i == row {
                continue;
            }
            let factor = self.a[i * stride + col];
            if factor == 0.0 {
                continue;
            }
            let target = &mut self.a[i * stride..(i + 1) * stride];
            for (t, pv) in target.iter_mut().zip(&pivot_row) {
                *t -= factor * pv;
            }
            target[col] = 0.0;
        }
        for i in 0..self.m {
            let r = &mut self.a[i * stride + self.width];
            if *r < 0.0 && *r > -FEAS_TOL * 10.0 {
                *r = 0.0;
            }
        }
        self.in_basis[self.basis[row]] = false;
        self.in_basis[col] = true;
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Maximizes `cost · x` over columns `< limit` from the current basis.
    ///
    /// Dantzig pricing; after a run of degenerate pivots switches to Bland's
    /// rule until progress resumes, which rules out cycling.
    fn optimize(&mut self, cost: &[f64], limit: usize) -> Result<()> {
        let stride = self.stride();
        let mut degenerate_run = 0usize;
        let mut reduced = vec![0.0; limit];
        loop {
            if self.pivots > MAX_PIVOTS {
                return Err(Error::IterationLimit(self.pivots));
            }
            // Reduced costs d_j = c_j − c_B · column_j.
            reduced[..limit].copy_from_slice(&cost[..limit]);
            for i in 0..self.m {
                let cb = cost.get(self.basis[i]).copied().unwrap_or(0.0);
                if cb != 0.0 {
                    let row = &self.a[i * stride..i * stride + limit];
                    for (d, v) in reduced.iter_mut().zip(row) {
                        *d -= cb * v;
                    }
                }
            }
            let bland = degenerate_run > BLAND_AFTER;
            let mut entering: Option<(usize, f64)> = None;
            for (j, &d) in reduced.iter().enumerate() {
                if self.in_basis[j] || d <= TOL {
                    continue;
                }
                if bland {
                    entering = Some((j, d));
                    break;
                }
                if entering.is_none_or(|(_, best)| d > best) {
                    entering = Some((j, d));
                }
            }
            let Some((col, _)) = entering else { return Ok(()) };
            // Harris two-pass ratio test: bound the step with a small
            // feasibility slack, then take the largest pivot within it.
            let mut bound = f64::INFINITY;
            for i in 0..self.m {
                let v = self.a[i * stride + col];
                if v > PIVOT_TOL {
                    bound = bound.min((self.rhs(i) + FEAS_TOL) / v);
                }
            }
            let mut leave: Option<(usize, f64, f64)> = None;
            for i in 0..self.m {
                let v = self.a[i * stride + col];
                if v > PIVOT_TOL {
                    let ratio = self.rhs(i) / v;
                    if ratio <= bound {
                        let better = match leave {
                            None => true,
                            Some((r, _, best)) => v > best || (v == best && self.basis[i] < self.basis[r]),
                        };
                        if better {
                            leave = Some((i, ratio.max(0.0), v));
                        }
                    }
                }
            }
            let Some((row, ratio, _)) = leave else { return Err(Error::Unbounded) };
            if ratio <= TOL {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(row, col);
        }
    }

    fn phase_one(&mut self) -> Result<()> {
        if self.artificial_start == self.width {
            return Ok(());
        }
        let mut cost = vec![0.0; self.width];
        cost[self.artificial_start..].iter_mut().for_each(|c| *c = -1.0);
        self.optimize(&cost, self.width)?;
        let infeasibility: f64 = (0..self.m).filter(|&i| self.basis[i] >= self.artificial_start).map(|i| self.rhs(i)).sum();
        if infeasibility > 1e-7 {
            return Err(Error::Infeasible);
        }
        // Drive remaining (zero-level) artificials out of the basis.
        let stride = self.stride();
        let mut i = 0;
        while i < self.m {
            if self.basis[i] >= self.artificial_start {
                let col = (0..self.artificial_start).find(|&j| self.a[i * stride + j].abs() > TOL && !self.in_basis[j]);
                match col {
                    Some(j) => self.pivot(i, j),
                    None => {
                        // Redundant row.
                        self.a.drain(i * stride..(i + 1) * stride);
                        let gone = self.basis.remove(i);
                        self.in_basis[gone] = false;
                        self.m -= 1;
                        continue;
                    }
                }
            }
            i += 1;
        }
        Ok(())
    }

    fn phase_two(&mut self, cost: &[f64]) -> Result<()> {
        let mut full = cost.to_vec();
        full.resize(self.width, 0.0);
        self.optimize(&full, self.artificial_start)
    }

    /// `(c_B B⁻¹)_i`, read off the column that started as `e_i`.
    fn multiplier(&self, cost: &[f64], col: usize) -> f64 {
        let stride = self.stride();
        (0..self.m).map(|r| cost[self.basis[r]] * self.a[r * stride + col]).sum()
    }

    fn primal(&self, ncols: usize) -> Vec<f64> {
        let mut x = vec![0.0; ncols];
        for i in 0..self.m {
            if self.basis[i] < ncols {
                x[self.basis[i]] = self.rhs(i);
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 → (2, 6), 36
        let mut lp = LinearProgram::new(Sense::Maximize, vec![3.0, 5.0]);
        lp.add(vec![1.0, 0.0], Relation::Le, 4.0);
        lp.add(vec![0.0, 2.0], Relation::Le, 12.0);
        lp.add(vec![3.0, 2.0], Relation::Le, 18.0);
        let s = lp.solve().unwrap();
        assert!((s.objective - 36.0).abs() < 1e-9);
        assert!((s.x[0] - 2.0).abs() < 1e-9 && (s.x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn phase_one_with_equalities_and_free_vars() {
        // min x + y, x − y = 1, x + y >= 3, y free → x = 2, y = 1
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0, 1.0]);
        lp.set_free(1);
        lp.add(vec![1.0, -1.0], Relation::Eq, 1.0);
        lp.add(vec![1.0, 1.0], Relation::Ge, 3.0);
        let s = lp.solve().unwrap();
        assert!((s.objective - 3.0).abs() < 1e-9);
        // free variable going negative
        let mut lp = LinearProgram::new(Sense::Minimize, vec![0.0, 1.0]);
        lp.set_free(1);
        lp.add(vec![1.0, 1.0], Relation::Ge, -2.0);
        lp.add(vec![1.0, 0.0], Relation::Le, 1.0);
        let s = lp.solve().unwrap();
        assert!((s.x[1] + 3.0).abs() < 1e-9);
    }

    #[test]
    fn duals_satisfy_strong_duality() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![3.0, 5.0]);
        lp.add(vec![1.0, 0.0], Relation::Le, 4.0);
        lp.add(vec![0.0, 2.0], Relation::Le, 12.0);
        lp.add(vec![3.0, 2.0], Relation::Le, 18.0);
        let s = lp.solve().unwrap();
        let expected = [0.0, 1.5, 1.0];
        for (y, e) in s.duals.iter().zip(expected) {
            assert!((y - e).abs() < 1e-9, "{:?}", s.duals);
        }
        // Minimization with ≥, = rows and a free variable.
        let mut lp = LinearProgram::new(Sense::Minimize, vec![2.0, 1.0, 0.0]);
        lp.set_free(2);
        lp.add(vec![1.0, 1.0, 0.0], Relation::Ge, 2.0);
        lp.add(vec![1.0, 0.0, 1.0], Relation::Eq, -1.0);
        lp.add(vec![0.0, 1.0, 0.0], Relation::Le, 1.5);
        let s = lp.solve().unwrap();
        let rhs = [2.0, -1.0, 1.5];
        let dual_obj: f64 = s.duals.iter().zip(rhs).map(|(y, b)| y * b).sum();
        assert!((dual_obj - s.objective).abs() < 1e-9, "{} vs {}", dual_obj, s.objective);
    }

    #[test]
    fn inequality_form_via_dual() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18, x, y ≥ 0.
        let rows = vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0], vec![-1.0, 0.0], vec![0.0, -1.0]];
        let rhs = [4.0, 12.0, 18.0, 0.0, 0.0];
        let s = maximize_inequality_form(&[3.0, 5.0], &rows, &rhs).unwrap();
        assert!((s.objective - 36.0).abs() < 1e-9);
        assert!((s.x[0] - 2.0).abs() < 1e-9 && (s.x[1] - 6.0).abs() < 1e-9, "{:?}", s.x);
        for (r, b) in rows.iter().zip(rhs) {
            assert!(r[0] * s.x[0] + r[1] * s.x[1] <= b + 1e-9);
        }
        // No bound on y: unbounded.
        let rows = vec![vec![1.0, 0.0], vec![-1.0, 0.0]];
        assert!(matches!(maximize_inequality_form(&[1.0, 1.0], &rows, &[1.0, 1.0]), Err(Error::Unbounded)));
    }

    #[test]
    fn shifted_lower_bounds() {
        // max x, x >= -1, x <= -0.25
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        lp.set_lower(0, Some(-1.0));
        lp.add(vec![1.0], Relation::Le, -0.25);
        let s = lp.solve().unwrap();
        assert!((s.x[0] + 0.25).abs() < 1e-12);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        lp.add(vec![1.0], Relation::Le, 1.0);
        lp.add(vec![1.0], Relation::Ge, 2.0);
        assert_eq!(lp.solve().unwrap_err(), Error::Infeasible);
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 0.0]);
        lp.add(vec![-1.0, 1.0], Relation::Le, 1.0);
        assert_eq!(lp.solve().unwrap_err(), Error::Unbounded);
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example cycles under the largest-coefficient rule.
        let mut lp = LinearProgram::new(Sense::Maximize, vec![0.75, -150.0, 0.02, -6.0]);
        lp.add(vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0);
        lp.add(vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0);
        lp.add(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0);
        let s = lp.solve().unwrap();
        assert!((s.objective - 0.05).abs() < 1e-9);
    }
}
