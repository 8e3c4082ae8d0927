//! Exact two-phase simplex with Bland's rule.
//!
//! Everything is reduced to the standard form `max c·x, A x = b, x ≥ 0` and
//! solved on a dense rational tableau. [`maximize`] answers value-only
//! queries through the dual problem, whose tableau has one row per variable
//! instead of one per constraint; that is the cheap path for redundancy tests
//! on tall systems.

use num::{One, Signed, Zero};

use super::halfspace::{Halfspace, Relation};
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    /// Any feasible point; the objective is ignored.
    Feasibility,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        point: Vec<Rational>,
        value: Rational,
    },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

/// Result of a value-only maximization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MaxOutcome {
    Bounded(Rational),
    Unbounded,
    Infeasible,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
}

enum Run {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, j: usize, reduced: &mut [Rational], z: &mut Rational) {
        let inv = Rational::one() / &self.rows[r][j];
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let nz: Vec<usize> = (0..self.width)
            .filter(|&k| !self.rows[r][k].is_zero())
            .collect();
        let (pivot_row, pivot_rhs) = (self.rows[r].clone(), self.rhs[r].clone());
        for s in 0..self.rows.len() {
            if s == r || self.rows[s][j].is_zero() {
                continue;
            }
            let factor = self.rows[s][j].clone();
            for &k in &nz {
                let delta = &factor * &pivot_row[k];
                self.rows[s][k] -= delta;
            }
            self.rhs[s] -= &factor * &pivot_rhs;
        }
        if !reduced[j].is_zero() {
            let factor = reduced[j].clone();
            for &k in &nz {
                reduced[k] -= &factor * &pivot_row[k];
            }
            *z += &factor * &pivot_rhs;
        }
        self.basis[r] = j;
    }

    /// Maximizes `cost · x` from the current basic feasible solution. Columns
    /// with `blocked[j]` never enter. Returns the final objective value.
    fn run(&mut self, cost: &[Rational], blocked: &[bool]) -> (Run, Rational) {
        let mut reduced: Vec<Rational> = cost.to_vec();
        let mut z = Rational::zero();
        for (r, &bj) in self.basis.iter().enumerate() {
            let cb = &cost[bj];
            if cb.is_zero() {
                continue;
            }
            for (k, v) in self.rows[r].iter().enumerate() {
                if !v.is_zero() {
                    reduced[k] -= cb * v;
                }
            }
            z += cb * &self.rhs[r];
        }
        loop {
            let entering = (0..self.width).find(|&j| !blocked[j] && reduced[j].is_positive());
            let Some(j) = entering else {
                return (Run::Optimal, z);
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return (Run::Unbounded, z);
            };
            self.pivot(r, j, &mut reduced, &mut z);
        }
    }
}

/// Solves `max c·x` subject to `a x = b`, `x ≥ 0`.
fn solve_standard(
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    c: &[Rational],
    sense: Sense,
) -> LpOutcome {
    let n = c.len();
    let mut a = a;
    let mut b = b;
    for (row, rhs) in a.iter_mut().zip(b.iter_mut()) {
        if rhs.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            *rhs = -rhs.clone();
        }
    }
    let m = a.len();

    // Reuse unit columns as the starting basis where possible.
    let mut basis = vec![usize::MAX; m];
    let mut used = vec![false; n];
    for j in 0..n {
        let mut hit = None;
        let mut unit = true;
        for (r, row) in a.iter().enumerate() {
            if row[j].is_zero() {
                continue;
            }
            if row[j].is_one() && hit.is_none() {
                hit = Some(r);
            } else {
                unit = false;
                break;
            }
        }
        if let (true, Some(r)) = (unit, hit) {
            if basis[r] == usize::MAX && !used[j] {
                basis[r] = j;
                used[j] = true;
            }
        }
    }
    let artificial_rows: Vec<usize> = (0..m).filter(|&r| basis[r] == usize::MAX).collect();
    let width = n + artificial_rows.len();
    let mut rows = a;
    for row in rows.iter_mut() {
        row.resize(width, Rational::zero());
    }
    for (t, &r) in artificial_rows.iter().enumerate() {
        rows[r][n + t] = Rational::one();
        basis[r] = n + t;
    }
    let mut tab = Tableau {
        rows,
        rhs: b,
        basis,
        width,
    };

    if !artificial_rows.is_empty() {
        let mut cost = vec![Rational::zero(); width];
        for v in cost.iter_mut().skip(n) {
            *v = -Rational::one();
        }
        let blocked = vec![false; width];
        let (_, z) = tab.run(&cost, &blocked);
        if z.is_negative() {
            return LpOutcome::Infeasible;
        }
        // Drive remaining (zero-level) artificials out of the basis.
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= n {
                match (0..n).find(|&j| !tab.rows[r][j].is_zero()) {
                    Some(j) => {
                        let mut dummy = vec![Rational::zero(); width];
                        let mut dz = Rational::zero();
                        tab.pivot(r, j, &mut dummy, &mut dz);
                    }
                    None => {
                        tab.rows.remove(r);
                        tab.rhs.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    let read_point = |tab: &Tableau| {
        let mut x = vec![Rational::zero(); n];
        for (r, &j) in tab.basis.iter().enumerate() {
            if j < n {
                x[j] = tab.rhs[r].clone();
            }
        }
        x
    };

    if sense == Sense::Feasibility {
        let point = read_point(&tab);
        return LpOutcome::Optimal {
            point,
            value: Rational::zero(),
        };
    }

    let mut cost = c.to_vec();
    cost.resize(width, Rational::zero());
    let blocked: Vec<bool> = (0..width).map(|j| j >= n).collect();
    match tab.run(&cost, &blocked) {
        (Run::Unbounded, _) => LpOutcome::Unbounded,
        (Run::Optimal, value) => LpOutcome::Optimal {
            point: read_point(&tab),
            value,
        },
    }
}

fn check_dims(dim: usize, constraints: &[Halfspace]) -> Result<()> {
    if let Some(h) = constraints.iter().find(|h| h.dim() != dim) {
        return Err(Error::invalid(format!(
            "constraint of dimension {} in a {dim}-dimensional problem",
            h.dim()
        )));
    }
    Ok(())
}

/// Optimizes over free variables `x ∈ ℝ^d` subject to `constraints`.
pub fn lp_solve(
    objective: &[Rational],
    constraints: &[Halfspace],
    sense: Sense,
) -> Result<LpOutcome> {
    let d = objective.len();
    check_dims(d, constraints)?;
    let slacks = constraints
        .iter()
        .filter(|h| h.relation == Relation::Le)
        .count();
    let width = 2 * d + slacks;
    let mut a = Vec::with_capacity(constraints.len());
    let mut b = Vec::with_capacity(constraints.len());
    let mut s = 2 * d;
    for h in constraints {
        let mut row = vec![Rational::zero(); width];
        for (i, v) in h.coeffs.iter().enumerate() {
            row[i] = v.clone();
            row[d + i] = -v.clone();
        }
        if h.relation == Relation::Le {
            row[s] = Rational::one();
            s += 1;
        }
        a.push(row);
        b.push(h.bound.clone());
    }
    let mut c = vec![Rational::zero(); width];
    for (i, v) in objective.iter().enumerate() {
        c[i] = v.clone();
        c[d + i] = -v.clone();
    }
    Ok(match solve_standard(a, b, &c, sense) {
        LpOutcome::Optimal { point, .. } => {
            let x: Vec<Rational> = (0..d).map(|i| &point[i] - &point[d + i]).collect();
            let value = objective
                .iter()
                .zip(&x)
                .fold(Rational::zero(), |acc, (c, x)| acc + c * x);
            LpOutcome::Optimal { point: x, value }
        }
        other => other,
    })
}

/// Like [`lp_solve`] but with every variable constrained to be nonnegative.
pub fn lp_solve_nonneg(
    objective: &[Rational],
    constraints: &[Halfspace],
    sense: Sense,
) -> Result<LpOutcome> {
    let d = objective.len();
    check_dims(d, constraints)?;
    let slacks = constraints
        .iter()
        .filter(|h| h.relation == Relation::Le)
        .count();
    let width = d + slacks;
    let mut a = Vec::with_capacity(constraints.len());
    let mut b = Vec::with_capacity(constraints.len());
    let mut s = d;
    for h in constraints {
        let mut row = h.coeffs.clone();
        row.resize(width, Rational::zero());
        if h.relation == Relation::Le {
            row[s] = Rational::one();
            s += 1;
        }
        a.push(row);
        b.push(h.bound.clone());
    }
    let mut c = objective.to_vec();
    c.resize(width, Rational::zero());
    Ok(match solve_standard(a, b, &c, sense) {
        LpOutcome::Optimal { mut point, .. } => {
            point.truncate(d);
            let value = objective
                .iter()
                .zip(&point)
                .fold(Rational::zero(), |acc, (c, x)| acc + c * x);
            LpOutcome::Optimal { point, value }
        }
        other => other,
    })
}

/// `sup { objective · x : x satisfies constraints }` over free variables,
/// computed on the dual problem.
pub fn maximize(objective: &[Rational], constraints: &[Halfspace]) -> Result<MaxOutcome> {
    let d = objective.len();
    check_dims(d, constraints)?;
    // Dual: min b·y  s.t.  Aᵀ y = c,  y_le ≥ 0,  y_eq free (split in two).
    let mut cols: Vec<(&Halfspace, bool)> = Vec::new();
    for h in constraints {
        cols.push((h, false));
        if h.relation == Relation::Eq {
            cols.push((h, true));
        }
    }
    let width = cols.len();
    let mut a = vec![vec![Rational::zero(); width]; d];
    let mut cost = vec![Rational::zero(); width];
    for (j, (h, negated)) in cols.iter().enumerate() {
        for (i, v) in h.coeffs.iter().enumerate() {
            a[i][j] = if *negated { -v.clone() } else { v.clone() };
        }
        cost[j] = if *negated {
            h.bound.clone()
        } else {
            -h.bound.clone()
        };
    }
    match solve_standard(a, objective.to_vec(), &cost, Sense::Maximize) {
        LpOutcome::Optimal { value, .. } => Ok(MaxOutcome::Bounded(-value)),
        LpOutcome::Unbounded => Ok(MaxOutcome::Infeasible),
        LpOutcome::Infeasible => {
            // primal is infeasible or unbounded; the zero objective always
            // has a feasible dual, so this recursion ends after one step
            if objective.iter().all(Zero::is_zero) {
                return Ok(MaxOutcome::Infeasible);
            }
            match maximize(&vec![Rational::zero(); d], constraints)? {
                MaxOutcome::Bounded(_) => Ok(MaxOutcome::Unbounded),
                _ => Ok(MaxOutcome::Infeasible),
            }
        }
    }
}
