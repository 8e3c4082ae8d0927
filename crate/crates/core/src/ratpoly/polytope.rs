use std::cmp::Ordering;
use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use super::halfspace::{Halfspace, Relation};
use super::lp::{lp_solve, maximize, LpOutcome, MaxOutcome, Sense};
use super::rational::Rational;
use crate::error::{Error, Result};

/// A convex polyhedron `{x ∈ ℝ^dim : every halfspace holds}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    vertices: Option<Vec<Vec<Rational>>>,
}

impl Polytope {
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        if let Some(h) = halfspaces.iter().find(|h| h.dim() != dim) {
            return Err(Error::invalid(format!(
                "halfspace of dimension {} in a {dim}-dimensional polytope",
                h.dim()
            )));
        }
        Ok(Polytope {
            dim,
            halfspaces,
            vertices: None,
        })
    }

    /// The empty set, represented by `0 ≤ −1`.
    pub fn empty(dim: usize) -> Self {
        Polytope {
            dim,
            halfspaces: vec![Halfspace::infeasible(dim)],
            vertices: Some(Vec::new()),
        }
    }

    /// `{x : x ≥ 0}`.
    pub fn orthant(dim: usize) -> Self {
        Polytope {
            dim,
            halfspaces: (0..dim).map(|i| Halfspace::nonneg(dim, i)).collect(),
            vertices: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    /// Cached vertices, if [`Polytope::with_vertices`] has been called.
    pub fn cached_vertices(&self) -> Option<&[Vec<Rational>]> {
        self.vertices.as_deref()
    }

    /// Computes and caches the vertex list (dimension ≤ 3, bounded).
    pub fn with_vertices(mut self) -> Result<Self> {
        if self.vertices.is_none() {
            self.vertices = Some(vertices(&self)?);
        }
        Ok(self)
    }

    pub fn contains_point(&self, point: &[Rational]) -> bool {
        point.len() == self.dim && self.halfspaces.iter().all(|h| h.satisfied_by(point))
    }

    pub fn feasible_point(&self) -> Option<Vec<Rational>> {
        let zero = vec![Rational::zero(); self.dim];
        match lp_solve(&zero, &self.halfspaces, Sense::Feasibility) {
            Ok(LpOutcome::Optimal { point, .. }) => Some(point),
            _ => None,
        }
    }

    /// Decided on the dual problem, whose size grows with the number of
    /// halfspaces only linearly.
    pub fn is_empty(&self) -> bool {
        let zero = vec![Rational::zero(); self.dim];
        matches!(
            maximize(&zero, &self.halfspaces),
            Ok(MaxOutcome::Infeasible) | Err(_)
        )
    }

    /// Intersection with another polytope of the same dimension.
    pub fn intersect(&self, other: &Polytope) -> Result<Polytope> {
        if self.dim != other.dim {
            return Err(Error::invalid(format!(
                "cannot intersect dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        let mut hs = self.halfspaces.clone();
        hs.extend(other.halfspaces.iter().cloned());
        Polytope::new(self.dim, hs)
    }

    /// Normalized, sorted, exact duplicates and satisfied trivial rows removed.
    /// A violated trivial row turns the whole polytope into [`Polytope::empty`].
    pub fn canonical(&self) -> Polytope {
        let mut hs: Vec<Halfspace> = Vec::with_capacity(self.halfspaces.len());
        for h in &self.halfspaces {
            let n = h.normalized();
            if n.is_trivial() {
                let ok = match n.relation {
                    Relation::Le => !n.bound.is_negative(),
                    Relation::Eq => n.bound.is_zero(),
                };
                if ok {
                    continue;
                }
                return Polytope::empty(self.dim);
            }
            hs.push(n);
        }
        hs.sort_by(halfspace_order);
        hs.dedup();
        Polytope {
            dim: self.dim,
            halfspaces: hs,
            vertices: None,
        }
    }

    /// Fixes some coordinates and drops them. The remaining coordinates keep
    /// their relative order.
    pub fn section(&self, fixed: &BTreeMap<usize, Rational>) -> Result<Polytope> {
        if let Some(&v) = fixed.keys().find(|&&v| v >= self.dim) {
            return Err(Error::invalid(format!(
                "coordinate {} out of range 1..={}",
                v + 1,
                self.dim
            )));
        }
        let keep: Vec<usize> = (0..self.dim).filter(|v| !fixed.contains_key(v)).collect();
        let hs = self
            .halfspaces
            .iter()
            .map(|h| {
                let mut bound = h.bound.clone();
                for (&v, val) in fixed {
                    bound -= &h.coeffs[v] * val;
                }
                Halfspace {
                    coeffs: keep.iter().map(|&v| h.coeffs[v].clone()).collect(),
                    bound,
                    relation: h.relation,
                }
            })
            .collect();
        Ok(remove_redundant(&Polytope::new(keep.len(), hs)?))
    }
}

fn halfspace_order(a: &Halfspace, b: &Halfspace) -> Ordering {
    a.relation
        .cmp(&b.relation)
        .then_with(|| a.coeffs.cmp(&b.coeffs))
        .then_with(|| a.bound.cmp(&b.bound))
}

/// Drops every halfspace implied by the others. The result defines the same
/// set, in canonical order; an empty input becomes [`Polytope::empty`].
///
/// Rows are decided in order against the rows still kept. Each test solves
/// an LP over a small working set of rows, grown by the most violated row
/// whenever the LP optimizer leaves the full system.
pub fn remove_redundant(p: &Polytope) -> Polytope {
    let canon = p.canonical();
    if canon.is_empty() {
        return Polytope::empty(p.dim);
    }
    let hs = canon.halfspaces;
    let mut alive = vec![true; hs.len()];
    let mut working: Vec<usize> = (0..hs.len())
        .filter(|&j| hs[j].relation == Relation::Eq)
        .collect();
    for i in 0..hs.len() {
        if hs[i].relation == Relation::Eq {
            continue;
        }
        if implied_by_rest(&hs, &alive, &mut working, i) {
            alive[i] = false;
            working.retain(|&j| j != i);
        }
    }
    Polytope {
        dim: p.dim,
        halfspaces: hs
            .into_iter()
            .zip(alive)
            .filter_map(|(h, a)| a.then_some(h))
            .collect(),
        vertices: None,
    }
}

/// Whether row `i` is implied by the other alive rows of a feasible system.
fn implied_by_rest(hs: &[Halfspace], alive: &[bool], working: &mut Vec<usize>, i: usize) -> bool {
    let h = &hs[i];
    let relaxed = Halfspace::le(h.coeffs.clone(), &h.bound + Rational::one());
    loop {
        let mut rows: Vec<Halfspace> = working
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| hs[j].clone())
            .collect();
        rows.push(relaxed.clone());
        // the value-only dual LP is cheaper and settles most rows
        if let Ok(MaxOutcome::Bounded(v)) = maximize(&h.coeffs, &rows) {
            if v <= h.bound {
                return true;
            }
        }
        // bounded by the relaxed row, feasible as a relaxation
        let x = match lp_solve(&h.coeffs, &rows, Sense::Maximize).expect("dimensions agree") {
            LpOutcome::Optimal { point, value } => {
                if value <= h.bound {
                    return true;
                }
                point
            }
            other => unreachable!("relaxation of a feasible system gave {other:?}"),
        };
        let worst = (0..hs.len())
            .filter(|&j| j != i && alive[j] && !working.contains(&j))
            .filter_map(|j| {
                let excess = hs[j].lhs(&x) - &hs[j].bound;
                let scale: Rational = hs[j].coeffs.iter().map(|c| c.abs()).sum();
                (excess.is_positive() && scale.is_positive()).then(|| (excess / scale, j))
            })
            .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)));
        match worst {
            Some((_, j)) => working.push(j),
            None => return false,
        }
    }
}

/// Solves the square system `rows · x = rhs`; `None` if singular.
fn solve_square(mut rows: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = rhs.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !rows[r][c].is_zero())?;
        rows.swap(c, p);
        rhs.swap(c, p);
        let inv = Rational::one() / &rows[c][c];
        for v in rows[c].iter_mut() {
            *v *= &inv;
        }
        rhs[c] *= &inv;
        for r in 0..n {
            if r == c || rows[r][c].is_zero() {
                continue;
            }
            let f = rows[r][c].clone();
            let pivot = rows[c].clone();
            for (x, p) in rows[r].iter_mut().zip(&pivot) {
                *x -= &f * p;
            }
            let d = &f * &rhs[c];
            rhs[r] -= d;
        }
    }
    Some(rhs)
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Counterclockwise around the centroid, starting at the lexicographically
/// smallest point.
fn sort_ccw(points: &mut [Vec<Rational>]) {
    if points.len() < 3 {
        points.sort();
        return;
    }
    let count = Rational::from_integer(points.len().into());
    let cx = points.iter().map(|p| p[0].clone()).sum::<Rational>() / &count;
    let cy = points.iter().map(|p| p[1].clone()).sum::<Rational>() / &count;
    let half = |p: &Vec<Rational>| {
        let (x, y) = (&p[0] - &cx, &p[1] - &cy);
        if y.is_positive() || (y.is_zero() && x.is_positive()) {
            0
        } else {
            1
        }
    };
    points.sort_by(|a, b| {
        half(a).cmp(&half(b)).then_with(|| {
            let (ax, ay) = (&a[0] - &cx, &a[1] - &cy);
            let (bx, by) = (&b[0] - &cx, &b[1] - &cy);
            let cross = ax * by - ay * bx;
            Rational::zero().cmp(&cross)
        })
    });
    let start = (0..points.len())
        .min_by(|&i, &j| points[i].cmp(&points[j]))
        .unwrap();
    points.rotate_left(start);
}

/// Vertices of a bounded polytope of dimension at most 3. Two-dimensional
/// results are in counterclockwise order, others lexicographic.
pub fn vertices(p: &Polytope) -> Result<Vec<Vec<Rational>>> {
    let d = p.dim;
    if d > 3 {
        return Err(Error::UnsupportedDimension(d));
    }
    let irr = remove_redundant(p);
    if irr.is_empty() {
        return Ok(Vec::new());
    }
    for axis in 0..d {
        for sign in [1i64, -1] {
            let mut dir = vec![Rational::zero(); d];
            dir[axis] = Rational::from_integer(sign.into());
            if maximize(&dir, &irr.halfspaces)? == MaxOutcome::Unbounded {
                return Err(Error::Unbounded);
            }
        }
    }
    if d == 0 {
        return Ok(vec![Vec::new()]);
    }
    let hs = &irr.halfspaces;
    let mut found: Vec<Vec<Rational>> = Vec::new();
    combinations(hs.len(), d, |pick| {
        let rows = pick.iter().map(|&i| hs[i].coeffs.clone()).collect();
        let rhs = pick.iter().map(|&i| hs[i].bound.clone()).collect();
        if let Some(x) = solve_square(rows, rhs) {
            if irr.contains_point(&x) && !found.contains(&x) {
                found.push(x);
            }
        }
    });
    if d == 2 {
        sort_ccw(&mut found);
    } else {
        found.sort();
    }
    Ok(found)
}

/// Outcome of a containment test `B ⊆ A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Containment {
    pub contained: bool,
    /// A point of `B` outside `A` when not contained.
    pub certificate: Option<Vec<Rational>>,
}

/// Decides `b ⊆ a` by maximizing each constraint of `a` over `b`.
pub fn contains(a: &Polytope, b: &Polytope) -> Result<Containment> {
    if a.dim != b.dim {
        return Err(Error::invalid(format!(
            "containment between dimensions {} and {}",
            a.dim, b.dim
        )));
    }
    if b.is_empty() {
        return Ok(Containment {
            contained: true,
            certificate: None,
        });
    }
    for h in &a.halfspaces {
        let mut checks = vec![Halfspace::le(h.coeffs.clone(), h.bound.clone())];
        if h.relation == Relation::Eq {
            checks.push(Halfspace::ge(h.coeffs.clone(), h.bound.clone()));
        }
        for c in checks {
            let violated = match maximize(&c.coeffs, &b.halfspaces)? {
                MaxOutcome::Bounded(v) => v > c.bound,
                MaxOutcome::Unbounded => true,
                MaxOutcome::Infeasible => false,
            };
            if violated {
                return Ok(Containment {
                    contained: false,
                    certificate: Some(violating_point(b, &c)?),
                });
            }
        }
    }
    Ok(Containment {
        contained: true,
        certificate: None,
    })
}

/// A point of `b` with `c.coeffs · x > c.bound`, known to exist.
fn violating_point(b: &Polytope, c: &Halfspace) -> Result<Vec<Rational>> {
    let mut hs = b.halfspaces.clone();
    hs.push(Halfspace::ge(c.coeffs.clone(), &c.bound + Rational::one()));
    let zero = vec![Rational::zero(); b.dim];
    if let LpOutcome::Optimal { point, .. } = lp_solve(&zero, &hs, Sense::Feasibility)? {
        return Ok(point);
    }
    // violation smaller than 1: the maximizer itself
    match lp_solve(&c.coeffs, &b.halfspaces, Sense::Maximize)? {
        LpOutcome::Optimal { point, .. } => Ok(point),
        _ => Err(Error::invariant("violated constraint has no witness")),
    }
}
