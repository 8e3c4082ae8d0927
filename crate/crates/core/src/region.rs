//! Feasible allocations of request rates to recovery sets and the exact
//! service rate region.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gfmatrix::GenMatrix;
use crate::ratpoly::{
    contains, down_closed_facets, fm_eliminate, lp_solve_nonneg, remove_redundant, FmOptions,
    Halfspace, LpOutcome, Polytope, Rational, Sense,
};
use crate::recovery::RecoverySystem;
use crate::serverset::ServerSet;

/// Request rates `(λ_1, …, λ_k)`, all nonnegative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateVector(Vec<Rational>);

impl RateVector {
    pub fn new(lambdas: Vec<Rational>) -> Result<Self> {
        if let Some((i, v)) = lambdas.iter().enumerate().find(|(_, v)| v.is_negative()) {
            return Err(Error::invalid(format!("rate l{} = {v} is negative", i + 1)));
        }
        Ok(RateVector(lambdas))
    }

    pub fn zeros(k: usize) -> Self {
        RateVector(vec![Rational::zero(); k])
    }

    pub fn lambdas(&self) -> &[Rational] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// `min{λ_i, 1}`.
    pub fn ell(&self, i: usize) -> Rational {
        ell(&self.0[i])
    }

    pub fn scaled(&self, factor: &Rational) -> RateVector {
        RateVector(self.0.iter().map(|v| v * factor).collect())
    }
}

/// `min{t, 1}`.
pub fn ell(t: &Rational) -> Rational {
    if *t < Rational::one() {
        t.clone()
    } else {
        Rational::one()
    }
}

/// Split of each object's rate over its recovery sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    pub weights: BTreeMap<(usize, ServerSet), Rational>,
    pub mu: Rational,
}

impl Allocation {
    /// Load carried by each of the `n` servers.
    pub fn loads(&self, n: usize) -> Vec<Rational> {
        let mut loads = vec![Rational::zero(); n];
        for ((_, set), w) in &self.weights {
            for j in set.indices() {
                loads[j] += w;
            }
        }
        loads
    }

    /// `Σ_{i,R} |R| · λ_{i,R}`.
    pub fn weighted_size_sum(&self) -> Rational {
        self.weights
            .iter()
            .fold(Rational::zero(), |acc, ((_, set), w)| {
                acc + w * Rational::from_integer(set.len().into())
            })
    }

    /// Rechecks the three feasibility conditions with exact arithmetic.
    pub fn verify(&self, sys: &RecoverySystem, lam: &RateVector) -> Result<()> {
        let k = sys.families().len();
        if lam.k() != k {
            return Err(Error::invalid(format!("{} rates for k = {k}", lam.k())));
        }
        let mut totals = vec![Rational::zero(); k];
        for ((i, set), w) in &self.weights {
            if *i >= k || !sys.family(*i).contains(set) {
                return Err(Error::invariant(format!(
                    "{set} is not in the family of object {}",
                    i + 1
                )));
            }
            if w.is_negative() {
                return Err(Error::invariant(format!(
                    "negative weight on ({}, {set})",
                    i + 1
                )));
            }
            totals[*i] += w;
        }
        for (i, (t, l)) in totals.iter().zip(lam.lambdas()).enumerate() {
            if t != l {
                return Err(Error::invariant(format!(
                    "object {} receives {t} instead of {l}",
                    i + 1
                )));
            }
        }
        for (j, load) in self.loads(sys.matrix().n()).iter().enumerate() {
            if *load > self.mu {
                return Err(Error::invariant(format!(
                    "server {} carries {load} > {}",
                    j + 1,
                    self.mu
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Feasible(Allocation),
    Infeasible,
}

impl Membership {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Membership::Feasible(_))
    }
}

/// `(object, set)` pairs in the variable order used by the LP and FM systems.
fn variables(sys: &RecoverySystem) -> Vec<(usize, ServerSet)> {
    sys.families()
        .iter()
        .enumerate()
        .flat_map(|(i, fam)| fam.iter().map(move |&s| (i, s)))
        .collect()
}

/// Decides whether `lam` admits a feasible allocation with server capacity `mu`.
pub fn membership(sys: &RecoverySystem, lam: &RateVector, mu: &Rational) -> Result<Membership> {
    let k = sys.families().len();
    if lam.k() != k {
        return Err(Error::invalid(format!(
            "{} rates given for k = {k}",
            lam.k()
        )));
    }
    if !mu.is_positive() {
        return Err(Error::invalid(format!(
            "server capacity {mu} must be positive"
        )));
    }
    let vars = variables(sys);
    let width = vars.len();
    let mut cons = Vec::new();
    for (i, l) in lam.lambdas().iter().enumerate() {
        let coeffs = vars
            .iter()
            .map(|&(o, _)| {
                if o == i {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        cons.push(Halfspace::eq(coeffs, l.clone()));
    }
    for j in 0..sys.matrix().n() {
        let coeffs: Vec<Rational> = vars
            .iter()
            .map(|(_, s)| {
                if s.contains(j) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        if coeffs.iter().any(|c| !c.is_zero()) {
            cons.push(Halfspace::le(coeffs, mu.clone()));
        }
    }
    let zero = vec![Rational::zero(); width];
    let point = match lp_solve_nonneg(&zero, &cons, Sense::Feasibility)? {
        LpOutcome::Optimal { point, .. } => point,
        _ => return Ok(Membership::Infeasible),
    };
    let alloc = Allocation {
        weights: vars.into_iter().zip(point).collect(),
        mu: mu.clone(),
    };
    alloc.verify(sys, lam)?;
    Ok(Membership::Feasible(alloc))
}

/// How [`exact_region_by`] projects the allocation system onto rate space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    /// Elimination for at most [`AUTO_FM_MAX_VARS`] allocation variables
    /// within [`AUTO_FM_ROW_CAP`] rows, [`Projection::Hull`] otherwise.
    Auto,
    /// Fourier–Motzkin elimination of the allocation variables.
    Elimination(FmOptions),
    /// Facet enumeration driven by lexicographic LP maximization.
    Hull,
}

/// Largest allocation system that [`Projection::Auto`] eliminates directly.
pub const AUTO_FM_MAX_VARS: usize = 16;

/// Row budget of the elimination attempted by [`Projection::Auto`].
pub const AUTO_FM_ROW_CAP: usize = 2_000;

/// The allocation variables and constraints of the objects in `objects`,
/// over `[λ_{objects[0]}, …, λ_{i,R}, …]`; all other rates are taken as 0.
struct AllocationSystem {
    dim: usize,
    rows: Vec<Halfspace>,
}

impl AllocationSystem {
    fn new(sys: &RecoverySystem, objects: &[usize]) -> Self {
        let d = objects.len();
        let vars: Vec<(usize, ServerSet)> = objects
            .iter()
            .enumerate()
            .flat_map(|(slot, &i)| sys.family(i).iter().map(move |&s| (slot, s)))
            .collect();
        let dim = d + vars.len();
        let mut rows = Vec::new();
        for slot in 0..d {
            let mut coeffs = vec![Rational::zero(); dim];
            coeffs[slot] = Rational::one();
            for (c, &(o, _)) in coeffs[d..].iter_mut().zip(&vars) {
                if o == slot {
                    *c = -Rational::one();
                }
            }
            rows.push(Halfspace::eq(coeffs, Rational::zero()));
        }
        for j in 0..sys.matrix().n() {
            let mut coeffs = vec![Rational::zero(); dim];
            for (c, (_, s)) in coeffs[d..].iter_mut().zip(&vars) {
                if s.contains(j) {
                    *c = Rational::one();
                }
            }
            if coeffs.iter().any(|c| !c.is_zero()) {
                rows.push(Halfspace::le(coeffs, Rational::one()));
            }
        }
        AllocationSystem { dim, rows }
    }

    fn eliminate(&self, d: usize, opts: FmOptions) -> Result<Vec<Halfspace>> {
        let mut rows = self.rows.clone();
        rows.extend((0..self.dim).map(|v| Halfspace::nonneg(self.dim, v)));
        let drop: Vec<usize> = (d..self.dim).collect();
        fm_eliminate(&rows, &drop, opts)
    }

    /// Lexicographic maximizer in rate space: `a · λ` first, then `λ_1`, ….
    fn lexmax(&self, a: &[Rational]) -> Result<Vec<Rational>> {
        let d = a.len();
        let mut cons = self.rows.clone();
        let mut point = Vec::new();
        for step in 0..=d {
            let mut dir = vec![Rational::zero(); self.dim];
            if step == 0 {
                dir[..d].clone_from_slice(a);
            } else {
                dir[step - 1] = Rational::one();
            }
            let LpOutcome::Optimal { point: x, value } =
                lp_solve_nonneg(&dir, &cons, Sense::Maximize)?
            else {
                return Err(Error::invariant("allocation LP is infeasible or unbounded"));
            };
            cons.push(Halfspace::eq(dir, value));
            point = x;
        }
        point.truncate(d);
        Ok(point)
    }
}

/// The region of the objects in `objects`, all other rates fixed at 0.
fn project(sys: &RecoverySystem, objects: &[usize], method: Projection) -> Result<Polytope> {
    let d = objects.len();
    let alloc = AllocationSystem::new(sys, objects);
    let by_hull = || down_closed_facets(d, |a| alloc.lexmax(a));
    let facets = match method {
        Projection::Elimination(opts) => alloc.eliminate(d, opts).map_err(|e| match e {
            Error::ResourceLimit(msg) => Error::resource(format!(
                "{msg}; use the minimal recovery system, a cross-section, or membership queries"
            )),
            other => other,
        })?,
        Projection::Hull => by_hull()?,
        Projection::Auto if alloc.dim - d <= AUTO_FM_MAX_VARS => {
            let opts = FmOptions {
                row_cap: AUTO_FM_ROW_CAP,
            };
            match alloc.eliminate(d, opts) {
                Err(Error::ResourceLimit(_)) => by_hull()?,
                other => other?,
            }
        }
        Projection::Auto => by_hull()?,
    };
    Ok(remove_redundant(&Polytope::new(d, facets)?))
}

/// `Λ(R, 1)` as an irredundant H-representation over `λ ∈ ℝ^k`.
pub fn exact_region(sys: &RecoverySystem) -> Result<Polytope> {
    exact_region_by(sys, Projection::Auto)
}

pub fn exact_region_by(sys: &RecoverySystem, method: Projection) -> Result<Polytope> {
    let objects: Vec<usize> = (0..sys.families().len()).collect();
    project(sys, &objects, method)
}

/// `Λ(R, 1)` restricted to the given fixed rates, over the remaining
/// coordinates. Equal to sectioning [`exact_region`]; rates fixed at 0 are
/// removed before projecting, which keeps the projection small.
pub fn exact_section(sys: &RecoverySystem, fixed: &BTreeMap<usize, Rational>) -> Result<Polytope> {
    let k = sys.families().len();
    if let Some(&v) = fixed.keys().find(|&&v| v >= k) {
        return Err(Error::invalid(format!(
            "coordinate l{} out of range 1..={k}",
            v + 1
        )));
    }
    if fixed.values().all(Zero::is_zero) {
        let objects: Vec<usize> = (0..k).filter(|i| !fixed.contains_key(i)).collect();
        return project(sys, &objects, Projection::Auto);
    }
    exact_region(sys)?.section(fixed)
}

/// Fixes the given coordinates of a region and drops them.
pub fn cross_section(p: &Polytope, fixed: &BTreeMap<usize, Rational>) -> Result<Polytope> {
    p.section(fixed)
}

/// Checks that `lam` is servable at capacity `mu` exactly when `lam / mu`
/// is servable at capacity 1.
pub fn mu_scaling_check(sys: &RecoverySystem, lam: &RateVector, mu: &Rational) -> Result<bool> {
    if !mu.is_positive() {
        return Err(Error::invalid(format!(
            "server capacity {mu} must be positive"
        )));
    }
    let direct = membership(sys, lam, mu)?.is_feasible();
    let scaled = membership(sys, &lam.scaled(&mu.recip()), &Rational::one())?.is_feasible();
    Ok(direct == scaled)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionComparison {
    pub equal: bool,
    /// A point in one region but not the other.
    pub witness: Option<Vec<Rational>>,
}

/// Compares the regions of the minimal and the full recovery systems.
pub fn minimal_equals_all_check(g: &GenMatrix) -> Result<RegionComparison> {
    let min = exact_region(&RecoverySystem::minimal(g)?)?;
    let all = exact_region(&RecoverySystem::all(g)?)?;
    for (outer, inner) in [(&min, &all), (&all, &min)] {
        let c = contains(outer, inner)?;
        if !c.contained {
            return Ok(RegionComparison {
                equal: false,
                witness: c.certificate,
            });
        }
    }
    Ok(RegionComparison {
        equal: true,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::gfield::FieldSpec;
    use crate::ratpoly::{rat, ratio, vertices};

    fn rates(v: &[(i64, i64)]) -> RateVector {
        RateVector::new(v.iter().map(|&(n, d)| ratio(n, d)).collect()).unwrap()
    }

    fn pts(v: &[&[(i64, i64)]]) -> Vec<Vec<Rational>> {
        v.iter()
            .map(|p| p.iter().map(|&(n, d)| ratio(n, d)).collect())
            .collect()
    }

    #[test]
    fn membership_examples() {
        let sys = RecoverySystem::minimal(&fixtures::mds_4_2_gf3()).unwrap();
        let one = rat(1);
        let Membership::Feasible(a) = membership(&sys, &rates(&[(2, 1), (1, 1)]), &one).unwrap()
        else {
            panic!("(2,1) is servable");
        };
        assert_eq!(a.loads(4), vec![rat(1); 4]);
        assert!(!membership(&sys, &rates(&[(2, 1), (2, 1)]), &one)
            .unwrap()
            .is_feasible());
        let Membership::Feasible(z) = membership(&sys, &RateVector::zeros(2), &one).unwrap() else {
            panic!("zero is servable");
        };
        assert!(z.weights.values().all(Zero::is_zero));
        assert!(RateVector::new(vec![rat(-1), rat(0)]).is_err());
        assert!(membership(&sys, &RateVector::zeros(3), &one).is_err());
    }

    #[test]
    fn verify_rejects_bad_allocations() {
        let sys = RecoverySystem::minimal(&fixtures::mds_4_2_gf3()).unwrap();
        let lam = rates(&[(1, 1), (0, 1)]);
        let Membership::Feasible(mut a) = membership(&sys, &lam, &rat(1)).unwrap() else {
            panic!()
        };
        a.mu = rat(0);
        assert!(a.verify(&sys, &lam).is_err());
        a.mu = rat(1);
        assert!(a.verify(&sys, &rates(&[(1, 2), (0, 1)])).is_err());
    }

    #[test]
    fn mds_4_2_region() {
        let sys = RecoverySystem::minimal(&fixtures::mds_4_2_gf3()).unwrap();
        let p = exact_region(&sys).unwrap();
        assert_eq!(
            vertices(&p).unwrap(),
            pts(&[
                &[(0, 1), (0, 1)],
                &[(5, 2), (0, 1)],
                &[(2, 1), (1, 1)],
                &[(1, 1), (2, 1)],
                &[(0, 1), (5, 2)]
            ])
        );
        let mut fixed = BTreeMap::new();
        fixed.insert(1, rat(0));
        let s = cross_section(&p, &fixed).unwrap();
        assert_eq!(vertices(&s).unwrap(), pts(&[&[(0, 1)], &[(5, 2)]]));
        assert_eq!(exact_section(&sys, &fixed).unwrap(), s);
        fixed.insert(1, rat(3));
        assert!(cross_section(&p, &fixed).unwrap().is_empty());
    }

    #[test]
    fn identity_plus_replica() {
        let g = fixtures::replicated_2x3_gf2();
        let p = exact_region(&RecoverySystem::minimal(&g).unwrap()).unwrap();
        assert_eq!(
            vertices(&p).unwrap(),
            pts(&[
                &[(0, 1), (0, 1)],
                &[(2, 1), (0, 1)],
                &[(2, 1), (1, 1)],
                &[(0, 1), (1, 1)]
            ])
        );
        assert!(minimal_equals_all_check(&g).unwrap().equal);
    }

    #[test]
    fn scaling() {
        let sys = RecoverySystem::minimal(&fixtures::mds_4_2_gf3()).unwrap();
        for (lam, mu) in [
            (rates(&[(4, 1), (2, 1)]), rat(2)),
            (rates(&[(5, 1), (5, 1)]), rat(2)),
            (RateVector::zeros(2), ratio(1, 2)),
        ] {
            assert!(mu_scaling_check(&sys, &lam, &mu).unwrap());
        }
        assert!(membership(&sys, &rates(&[(4, 1), (2, 1)]), &rat(2))
            .unwrap()
            .is_feasible());
        assert!(!membership(&sys, &rates(&[(5, 1), (5, 1)]), &rat(2))
            .unwrap()
            .is_feasible());
        assert!(mu_scaling_check(&sys, &RateVector::zeros(2), &rat(0)).is_err());
    }

    #[test]
    fn minimal_and_all_agree_on_mds() {
        assert!(
            minimal_equals_all_check(&fixtures::mds_4_2_gf3())
                .unwrap()
                .equal
        );
    }

    #[test]
    fn trivially_small_system() {
        let f = FieldSpec::prime(2).unwrap();
        let g = GenMatrix::from_rows(&f, &[vec![1, 0, 1, 1], vec![0, 1, 1, 0]]).unwrap();
        let sys = RecoverySystem::minimal(&g).unwrap();
        let p = exact_region(&sys).unwrap();
        for a in 0..=8 {
            for b in 0..=8 {
                let lam = rates(&[(a, 4), (b, 4)]);
                let inside = p.contains_point(lam.lambdas());
                assert_eq!(
                    inside,
                    membership(&sys, &lam, &rat(1)).unwrap().is_feasible(),
                    "{a}/4 {b}/4"
                );
            }
        }
    }

    #[test]
    fn projection_methods_agree() {
        for g in [
            fixtures::mds_4_2_gf3(),
            fixtures::gf7_3x5(),
            fixtures::replicated_2x3_gf2(),
            fixtures::mds_4_2_gf5(),
        ] {
            let sys = RecoverySystem::minimal(&g).unwrap();
            let fm = exact_region_by(&sys, Projection::Elimination(FmOptions::default())).unwrap();
            assert_eq!(fm, exact_region_by(&sys, Projection::Hull).unwrap());
        }
    }

    #[test]
    fn elimination_budget_is_reported() {
        let sys = RecoverySystem::minimal(&fixtures::mds_6_3_gf7()).unwrap();
        let err =
            exact_region_by(&sys, Projection::Elimination(FmOptions { row_cap: 100 })).unwrap_err();
        let Error::ResourceLimit(msg) = err else {
            panic!("{err:?}")
        };
        assert!(msg.contains("minimal recovery system"));
    }
}
