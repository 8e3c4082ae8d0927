//! Random instances and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use srr::bounds::{compare, ddb1_for, ddb2_for, tcb_region, BoundSpec, SeparableBound};
use srr::gfield::{FieldElement, FieldSpec};
use srr::gfmatrix::GenMatrix;
use srr::lincode::{dual_code, object_profile, object_profiles, systematic_profile_check};
use srr::ratpoly::{
    contains, lp_solve_nonneg, rat, ratio, FmOptions, LpOutcome, Polytope, Rational, Sense,
};
use srr::recovery::{
    all_recovery_sets, is_recovery_set, minimal_recovery_sets, recovery_sets_via_dual,
    RecoverySystem, SystematicCriterion,
};
use srr::region::{
    exact_region, exact_region_by, membership, Projection, RateVector, AUTO_FM_MAX_VARS,
    AUTO_FM_ROW_CAP,
};
use srr::serverset::ServerSet;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn lib<T>(r: srr::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

pub const ORDERS: [u32; 6] = [2, 3, 4, 5, 7, 8];

/// Largest extended-dual enumeration `q^(n+1-k)` a random instance may need.
pub const ENUMERATION_BUDGET: u64 = 1 << 16;

/// Largest total number of recovery sets for which region checks run on
/// the full recovery system.
pub const REGION_MAX_SETS: usize = 48;

/// Whether region checks, which project the full recovery system, are
/// cheap enough for this instance.
pub fn regions_affordable(g: &GenMatrix) -> bool {
    g.n() <= 6
        && (0..g.k())
            .map(|i| all_recovery_sets(g, i).map_or(usize::MAX, |f| f.len()))
            .sum::<usize>()
            <= REGION_MAX_SETS
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub q: u32,
    pub k: usize,
    pub n: usize,
    pub systematic: bool,
}

impl Shape {
    pub fn fits_budget(&self) -> bool {
        (self.q as u64)
            .checked_pow((self.n + 1 - self.k) as u32)
            .is_some_and(|c| c <= ENUMERATION_BUDGET)
    }
}

pub fn field(q: u32) -> FieldSpec {
    let (p, m) = srr::gfield::prime_power(q).expect("prime power");
    FieldSpec::with_default_modulus(p, m).expect("supported order")
}

/// A generator matrix of the given shape from raw entries (reduced mod q),
/// or `None` if it is rank-deficient or has a zero column.
pub fn matrix_from_entries(shape: Shape, entries: &[u32]) -> Option<GenMatrix> {
    let f = field(shape.q);
    let rows: Vec<Vec<u32>> = (0..shape.k)
        .map(|r| {
            (0..shape.n)
                .map(|c| {
                    if shape.systematic && c < shape.k {
                        u32::from(r == c)
                    } else {
                        entries[r * shape.n + c] % shape.q
                    }
                })
                .collect()
        })
        .collect();
    GenMatrix::from_rows(&f, &rows).ok()
}

pub fn random_shape(rng: &mut impl Rng, max_k: usize, max_n: usize) -> Shape {
    loop {
        let k = rng.gen_range(2..=max_k);
        if k + 1 > max_n {
            continue;
        }
        let shape = Shape {
            q: *ORDERS.choose(rng).unwrap(),
            k,
            n: rng.gen_range(k + 1..=max_n),
            systematic: rng.gen_bool(0.5),
        };
        if shape.fits_budget() {
            return shape;
        }
    }
}

pub fn random_matrix(rng: &mut impl Rng, shape: Shape) -> GenMatrix {
    loop {
        let entries: Vec<u32> = (0..shape.k * shape.n)
            .map(|_| rng.gen_range(0..shape.q))
            .collect();
        if let Some(g) = matrix_from_entries(shape, &entries) {
            return g;
        }
    }
}

/// Zero patterns of the codewords `uG` over all messages `u` with `u_i ≠ 0`.
/// A server set recovers object `i` iff it is contained in none of them: two
/// messages differing in coordinate `i` must then differ on the set.
pub fn message_zero_sets(g: &GenMatrix, i: usize) -> Vec<u64> {
    let f = g.field();
    let (k, n, q) = (g.k(), g.n(), f.q());
    let mut out = Vec::new();
    let mut msg = vec![0u32; k];
    loop {
        if msg[i] != 0 {
            let mut zeros = 0u64;
            for j in 0..n {
                let mut acc = FieldElement::ZERO;
                for (r, &u) in msg.iter().enumerate() {
                    let term = f
                        .mul(FieldElement::from_raw(u), g.matrix().get(r, j))
                        .unwrap();
                    acc = f.add(acc, term).unwrap();
                }
                if acc.is_zero() {
                    zeros |= 1 << j;
                }
            }
            out.push(zeros);
        }
        let mut pos = 0;
        loop {
            if pos == k {
                out.sort_unstable();
                out.dedup();
                return out;
            }
            msg[pos] += 1;
            if msg[pos] < q {
                break;
            }
            msg[pos] = 0;
            pos += 1;
        }
    }
}

pub fn oracle_recovers(zero_sets: &[u64], servers: u64) -> bool {
    zero_sets.iter().all(|z| servers & !z != 0)
}

/// Smallest number of linearly dependent columns.
pub fn oracle_dual_distance(g: &GenMatrix) -> usize {
    let n = g.n();
    (1u64..1 << n)
        .filter(|&m| {
            let cols: Vec<usize> = ServerSet::from_mask(m).indices().collect();
            g.matrix().select_columns(&cols).rank() < cols.len()
        })
        .map(|m| m.count_ones() as usize)
        .min()
        .unwrap_or(usize::MAX)
}

/// Recovery-set characterizations, size bounds and profile structure.
pub fn check_recovery(g: &GenMatrix) -> Check {
    let n = g.n();
    let dual = lib(dual_code(g))?;
    ensure!(
        dual.d_perp == oracle_dual_distance(g),
        "dual distance {} but the smallest dependent column set has {}",
        dual.d_perp,
        oracle_dual_distance(g)
    );
    let criterion = if g.is_systematic() {
        Some(lib(SystematicCriterion::new(g))?)
    } else {
        None
    };
    for i in 0..g.k() {
        let zero_sets = message_zero_sets(g, i);
        let via_dual = lib(recovery_sets_via_dual(g, i))?;
        let minimal = lib(minimal_recovery_sets(g, i))?;
        let all = lib(all_recovery_sets(g, i))?;
        let profile = lib(object_profile(g, i))?;
        let mut truth_family = Vec::new();
        for mask in 1u64..1 << n {
            let s = ServerSet::from_mask(mask);
            let truth = oracle_recovers(&zero_sets, mask);
            if truth {
                truth_family.push(s);
            }
            ensure!(
                is_recovery_set(g, i, s) == truth,
                "span test wrong for object {} and {s}",
                i + 1
            );
            let dual_route = via_dual.iter().any(|r| r.is_subset_of(s));
            ensure!(
                dual_route == truth,
                "dual-codeword route wrong for object {} and {s}",
                i + 1
            );
            if let Some(c) = &criterion {
                ensure!(
                    c.is_recovery_set(i, s) == truth,
                    "systematic criterion wrong for object {} and {s}",
                    i + 1
                );
            }
        }
        truth_family.sort();
        ensure!(all == truth_family, "R_all of object {} differs", i + 1);
        for r in &all {
            for j in 0..n {
                ensure!(
                    all.binary_search(&r.with(j)).is_ok(),
                    "not upward closed at {r} + {}",
                    j + 1
                );
            }
            ensure!(
                r.len() + 1 >= profile.delta1,
                "{r} smaller than delta1 - 1 = {}",
                profile.delta1 - 1
            );
            if g.is_systematic() {
                ensure!(
                    r.contains(i) || r.len() + 1 >= dual.d_perp,
                    "{r} recovers {} but is smaller than d_perp - 1",
                    i + 1
                );
            }
        }
        for r in &minimal {
            ensure!(all.binary_search(r).is_ok(), "minimal {r} does not recover");
            ensure!(
                !all.iter().any(|s| s != r && s.is_subset_of(*r)),
                "{r} is not minimal"
            );
            if g.is_systematic() {
                ensure!(
                    *r == ServerSet::from_indices([i]) || r.len() + 1 >= dual.d_perp,
                    "minimal {r} violates the dual-distance size bound"
                );
            }
        }
        ensure!(
            all.iter()
                .all(|s| minimal.iter().any(|m| m.is_subset_of(*s))),
            "some recovery set of object {} contains no minimal one",
            i + 1
        );
        let smallest = all.iter().map(|s| s.len()).min().unwrap_or(0);
        ensure!(
            profile.delta1 == smallest + 1,
            "delta1 = {} but the smallest recovery set has {smallest} servers",
            profile.delta1
        );
        let count = all.iter().filter(|s| s.len() == smallest).count() as u64;
        ensure!(
            count <= profile.omega,
            "{count} smallest recovery sets but omega = {}",
            profile.omega
        );
        ensure!(
            profile.gamma_set.iter().all(|&w| (2..=n + 1).contains(&w)),
            "weights {:?} outside [2, n+1]",
            profile.gamma_set
        );
        if g.is_systematic() {
            ensure!(
                profile.delta1 == 2,
                "systematic but delta1 = {}",
                profile.delta1
            );
        }
    }
    if g.is_systematic() && dual.d_perp >= 3 {
        let report = lib(systematic_profile_check(g))?;
        ensure!(
            report.holds,
            "profile conclusion fails at {:?}",
            report.counterexample
        );
        for p in lib(object_profiles(g))? {
            ensure!(
                p.delta1 == 2 && p.omega == 1 && p.delta2 >= dual.d_perp,
                "object {} has profile ({}, {}, {})",
                p.object + 1,
                p.delta1,
                p.omega,
                p.delta2
            );
        }
    }
    Ok(())
}

fn mutual(a: &Polytope, b: &Polytope) -> Result<bool, String> {
    Ok(lib(contains(a, b))?.contained && lib(contains(b, a))?.contained)
}

fn inside(outer: &Polytope, inner: &Polytope, what: &str) -> Check {
    let c = lib(contains(outer, inner))?;
    ensure!(c.contained, "{what}: witness {:?}", c.certificate);
    Ok(())
}

fn rates(v: Vec<Rational>) -> RateVector {
    RateVector::new(v).expect("nonnegative rates")
}

/// A boundary point of `p` maximizing a random positive objective.
fn boundary_point(rng: &mut impl Rng, p: &Polytope) -> Result<Vec<Rational>, String> {
    let c: Vec<Rational> = (0..p.dim()).map(|_| rat(rng.gen_range(1..=4))).collect();
    match lib(lp_solve_nonneg(&c, p.halfspaces(), Sense::Maximize))? {
        LpOutcome::Optimal { point, .. } => Ok(point),
        other => Err(format!("region LP returned {other:?}")),
    }
}

/// Region-level identities on an instance small enough to list `R^all`.
pub fn check_regions(g: &GenMatrix, rng: &mut impl Rng) -> Check {
    let (k, n) = (g.k(), g.n());
    let one = Rational::one();
    let min_sys = lib(RecoverySystem::minimal(g))?;
    let all_sys = lib(RecoverySystem::all(g))?;
    let exact = lib(exact_region(&min_sys))?;
    let exact_all = lib(exact_region(&all_sys))?;
    ensure!(
        mutual(&exact, &exact_all)?,
        "minimal and full regions differ"
    );

    // random minimal sets plus a few redundant ones
    let families = min_sys
        .families()
        .iter()
        .zip(all_sys.families())
        .map(|(min, all)| {
            let mut kept: Vec<ServerSet> =
                min.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
            if kept.is_empty() {
                kept.push(*min.choose(rng).unwrap());
            }
            let extra: Vec<ServerSet> = all.iter().copied().filter(|s| !min.contains(s)).collect();
            kept.extend(extra.choose_multiple(rng, 2));
            kept
        })
        .collect();
    let sub = lib(RecoverySystem::custom(g, families))?;
    let sub_region = lib(exact_region(&sub))?;
    inside(
        &exact,
        &sub_region,
        "sub-system region escapes the full region",
    )?;

    let vars: usize = min_sys.families().iter().map(Vec::len).sum();
    if vars <= AUTO_FM_MAX_VARS {
        let opts = FmOptions {
            row_cap: AUTO_FM_ROW_CAP,
        };
        match exact_region_by(&min_sys, Projection::Elimination(opts)) {
            Ok(fm) => {
                let hull = lib(exact_region_by(&min_sys, Projection::Hull))?;
                ensure!(
                    mutual(&fm, &hull)?,
                    "elimination and hull projections differ"
                );
            }
            Err(srr::Error::ResourceLimit(_)) => {}
            Err(e) => return Err(e.to_string()),
        }
    }

    let tcb = lib(tcb_region(k, n, min_sys.min_set_size()))?;
    inside(
        &tcb,
        &exact,
        "exact region exceeds the total capacity bound",
    )?;
    let ddb2 = lib(ddb2_for(g))?;
    inside(&ddb2, &exact, "exact region exceeds the second dual bound")?;
    if g.is_systematic() {
        let ddb1 = lib(ddb1_for(g))?;
        inside(&ddb1, &exact, "exact region exceeds the first dual bound")?;
        ensure!(
            lib(compare(&exact, &ddb1))?.contains_exact,
            "compare disagrees with contains"
        );
        if lib(dual_code(g))?.d_perp >= 3 {
            inside(&ddb1, &ddb2, "second dual bound not inside the first")?;
        }
    }

    for _ in 0..3 {
        let edge = boundary_point(rng, &exact)?;
        let mut probes = vec![edge.clone()];
        let outward: Vec<Rational> = edge.iter().map(|x| x * ratio(8, 7)).collect();
        if edge.iter().any(|x| !x.is_zero()) {
            probes.push(outward);
        }
        probes.push(
            (0..k)
                .map(|_| ratio(rng.gen_range(0..=3 * n as i64), rng.gen_range(1..=3)))
                .collect(),
        );
        for lam in probes {
            let rv = rates(lam.clone());
            let m = lib(membership(&min_sys, &rv, &one))?;
            ensure!(
                m.is_feasible() == exact.contains_point(&lam),
                "region and LP membership disagree at {lam:?}"
            );
            ensure!(
                lib(membership(&all_sys, &rv, &one))?.is_feasible() == m.is_feasible(),
                "full system disagrees at {lam:?}"
            );
            if lib(membership(&sub, &rv, &one))?.is_feasible() {
                ensure!(
                    m.is_feasible(),
                    "sub-system serves {lam:?} but the full one does not"
                );
            }
            if let srr::region::Membership::Feasible(alloc) = &m {
                ensure!(
                    alloc.weighted_size_sum() <= rat(n as i64),
                    "allocation uses more than n server units"
                );
                let smaller: Vec<Rational> = lam
                    .iter()
                    .map(|x| x * ratio(rng.gen_range(0..=4), 4))
                    .collect();
                ensure!(
                    lib(membership(&min_sys, &rates(smaller.clone()), &one))?.is_feasible(),
                    "not downward closed at {smaller:?}"
                );
            }
            let mu = [ratio(1, 2), rat(1), rat(2), rat(3)]
                .choose(rng)
                .unwrap()
                .clone();
            let direct = lib(membership(&min_sys, &rv, &mu))?.is_feasible();
            let scaled = rv.scaled(&mu.recip());
            ensure!(
                direct == lib(membership(&min_sys, &scaled, &one))?.is_feasible(),
                "capacity scaling fails at {lam:?} with mu = {mu}"
            );
            ensure!(
                direct == exact.contains_point(scaled.lambdas()),
                "scaled membership disagrees with the region at {lam:?}"
            );
        }
    }
    Ok(())
}

/// `min{t, 1}`.
pub fn clipped(t: &Rational) -> Rational {
    if *t > Rational::one() {
        Rational::one()
    } else {
        t.clone()
    }
}

/// Checks a separable bound against a direct evaluation on a rational grid:
/// the value, the cell expansion and the region must all agree.
pub fn check_encoding(
    sep: &SeparableBound,
    direct: impl Fn(&[Rational]) -> Rational,
    grid_max: i64,
) -> Check {
    let k = sep.k();
    let cells = lib(sep.cells())?;
    let region = lib(sep.region())?;
    let steps: Vec<Rational> = (0..=2 * grid_max).map(|t| ratio(t, 2)).collect();
    let mut idx = vec![0usize; k];
    loop {
        let lam: Vec<Rational> = idx.iter().map(|&t| steps[t].clone()).collect();
        let value = direct(&lam);
        ensure!(sep.lhs(&lam) == value, "value differs at {lam:?}");
        let holds = value <= sep.rhs;
        ensure!(
            cells.iter().all(|h| h.satisfied_by(&lam)) == holds,
            "cell expansion differs at {lam:?}"
        );
        ensure!(
            region.contains_point(&lam) == holds,
            "region differs at {lam:?}"
        );
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(());
            }
            idx[pos] += 1;
            if idx[pos] < steps.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// The three bounds of `g` against their direct formulas.
pub fn check_bound_encodings(g: &GenMatrix) -> Check {
    let n = g.n();
    let grid = if g.k() <= 3 { 2 } else { 1 };
    let profiles = lib(object_profiles(g))?;
    let sep = lib(BoundSpec::Ddb2 {
        n,
        profiles: profiles.clone(),
    }
    .separable())?;
    check_encoding(
        &sep,
        |lam| {
            lam.iter()
                .zip(&profiles)
                .map(|(x, p)| {
                    let omega_ell = rat(p.omega as i64) * clipped(x);
                    rat(p.delta2 as i64 - 1) * (x - &omega_ell)
                        + rat(p.delta1 as i64 - 1) * omega_ell
                })
                .sum()
        },
        grid,
    )?;
    let d_perp = lib(dual_code(g))?.d_perp;
    let sep = lib(BoundSpec::Ddb1 {
        k: g.k(),
        n,
        d_perp,
    }
    .separable())?;
    check_encoding(
        &sep,
        |lam| {
            lam.iter()
                .map(|x| {
                    let single = clipped(x);
                    &single + rat(d_perp as i64 - 1) * (x - &single)
                })
                .sum()
        },
        grid,
    )?;
    let m = lib(RecoverySystem::minimal(g))?.min_set_size();
    let sep = lib(BoundSpec::Tcb {
        k: g.k(),
        n,
        min_set_size: m,
    }
    .separable())?;
    check_encoding(
        &sep,
        |lam| lam.iter().sum::<Rational>() * rat(m as i64),
        grid,
    )
}

/// Every instance-level property on one matrix.
pub fn check_instance(g: &GenMatrix, rng: &mut impl Rng) -> Check {
    check_recovery(g)?;
    check_bound_encodings(g)?;
    if regions_affordable(g) {
        check_regions(g, rng)?;
    }
    Ok(())
}

/// Parses `[(num, den), …]` into rationals.
pub fn point(v: &[(i64, i64)]) -> Vec<Rational> {
    v.iter().map(|&(a, b)| ratio(a, b)).collect()
}

pub fn fixes(pairs: &[(usize, i64)]) -> BTreeMap<usize, Rational> {
    pairs.iter().map(|&(i, v)| (i, rat(v))).collect()
}
