//! Fourier–Motzkin projection.
//!
//! Rows are kept as primitive integer vectors. Equalities that mention an
//! eliminated variable are used as substitutions first. Each remaining
//! variable is then eliminated by combining every row where it is positive
//! with every row where it is negative, choosing the variable with the
//! smallest `#positive × #negative` product each round.
//!
//! Two cheap prunings run every round: rows that are positive multiples of
//! each other collapse to the tightest one, and a combined row built from
//! more than `t + 1` input rows after `t` eliminations is dropped
//! (Chernikov's rule; such rows are always implied by the others). Full LP
//! redundancy removal is left to the caller.

use std::collections::HashMap;

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Signed, Zero};

use super::halfspace::{Halfspace, Relation};
use super::rational::Rational;
use crate::error::{Error, Result};

/// Default limit on the number of rows alive at any elimination stage.
pub const DEFAULT_ROW_CAP: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FmOptions {
    pub row_cap: usize,
}

impl Default for FmOptions {
    fn default() -> Self {
        FmOptions {
            row_cap: DEFAULT_ROW_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Ancestors(Vec<u64>);

impl Ancestors {
    fn single(i: usize, words: usize) -> Self {
        let mut v = vec![0u64; words];
        v[i / 64] |= 1 << (i % 64);
        Ancestors(v)
    }

    fn union(&self, other: &Ancestors) -> Ancestors {
        Ancestors(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<BigInt>,
    bound: BigInt,
    eq: bool,
    anc: Ancestors,
}

impl Row {
    fn from_halfspace(h: &Halfspace) -> Row {
        let n = h.normalized();
        Row {
            coeffs: n.coeffs.iter().map(|c| c.to_integer()).collect(),
            bound: n.bound.to_integer(),
            eq: n.relation == Relation::Eq,
            anc: Ancestors(Vec::new()),
        }
    }

    fn normalize(&mut self) {
        let mut g = self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            g = self.bound.abs();
        } else {
            g = g.gcd(&self.bound);
        }
        if g.is_zero() || g.is_one() {
            return;
        }
        for c in self.coeffs.iter_mut() {
            *c = &*c / &g;
        }
        self.bound = &self.bound / &g;
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `self·a + other·b`, for nonnegative multipliers on inequalities.
    fn combine(&self, a: &BigInt, other: &Row, b: &BigInt) -> Row {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x * a + y * b)
            .collect();
        let mut row = Row {
            coeffs,
            bound: &self.bound * a + &other.bound * b,
            eq: self.eq && other.eq,
            anc: self.anc.union(&other.anc),
        };
        row.normalize();
        row
    }
}

/// Projects `system` onto the variables not listed in `drop`.
///
/// The result is expressed over the kept variables in increasing index
/// order. An empty projection is returned as the single row `0 ≤ −1`.
pub fn fm_eliminate(
    system: &[Halfspace],
    drop: &[usize],
    opts: FmOptions,
) -> Result<Vec<Halfspace>> {
    let Some(dim) = system.first().map(Halfspace::dim) else {
        return Ok(Vec::new());
    };
    if let Some(h) = system.iter().find(|h| h.dim() != dim) {
        return Err(Error::invalid(format!(
            "row of dimension {} in a {dim}-dimensional system",
            h.dim()
        )));
    }
    if let Some(&v) = drop.iter().find(|&&v| v >= dim) {
        return Err(Error::invalid(format!("variable {v} out of range")));
    }
    let mut dropped = vec![false; dim];
    for &v in drop {
        dropped[v] = true;
    }
    let keep: Vec<usize> = (0..dim).filter(|&v| !dropped[v]).collect();
    let infeasible = || vec![Halfspace::infeasible(keep.len())];

    let mut rows: Vec<Row> = system.iter().map(Row::from_halfspace).collect();

    // Substitute equalities into everything else.
    loop {
        let pick = rows.iter().enumerate().find_map(|(r, row)| {
            if !row.eq {
                return None;
            }
            (0..dim)
                .find(|&v| dropped[v] && !row.coeffs[v].is_zero())
                .map(|v| (r, v))
        });
        let Some((r, v)) = pick else { break };
        let mut eq = rows.swap_remove(r);
        if eq.coeffs[v].is_negative() {
            for c in eq.coeffs.iter_mut() {
                *c = -&*c;
            }
            eq.bound = -&eq.bound;
        }
        let a = eq.coeffs[v].clone();
        for row in rows.iter_mut() {
            let c = row.coeffs[v].clone();
            if c.is_zero() {
                continue;
            }
            // a·row − c·eq; a > 0 keeps the direction of inequalities
            for (x, y) in row.coeffs.iter_mut().zip(&eq.coeffs) {
                *x = &*x * &a - y * &c;
            }
            row.bound = &row.bound * &a - &eq.bound * &c;
            row.normalize();
        }
    }

    // Trivial rows decide feasibility on their own.
    let mut kept = Vec::with_capacity(rows.len());
    for row in rows {
        if row.is_trivial() {
            let ok = if row.eq {
                row.bound.is_zero()
            } else {
                !row.bound.is_negative()
            };
            if !ok {
                return Ok(infeasible());
            }
        } else {
            kept.push(row);
        }
    }
    let mut rows = kept;
    let words = rows.len().div_ceil(64).max(1);
    for (i, row) in rows.iter_mut().enumerate() {
        row.anc = Ancestors::single(i, words);
    }
    let Some(mut rows) = dedup(rows) else {
        return Ok(infeasible());
    };

    let mut remaining: Vec<usize> = (0..dim).filter(|&v| dropped[v]).collect();
    let mut eliminated = 0usize;
    while !remaining.is_empty() {
        // leftover equalities on dropped variables cannot exist here
        let (pos_idx, v) = remaining
            .iter()
            .enumerate()
            .map(|(idx, &v)| {
                let pos = rows.iter().filter(|r| r.coeffs[v].is_positive()).count();
                let neg = rows.iter().filter(|r| r.coeffs[v].is_negative()).count();
                (pos * neg, idx, v)
            })
            .min()
            .map(|(_, idx, v)| (idx, v))
            .unwrap();
        remaining.remove(pos_idx);
        eliminated += 1;

        let (mut pos, mut neg, mut next) = (Vec::new(), Vec::new(), Vec::new());
        let mut limit = opts.row_cap;
        for row in rows {
            match row.coeffs[v].sign() {
                num::bigint::Sign::Plus => pos.push(row),
                num::bigint::Sign::Minus => neg.push(row),
                num::bigint::Sign::NoSign => next.push(row),
            }
        }
        for p in &pos {
            for q in &neg {
                let anc = p.anc.union(&q.anc);
                if anc.count() > eliminated + 1 {
                    continue;
                }
                let a = -&q.coeffs[v];
                let b = p.coeffs[v].clone();
                let row = p.combine(&a, q, &b);
                debug_assert!(row.coeffs[v].is_zero());
                if row.is_trivial() {
                    if row.bound.is_negative() {
                        return Ok(infeasible());
                    }
                    continue;
                }
                next.push(row);
                if next.len() > limit {
                    let Some(deduped) = dedup(next) else {
                        return Ok(infeasible());
                    };
                    next = deduped;
                    if next.len() > opts.row_cap {
                        return Err(over_cap(next.len(), eliminated, drop.len(), opts));
                    }
                    limit = opts.row_cap.max(2 * next.len());
                }
            }
        }
        let Some(deduped) = dedup(next) else {
            return Ok(infeasible());
        };
        rows = deduped;
        if rows.len() > opts.row_cap {
            return Err(over_cap(rows.len(), eliminated, drop.len(), opts));
        }
    }

    Ok(rows
        .into_iter()
        .map(|row| {
            let coeffs = keep
                .iter()
                .map(|&v| Rational::from_integer(row.coeffs[v].clone()))
                .collect();
            let bound = Rational::from_integer(row.bound);
            if row.eq {
                Halfspace::eq(coeffs, bound)
            } else {
                Halfspace::le(coeffs, bound)
            }
        })
        .collect())
}

fn over_cap(rows: usize, eliminated: usize, total: usize, opts: FmOptions) -> Error {
    Error::resource(format!(
        "Fourier-Motzkin produced {rows} rows while eliminating variable {eliminated} of {total} (cap {})",
        opts.row_cap
    ))
}

/// Collapses rows with identical (primitive) left-hand sides to the
/// tightest one. `None` when two equalities contradict each other.
fn dedup(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut slot: HashMap<(Vec<BigInt>, bool), usize> = HashMap::new();
    let mut out: Vec<Row> = Vec::new();
    for row in rows {
        let key = (row.coeffs.clone(), row.eq);
        match slot.get(&key) {
            None => {
                slot.insert(key, out.len());
                out.push(row);
            }
            Some(&i) => {
                let cur = &mut out[i];
                if row.eq {
                    if row.bound != cur.bound {
                        return None;
                    }
                } else if row.bound < cur.bound
                    || (row.bound == cur.bound && row.anc.count() < cur.anc.count())
                {
                    *cur = row;
                }
            }
        }
    }
    Some(out)
}
