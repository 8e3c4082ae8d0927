//! Linear-code quantities derived from a generator matrix: the dual code and
//! its minimum distance, the code's own minimum distance, and the per-object
//! profiles of the extended codes generated by `(G | e_i)`.
//!
//! Everything is computed by exhaustive codeword enumeration, which doubles
//! as the oracle for the weight sets. Enumeration is refused above
//! [`ENUMERATION_CAP`] codewords.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::gfield::FieldElement;
use crate::gfmatrix::{GenMatrix, Matrix};
use crate::serverset::ServerSet;

/// Maximum number of codewords any single enumeration may visit.
pub const ENUMERATION_CAP: u64 = 1 << 24;

fn check_cap(q: u32, dim: usize) -> Result<u64> {
    let mut count: u64 = 1;
    for _ in 0..dim {
        count = count.saturating_mul(q as u64);
        if count > ENUMERATION_CAP {
            return Err(Error::resource(format!(
                "enumerating {q}^{dim} codewords exceeds the cap of {ENUMERATION_CAP}"
            )));
        }
    }
    Ok(count)
}

/// Calls `visit` with every codeword of the row space of `gen` (including
/// zero), assuming the rows of `gen` are linearly independent.
pub fn for_each_codeword(gen: &Matrix, mut visit: impl FnMut(&[FieldElement])) -> Result<()> {
    check_cap(gen.field().q(), gen.rows())?;
    enumerate(gen, &mut visit);
    Ok(())
}

/// Odometer enumeration keeping one partial sum per level, so each step
/// costs O(len) amortized.
fn enumerate(gen: &Matrix, visit: &mut dyn FnMut(&[FieldElement])) {
    let field = gen.field();
    let q = field.q();
    let dim = gen.rows();
    let len = gen.cols();
    // sums[l] = Σ_{r < l} digit[r] · row_r
    let mut sums = vec![vec![FieldElement::ZERO; len]; dim + 1];
    let mut digits = vec![0u32; dim];
    loop {
        visit(&sums[dim]);
        // advance the odometer from the last digit
        let mut level = dim;
        loop {
            if level == 0 {
                return;
            }
            level -= 1;
            digits[level] += 1;
            if digits[level] < q {
                break;
            }
            digits[level] = 0;
        }
        for l in level..dim {
            let c = FieldElement::from_raw(digits[l]);
            let (lo, hi) = sums.split_at_mut(l + 1);
            for ((out, &b), &r) in hi[0].iter_mut().zip(&lo[l]).zip(gen.row(l)) {
                *out = field.add_raw(b, field.mul_raw(c, r));
            }
        }
    }
}

fn support(word: &[FieldElement]) -> ServerSet {
    ServerSet::from_indices(
        word.iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, _)| j),
    )
}

/// The dual code `C⊥` of the code generated by `G`.
#[derive(Debug, Clone)]
pub struct DualCode {
    /// `(n − k) × n` basis of the null space of `G`.
    pub basis: Matrix,
    /// Minimum weight of a nonzero dual codeword.
    pub d_perp: usize,
    /// Distinct supports of the nonzero dual codewords, sorted.
    pub supports: Vec<ServerSet>,
}

pub fn dual_code(g: &GenMatrix) -> Result<DualCode> {
    let basis = g.matrix().null_space();
    let mut supports = BTreeSet::new();
    for_each_codeword(&basis, |w| {
        let s = support(w);
        if !s.is_empty() {
            supports.insert(s);
        }
    })?;
    let supports: Vec<ServerSet> = supports.into_iter().collect();
    let d_perp = supports
        .iter()
        .map(|s| s.len())
        .min()
        .ok_or_else(|| Error::invariant("dual code has no nonzero codeword"))?;
    if d_perp < 2 {
        return Err(Error::invariant(format!("dual distance {d_perp} < 2")));
    }
    Ok(DualCode {
        basis,
        d_perp,
        supports,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeDistance {
    pub d: usize,
    /// `d = n − k + 1`.
    pub mds: bool,
}

pub fn min_distance(g: &GenMatrix) -> Result<CodeDistance> {
    let mut d = usize::MAX;
    for_each_codeword(g.matrix(), |w| {
        let wt = w.iter().filter(|v| !v.is_zero()).count();
        if wt > 0 {
            d = d.min(wt);
        }
    })?;
    Ok(CodeDistance {
        d,
        mds: d == g.n() - g.k() + 1,
    })
}

/// `G_i = (G | e_i)`, generating the extended code `C_i` of length `n + 1`.
pub fn extend(g: &GenMatrix, i: usize) -> Result<GenMatrix> {
    if i >= g.k() {
        return Err(Error::invalid(format!(
            "object index {} out of range 1..={}",
            i + 1,
            g.k()
        )));
    }
    GenMatrix::new(g.matrix().append_column(&g.unit(i))?)
}

/// Raw statistics of the codewords of `C_i⊥` whose support covers the
/// appended position `n + 1`.
#[derive(Debug, Clone)]
pub struct ExtendedDualScan {
    /// weight → number of such codewords (not divided by `q − 1`).
    pub weight_counts: BTreeMap<usize, u64>,
    /// Distinct supports with position `n + 1` removed.
    pub supports: BTreeSet<ServerSet>,
}

pub fn scan_extended_dual(g: &GenMatrix, i: usize) -> Result<ExtendedDualScan> {
    let gi = extend(g, i)?;
    let basis = gi.matrix().null_space();
    let last = g.n();
    let mut weight_counts = BTreeMap::new();
    let mut supports = BTreeSet::new();
    for_each_codeword(&basis, |w| {
        if w[last].is_zero() {
            return;
        }
        let s = support(w);
        *weight_counts.entry(s.len()).or_insert(0u64) += 1;
        supports.insert(s.without(last));
    })?;
    Ok(ExtendedDualScan {
        weight_counts,
        supports,
    })
}

/// Dual parameters of one object: the weight set `Γ_i` of dual codewords of
/// `C_i` covering position `n + 1`, its smallest and second-smallest weights
/// and the scalar-normalized count of minimum-weight ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectProfile {
    /// 0-based object index.
    pub object: usize,
    pub gamma_set: BTreeSet<usize>,
    pub gamma: usize,
    pub delta1: usize,
    /// Equals `delta1` when `gamma == 1`.
    pub delta2: usize,
    pub omega: u64,
    /// Distinct supports (without position `n + 1`) of the weight-`delta1`
    /// codewords, i.e. the recovery sets of size `delta1 − 1`.
    pub min_supports: Vec<ServerSet>,
}

pub fn object_profile(g: &GenMatrix, i: usize) -> Result<ObjectProfile> {
    let scan = scan_extended_dual(g, i)?;
    profile_from_scan(g, i, &scan)
}

pub(crate) fn profile_from_scan(
    g: &GenMatrix,
    i: usize,
    scan: &ExtendedDualScan,
) -> Result<ObjectProfile> {
    let gamma_set: BTreeSet<usize> = scan.weight_counts.keys().copied().collect();
    let mut weights = gamma_set.iter().copied();
    let delta1 = weights
        .next()
        .ok_or_else(|| Error::invariant(format!("object {} has empty weight set", i + 1)))?;
    let delta2 = weights.next().unwrap_or(delta1);
    let raw = scan.weight_counts[&delta1];
    let units = (g.field().q() - 1) as u64;
    if !raw.is_multiple_of(units) {
        return Err(Error::invariant(format!(
            "object {}: {raw} minimum-weight codewords is not a multiple of q - 1 = {units}",
            i + 1
        )));
    }
    let min_supports = scan
        .supports
        .iter()
        .copied()
        .filter(|s| s.len() + 1 == delta1)
        .collect();
    Ok(ObjectProfile {
        object: i,
        gamma: gamma_set.len(),
        gamma_set,
        delta1,
        delta2,
        omega: raw / units,
        min_supports,
    })
}

pub fn object_profiles(g: &GenMatrix) -> Result<Vec<ObjectProfile>> {
    (0..g.k()).map(|i| object_profile(g, i)).collect()
}

/// Outcome of checking that a systematic generator with `d⊥ ≥ 3` has
/// `δ_i¹ = 2`, `ω_i = 1` and `δ_i² ≥ d⊥` for every object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystematicProfileReport {
    pub d_perp: usize,
    pub holds: bool,
    /// First object (0-based) violating the conclusion.
    pub counterexample: Option<usize>,
    pub profiles: Vec<ObjectProfile>,
}

pub fn systematic_profile_check(g: &GenMatrix) -> Result<SystematicProfileReport> {
    if !g.is_systematic() {
        return Err(Error::precondition("generator matrix is not systematic"));
    }
    let d_perp = dual_code(g)?.d_perp;
    if d_perp < 3 {
        return Err(Error::precondition(format!("dual distance {d_perp} < 3")));
    }
    let profiles = object_profiles(g)?;
    let counterexample = profiles
        .iter()
        .find(|p| !(p.delta1 == 2 && p.omega == 1 && p.delta2 >= d_perp))
        .map(|p| p.object);
    Ok(SystematicProfileReport {
        d_perp,
        holds: counterexample.is_none(),
        counterexample,
        profiles,
    })
}
