//! Outer bounds on the service rate region: total capacity and the first and
//! second dual distance bounds, plus containment and sharpness comparison.

use std::fmt;
use std::str::FromStr;

use num::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gfmatrix::GenMatrix;
use crate::lincode::{dual_code, min_distance, object_profiles, ObjectProfile};
use crate::ratpoly::{contains, remove_redundant, Halfspace, Polytope, Rational};
use crate::region::ell;

/// Largest number of objects for which the `2^k` cell expansion is done.
pub const MAX_CELL_OBJECTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Tcb,
    Ddb1,
    Ddb2,
}

impl BoundKind {
    pub const ALL: [BoundKind; 3] = [BoundKind::Tcb, BoundKind::Ddb1, BoundKind::Ddb2];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Tcb => "tcb",
            BoundKind::Ddb1 => "ddb1",
            BoundKind::Ddb2 => "ddb2",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::invalid(format!("unknown bound `{s}` (expected tcb, ddb1 or ddb2)"))
            })
    }
}

/// The inequality `Σ_i (a_i λ_i + b_i ℓ_i) ≤ rhs` with `ℓ_i = min{λ_i, 1}`
/// and every `b_i ≤ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparableBound {
    pub lambda: Vec<Rational>,
    pub ell: Vec<Rational>,
    pub rhs: Rational,
}

impl SeparableBound {
    pub fn new(lambda: Vec<Rational>, ell: Vec<Rational>, rhs: Rational) -> Result<Self> {
        if lambda.len() != ell.len() {
            return Err(Error::invalid(format!(
                "{} rate coefficients but {} capped-rate coefficients",
                lambda.len(),
                ell.len()
            )));
        }
        if let Some(b) = ell.iter().find(|b| b.is_positive()) {
            return Err(Error::invalid(format!(
                "capped-rate coefficient {b} is positive; the bound would not be convex"
            )));
        }
        Ok(SeparableBound { lambda, ell, rhs })
    }

    pub fn k(&self) -> usize {
        self.lambda.len()
    }

    /// Left-hand side at `lam`, evaluated with `min{λ_i, 1}` directly.
    pub fn lhs(&self, lam: &[Rational]) -> Rational {
        (0..self.k()).fold(Rational::zero(), |acc, i| {
            acc + &self.lambda[i] * &lam[i] + &self.ell[i] * ell(&lam[i])
        })
    }

    pub fn satisfied_by(&self, lam: &[Rational]) -> bool {
        self.lhs(lam) <= self.rhs
    }

    /// The `2^k` linear cells: for `i` in the mask the `λ_i > 1` branch
    /// `a_i λ_i + b_i`, otherwise `(a_i + b_i) λ_i`.
    pub fn cells(&self) -> Result<Vec<Halfspace>> {
        let k = self.k();
        if k > MAX_CELL_OBJECTS {
            return Err(Error::UnsupportedDimension(k));
        }
        Ok((0u32..1 << k)
            .map(|mask| {
                let mut bound = self.rhs.clone();
                let coeffs = (0..k)
                    .map(|i| {
                        if mask >> i & 1 == 1 {
                            bound -= &self.ell[i];
                            self.lambda[i].clone()
                        } else {
                            &self.lambda[i] + &self.ell[i]
                        }
                    })
                    .collect();
                Halfspace::le(coeffs, bound)
            })
            .collect())
    }

    /// `{λ ≥ 0 : the inequality holds}`, irredundant.
    pub fn region(&self) -> Result<Polytope> {
        let k = self.k();
        let mut hs = self.cells()?;
        hs.extend((0..k).map(|i| Halfspace::nonneg(k, i)));
        Ok(remove_redundant(&Polytope::new(k, hs)?))
    }
}

/// Parameters of one of the three bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundSpec {
    /// `Σ λ_i ≤ n / M` with `M` the smallest recovery-set size.
    Tcb {
        k: usize,
        n: usize,
        min_set_size: usize,
    },
    Ddb1 {
        k: usize,
        n: usize,
        d_perp: usize,
    },
    Ddb2 {
        n: usize,
        profiles: Vec<ObjectProfile>,
    },
}

fn int(v: usize) -> Rational {
    Rational::from_integer(v.into())
}

impl BoundSpec {
    pub fn kind(&self) -> BoundKind {
        match self {
            BoundSpec::Tcb { .. } => BoundKind::Tcb,
            BoundSpec::Ddb1 { .. } => BoundKind::Ddb1,
            BoundSpec::Ddb2 { .. } => BoundKind::Ddb2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BoundSpec::Tcb { min_set_size, .. } if *min_set_size < 1 => Err(Error::invalid(
                "smallest recovery-set size must be at least 1",
            )),
            BoundSpec::Ddb1 { d_perp, .. } if *d_perp < 2 => {
                Err(Error::invalid(format!("dual distance {d_perp} < 2")))
            }
            BoundSpec::Ddb2 { profiles, .. } => {
                if let Some(p) = profiles
                    .iter()
                    .find(|p| !(p.delta2 >= p.delta1 && p.delta1 >= 2 && p.omega >= 1))
                {
                    return Err(Error::invalid(format!(
                        "object {} has inconsistent profile (delta1 {}, delta2 {}, omega {})",
                        p.object + 1,
                        p.delta1,
                        p.delta2,
                        p.omega
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// The bound as a single separable inequality.
    pub fn separable(&self) -> Result<SeparableBound> {
        self.validate()?;
        match self {
            BoundSpec::Tcb { k, n, min_set_size } => SeparableBound::new(
                vec![int(*min_set_size); *k],
                vec![Rational::zero(); *k],
                int(*n),
            ),
            BoundSpec::Ddb1 { k, n, d_perp } => SeparableBound::new(
                vec![int(d_perp - 1); *k],
                vec![-int(d_perp - 2); *k],
                int(*n),
            ),
            BoundSpec::Ddb2 { n, profiles } => SeparableBound::new(
                profiles.iter().map(|p| int(p.delta2 - 1)).collect(),
                profiles
                    .iter()
                    .map(|p| -(int(p.delta2 - p.delta1) * Rational::from_integer(p.omega.into())))
                    .collect(),
                int(*n),
            ),
        }
    }

    pub fn region(&self) -> Result<Polytope> {
        self.separable()?.region()
    }
}

/// `Σ λ_i ≤ n / M` over `k` objects.
pub fn tcb_halfspace(k: usize, n: usize, min_set_size: usize) -> Result<Halfspace> {
    if min_set_size < 1 {
        return Err(Error::invalid(
            "smallest recovery-set size must be at least 1",
        ));
    }
    Ok(Halfspace::le(
        vec![Rational::from_integer(1.into()); k],
        Rational::new(n.into(), min_set_size.into()),
    ))
}

pub fn tcb_region(k: usize, n: usize, min_set_size: usize) -> Result<Polytope> {
    BoundSpec::Tcb { k, n, min_set_size }.region()
}

/// The first dual distance bound for a systematic generator with dual
/// distance `d_perp`.
pub fn ddb1_region(k: usize, n: usize, d_perp: usize) -> Result<Polytope> {
    BoundSpec::Ddb1 { k, n, d_perp }.region()
}

fn require_systematic(g: &GenMatrix) -> Result<()> {
    if g.is_systematic() {
        Ok(())
    } else {
        Err(Error::precondition(
            "the first dual distance bound requires a systematic generator matrix; use ddb2",
        ))
    }
}

/// [`ddb1_region`] with the parameters of `g`, which must be systematic.
pub fn ddb1_for(g: &GenMatrix) -> Result<Polytope> {
    require_systematic(g)?;
    ddb1_region(g.k(), g.n(), dual_code(g)?.d_perp)
}

/// The first dual distance bound specialized to a systematic MDS code,
/// where the dual distance is `k + 1`.
pub fn mds_bound_region(g: &GenMatrix) -> Result<Polytope> {
    require_systematic(g)?;
    let dist = min_distance(g)?;
    if !dist.mds {
        return Err(Error::precondition(format!(
            "code is not MDS: d = {} but n - k + 1 = {}",
            dist.d,
            g.n() - g.k() + 1
        )));
    }
    let d_perp = dual_code(g)?.d_perp;
    if d_perp != g.k() + 1 {
        return Err(Error::invariant(format!(
            "MDS code with dual distance {d_perp} != k + 1 = {}",
            g.k() + 1
        )));
    }
    ddb1_region(g.k(), g.n(), d_perp)
}

/// The second dual distance bound for the given per-object profiles.
pub fn ddb2_region(profiles: &[ObjectProfile], n: usize) -> Result<Polytope> {
    BoundSpec::Ddb2 {
        n,
        profiles: profiles.to_vec(),
    }
    .region()
}

pub fn ddb2_for(g: &GenMatrix) -> Result<Polytope> {
    ddb2_region(&object_profiles(g)?, g.n())
}

/// Containment of an exact region in a bound region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundComparison {
    pub contains_exact: bool,
    /// Mutual containment.
    pub sharp: bool,
    /// A point of the exact region outside the bound when not contained,
    /// otherwise a point of the bound outside the exact region when not sharp.
    pub witness: Option<Vec<Rational>>,
}

pub fn compare(exact: &Polytope, bound: &Polytope) -> Result<BoundComparison> {
    if exact.dim() != bound.dim() {
        return Err(Error::invalid(format!(
            "exact region has dimension {} but the bound has {}",
            exact.dim(),
            bound.dim()
        )));
    }
    let inner = contains(bound, exact)?;
    if !inner.contained {
        return Ok(BoundComparison {
            contains_exact: false,
            sharp: false,
            witness: inner.certificate,
        });
    }
    let outer = contains(exact, bound)?;
    Ok(BoundComparison {
        contains_exact: true,
        sharp: outer.contained,
        witness: outer.certificate,
    })
}
