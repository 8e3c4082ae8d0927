//! JSON shapes printed by the command-line front end.

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundComparison, BoundKind, SeparableBound};
use crate::error::{Error, Result};
use crate::gfmatrix::GenMatrix;
use crate::lincode::{CodeDistance, ObjectProfile};
use crate::ratpoly::{format_rational, parse_rational, Halfspace, Polytope, Rational, Relation};

pub fn rats(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

#[derive(Debug, Serialize)]
pub struct ProfileJson {
    pub object: usize,
    pub gamma_set: Vec<usize>,
    pub gamma: usize,
    pub delta1: usize,
    pub delta2: usize,
    pub omega: u64,
}

impl From<&ObjectProfile> for ProfileJson {
    fn from(p: &ObjectProfile) -> Self {
        ProfileJson {
            object: p.object + 1,
            gamma_set: p.gamma_set.iter().copied().collect(),
            gamma: p.gamma,
            delta1: p.delta1,
            delta2: p.delta2,
            omega: p.omega,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct InfoJson {
    pub q: u32,
    pub modulus: Option<u32>,
    pub k: usize,
    pub n: usize,
    pub systematic: bool,
    pub d: usize,
    pub d_perp: usize,
    pub mds: bool,
    pub profiles: Vec<ProfileJson>,
}

impl InfoJson {
    pub fn new(
        g: &GenMatrix,
        dist: CodeDistance,
        d_perp: usize,
        profiles: &[ObjectProfile],
    ) -> Self {
        InfoJson {
            q: g.field().q(),
            modulus: g.field().modulus_packed(),
            k: g.k(),
            n: g.n(),
            systematic: g.is_systematic(),
            d: dist.d,
            d_perp,
            mds: dist.mds,
            profiles: profiles.iter().map(ProfileJson::from).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FamilyJson {
    pub object: usize,
    pub sets: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize)]
pub struct RecoveryJson {
    pub system: &'static str,
    pub families: Vec<FamilyJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfspaceJson {
    pub coeffs: Vec<String>,
    pub bound: String,
    #[serde(default = "le", skip_serializing_if = "is_le")]
    pub relation: Relation,
}

fn le() -> Relation {
    Relation::Le
}

fn is_le(r: &Relation) -> bool {
    *r == Relation::Le
}

impl From<&Halfspace> for HalfspaceJson {
    fn from(h: &Halfspace) -> Self {
        HalfspaceJson {
            coeffs: rats(&h.coeffs),
            bound: format_rational(&h.bound),
            relation: h.relation,
        }
    }
}

impl HalfspaceJson {
    pub fn to_halfspace(&self) -> Result<Halfspace> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Halfspace {
            coeffs,
            bound: parse_rational(&self.bound)?,
            relation: self.relation,
        })
    }
}

/// A region over the named coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionJson {
    pub dim: usize,
    pub axes: Vec<String>,
    pub halfspaces: Vec<HalfspaceJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<String>>>,
}

impl RegionJson {
    pub fn new(axes: Vec<String>, p: &Polytope, vertices: Option<&[Vec<Rational>]>) -> Self {
        RegionJson {
            dim: p.dim(),
            axes,
            halfspaces: p.halfspaces().iter().map(HalfspaceJson::from).collect(),
            vertices: vertices.map(|vs| vs.iter().map(|v| rats(v)).collect()),
        }
    }

    pub fn to_polytope(&self) -> Result<Polytope> {
        let hs = self
            .halfspaces
            .iter()
            .map(HalfspaceJson::to_halfspace)
            .collect::<Result<Vec<_>>>()?;
        if hs.iter().any(|h| h.dim() != self.dim) {
            return Err(Error::invalid("halfspace dimension does not match `dim`"));
        }
        Polytope::new(self.dim, hs)
    }
}

#[derive(Debug, Serialize)]
pub struct BoundJson {
    pub kind: BoundKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub halfspaces: Option<Vec<HalfspaceJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contains_exact: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sharp: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

impl BoundJson {
    pub fn skipped(kind: BoundKind, reason: String) -> Self {
        BoundJson {
            kind,
            skipped: Some(reason),
            lambda: None,
            ell: None,
            rhs: None,
            halfspaces: None,
            vertices: None,
            contains_exact: None,
            sharp: None,
            witness: None,
        }
    }

    pub fn new(
        kind: BoundKind,
        sep: &SeparableBound,
        region: &Polytope,
        vertices: Option<&[Vec<Rational>]>,
        cmp: Option<&BoundComparison>,
    ) -> Self {
        BoundJson {
            kind,
            skipped: None,
            lambda: Some(rats(&sep.lambda)),
            ell: Some(rats(&sep.ell)),
            rhs: Some(format_rational(&sep.rhs)),
            halfspaces: Some(
                region
                    .halfspaces()
                    .iter()
                    .map(HalfspaceJson::from)
                    .collect(),
            ),
            vertices: vertices.map(|vs| vs.iter().map(|v| rats(v)).collect()),
            contains_exact: cmp.map(|c| c.contains_exact),
            sharp: cmp.map(|c| c.sharp),
            witness: cmp.and_then(|c| c.witness.as_deref().map(rats)),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BoundsJson {
    pub axes: Vec<String>,
    pub bounds: Vec<BoundJson>,
}
