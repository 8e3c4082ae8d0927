//! Recovery sets: server subsets whose columns span a standard basis vector.
//!
//! `R_i^all` is enumerated directly from the span test for small `n`. The
//! inclusion-minimal family `R_i^min` always comes from the other route: a
//! set recovers object `i` iff it contains `σ(x) \ {n+1}` for some codeword
//! `x` of the dual of `(G | e_i)` with `n + 1 ∈ σ(x)`.

use crate::error::{Error, Result};
use crate::gfmatrix::{in_span, GenMatrix};
use crate::lincode::{dual_code, scan_extended_dual, DualCode};
use crate::serverset::{minimal_members, ServerSet};

/// Largest `n` for which `R_i^all` is materialized by scanning all subsets.
pub const SUBSET_SCAN_MAX_N: usize = 20;

/// Span test: does `servers` recover object `i` (0-based)?
pub fn is_recovery_set(g: &GenMatrix, i: usize, servers: ServerSet) -> bool {
    if servers.is_empty() || i >= g.k() {
        return false;
    }
    let cols: Vec<_> = servers.indices().map(|j| g.column(j)).collect();
    in_span(g.field(), &g.unit(i), &cols).expect("columns match the unit vector length")
}

fn check_object(g: &GenMatrix, i: usize) -> Result<()> {
    if i < g.k() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "object index {} out of range 1..={}",
            i + 1,
            g.k()
        )))
    }
}

/// Every subset of servers recovering object `i`, sorted.
pub fn all_recovery_sets(g: &GenMatrix, i: usize) -> Result<Vec<ServerSet>> {
    check_object(g, i)?;
    let n = g.n();
    if n > SUBSET_SCAN_MAX_N {
        return Err(Error::resource(format!(
            "enumerating all 2^{n} server subsets exceeds the limit of n <= {SUBSET_SCAN_MAX_N}; use --minimal"
        )));
    }
    let mut family: Vec<ServerSet> = (1u64..1 << n)
        .map(ServerSet::from_mask)
        .filter(|&s| is_recovery_set(g, i, s))
        .collect();
    family.sort();
    Ok(family)
}

/// `{σ(x) \ {n+1}}` over dual codewords `x` of the extended code covering
/// position `n + 1`, deduplicated and sorted.
pub fn recovery_sets_via_dual(g: &GenMatrix, i: usize) -> Result<Vec<ServerSet>> {
    check_object(g, i)?;
    let mut sets: Vec<ServerSet> = scan_extended_dual(g, i)?.supports.into_iter().collect();
    sets.sort();
    Ok(sets)
}

/// Inclusion-minimal recovery sets of object `i`, sorted.
pub fn minimal_recovery_sets(g: &GenMatrix, i: usize) -> Result<Vec<ServerSet>> {
    Ok(minimal_members(recovery_sets_via_dual(g, i)?))
}

/// Recovery test for systematic generators phrased on the dual code `C⊥`:
/// `R` recovers `i` iff `i ∈ R` or some dual codeword `x` has `i ∈ σ(x)` and
/// `σ(x) ⊆ R ∪ {i}`.
#[derive(Debug, Clone)]
pub struct SystematicCriterion {
    k: usize,
    dual: DualCode,
}

impl SystematicCriterion {
    pub fn new(g: &GenMatrix) -> Result<Self> {
        if !g.is_systematic() {
            return Err(Error::precondition(
                "dual-code recovery criterion requires a systematic generator matrix",
            ));
        }
        Ok(SystematicCriterion {
            k: g.k(),
            dual: dual_code(g)?,
        })
    }

    pub fn is_recovery_set(&self, i: usize, servers: ServerSet) -> bool {
        if i >= self.k {
            return false;
        }
        servers.contains(i)
            || self
                .dual
                .supports
                .iter()
                .any(|s| s.contains(i) && s.is_subset_of(servers.with(i)))
    }
}

pub fn systematic_recovery_check(g: &GenMatrix, i: usize, servers: ServerSet) -> Result<bool> {
    check_object(g, i)?;
    Ok(SystematicCriterion::new(g)?.is_recovery_set(i, servers))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    All,
    Minimal,
    Custom,
}

/// One nonempty family of recovery sets per object.
#[derive(Debug, Clone)]
pub struct RecoverySystem {
    matrix: GenMatrix,
    families: Vec<Vec<ServerSet>>,
    kind: SystemKind,
}

impl RecoverySystem {
    pub fn all(g: &GenMatrix) -> Result<Self> {
        let families = (0..g.k())
            .map(|i| all_recovery_sets(g, i))
            .collect::<Result<_>>()?;
        Ok(RecoverySystem {
            matrix: g.clone(),
            families,
            kind: SystemKind::All,
        })
    }

    pub fn minimal(g: &GenMatrix) -> Result<Self> {
        let families = (0..g.k())
            .map(|i| minimal_recovery_sets(g, i))
            .collect::<Result<_>>()?;
        Ok(RecoverySystem {
            matrix: g.clone(),
            families,
            kind: SystemKind::Minimal,
        })
    }

    /// A user-chosen system; every family must be nonempty and consist of
    /// recovery sets.
    pub fn custom(g: &GenMatrix, families: Vec<Vec<ServerSet>>) -> Result<Self> {
        if families.len() != g.k() {
            return Err(Error::invalid(format!(
                "{} families given for k = {} objects",
                families.len(),
                g.k()
            )));
        }
        let mut families = families;
        for (i, fam) in families.iter_mut().enumerate() {
            if fam.is_empty() {
                return Err(Error::invalid(format!(
                    "family of object {} is empty",
                    i + 1
                )));
            }
            if let Some(bad) = fam.iter().find(|&&s| !is_recovery_set(g, i, s)) {
                return Err(Error::invalid(format!(
                    "{bad} is not a recovery set for object {}",
                    i + 1
                )));
            }
            fam.sort();
            fam.dedup();
        }
        Ok(RecoverySystem {
            matrix: g.clone(),
            families,
            kind: SystemKind::Custom,
        })
    }

    /// The sub-system keeping the sets selected by `keep(i, set)`.
    pub fn restrict(&self, mut keep: impl FnMut(usize, ServerSet) -> bool) -> Result<Self> {
        let families = self
            .families
            .iter()
            .enumerate()
            .map(|(i, fam)| fam.iter().copied().filter(|&s| keep(i, s)).collect())
            .collect();
        Self::custom(&self.matrix, families)
    }

    pub fn matrix(&self) -> &GenMatrix {
        &self.matrix
    }

    pub fn families(&self) -> &[Vec<ServerSet>] {
        &self.families
    }

    pub fn family(&self, i: usize) -> &[ServerSet] {
        &self.families[i]
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    /// Smallest recovery-set size over the whole system.
    pub fn min_set_size(&self) -> usize {
        self.families
            .iter()
            .flatten()
            .map(|s| s.len())
            .min()
            .expect("families are nonempty")
    }

    /// Total number of `(object, set)` pairs.
    pub fn num_sets(&self) -> usize {
        self.families.iter().map(Vec::len).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lincode::object_profile;

    fn set(labels: &[usize]) -> ServerSet {
        ServerSet::from_labels(labels.iter().copied()).unwrap()
    }

    #[test]
    fn span_test_examples() {
        let g = fixtures::mds_4_2_gf3();
        assert!(is_recovery_set(&g, 0, set(&[3, 4])));
        assert!(!is_recovery_set(&g, 0, set(&[2])));
        assert!(is_recovery_set(&g, 0, set(&[1, 2])));
        assert!(!is_recovery_set(&g, 0, ServerSet::EMPTY));
    }

    #[test]
    fn all_sets_contain_listed_ones() {
        let g = fixtures::mds_4_2_gf3();
        let all1 = all_recovery_sets(&g, 0).unwrap();
        for s in [
            set(&[1]),
            set(&[2, 3]),
            set(&[2, 4]),
            set(&[3, 4]),
            set(&[2, 3, 4]),
        ] {
            assert!(all1.contains(&s), "{s}");
        }
        // every superset of {1}
        for mask in 0u64..16 {
            let s = ServerSet::from_mask(mask | 1);
            assert!(all1.contains(&s));
        }
        let all2 = all_recovery_sets(&g, 1).unwrap();
        for s in [
            set(&[2]),
            set(&[1, 3]),
            set(&[1, 4]),
            set(&[3, 4]),
            set(&[1, 3, 4]),
        ] {
            assert!(all2.contains(&s), "{s}");
        }
    }

    #[test]
    fn replicated_identity_object_two() {
        let g = fixtures::replicated_2x3_gf2();
        let expect: Vec<ServerSet> = {
            let mut v: Vec<_> = (0u64..8)
                .filter(|m| m & 0b010 != 0)
                .map(ServerSet::from_mask)
                .collect();
            v.sort();
            v
        };
        assert_eq!(all_recovery_sets(&g, 1).unwrap(), expect);
        assert_eq!(minimal_recovery_sets(&g, 1).unwrap(), vec![set(&[2])]);
        assert_eq!(
            minimal_recovery_sets(&g, 0).unwrap(),
            vec![set(&[1]), set(&[3])]
        );
    }

    #[test]
    fn minimal_sets_examples() {
        let g = fixtures::mds_4_2_gf3();
        assert_eq!(
            minimal_recovery_sets(&g, 0).unwrap(),
            vec![set(&[1]), set(&[2, 3]), set(&[2, 4]), set(&[3, 4])]
        );
        assert_eq!(
            minimal_recovery_sets(&g, 1).unwrap(),
            vec![set(&[2]), set(&[1, 3]), set(&[1, 4]), set(&[3, 4])]
        );
        let rm = fixtures::reed_muller_1_3();
        let singles: Vec<_> = minimal_recovery_sets(&rm, 3)
            .unwrap()
            .into_iter()
            .filter(|s| s.len() == 1)
            .collect();
        assert_eq!(singles.len(), 1);
    }

    /// Minimal sets by filtering the literal span-test family.
    #[test]
    fn minimal_sets_agree_with_brute_force() {
        for g in fixtures::all() {
            for i in 0..g.k() {
                let brute = minimal_members(all_recovery_sets(&g, i).unwrap());
                assert_eq!(minimal_recovery_sets(&g, i).unwrap(), brute);
            }
        }
    }

    #[test]
    fn dual_route_examples() {
        let g = fixtures::mds_4_2_gf3();
        let via = recovery_sets_via_dual(&g, 0).unwrap();
        assert!(via.contains(&set(&[1])));
        let p = object_profile(&g, 0).unwrap();
        let smallest_other = via
            .iter()
            .filter(|s| **s != set(&[1]))
            .map(|s| s.len())
            .min();
        assert_eq!(smallest_other, Some(2));
        assert_eq!(p.delta1, 2);
        for g in [fixtures::mds_6_3_gf7(), fixtures::gf7_3x5()] {
            for i in 0..g.k() {
                assert!(recovery_sets_via_dual(&g, i)
                    .unwrap()
                    .contains(&ServerSet::from_indices([i])));
            }
        }
    }

    #[test]
    fn systematic_criterion_examples() {
        let g = fixtures::mds_4_2_gf3();
        assert!(systematic_recovery_check(&g, 0, set(&[2, 3])).unwrap());
        assert!(systematic_recovery_check(&g, 0, set(&[1])).unwrap());
        assert!(!systematic_recovery_check(&g, 0, set(&[2])).unwrap());
        let g7 = fixtures::gf7_3x5();
        assert!(systematic_recovery_check(&g7, 0, set(&[4])).unwrap());
        assert!(is_recovery_set(&g7, 0, set(&[4])));
        assert!(!systematic_recovery_check(&g7, 1, set(&[5])).unwrap());
        assert!(matches!(
            systematic_recovery_check(&fixtures::reed_muller_1_3(), 0, set(&[1])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn subset_scan_cap() {
        use crate::gfield::FieldSpec;
        let f = FieldSpec::prime(2).unwrap();
        let rows: Vec<Vec<u32>> = (0..2)
            .map(|r| (0..25).map(|c| u32::from(c % 2 == r || c >= 2)).collect())
            .collect();
        let g = GenMatrix::from_rows(&f, &rows).unwrap();
        let Err(Error::ResourceLimit(msg)) = all_recovery_sets(&g, 0) else {
            panic!("n = 25 must exceed the subset scan limit");
        };
        assert!(msg.contains("--minimal"));
    }

    #[test]
    fn custom_system_validation() {
        let g = fixtures::mds_4_2_gf3();
        assert!(RecoverySystem::custom(&g, vec![vec![set(&[1])], vec![]]).is_err());
        assert!(RecoverySystem::custom(&g, vec![vec![set(&[2])], vec![set(&[2])]]).is_err());
        let sys = RecoverySystem::custom(&g, vec![vec![set(&[1])], vec![set(&[3, 4])]]).unwrap();
        assert_eq!(sys.kind(), SystemKind::Custom);
        assert_eq!(sys.min_set_size(), 1);
        let min = RecoverySystem::minimal(&g).unwrap();
        assert_eq!(min.num_sets(), 8);
        for fam in min.families() {
            for a in fam {
                assert!(fam.iter().all(|b| a == b || !b.is_subset_of(*a)));
            }
        }
    }
}
