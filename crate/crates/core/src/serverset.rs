use std::cmp::Ordering;
use std::fmt;

/// A set of servers stored as a bitmask; bit `j` is server `j + 1`.
///
/// Ordered by size first, then lexicographically by sorted indices, which is
/// the order used for every printed family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ServerSet(u64);

impl ServerSet {
    pub const EMPTY: ServerSet = ServerSet(0);

    pub const fn from_mask(mask: u64) -> Self {
        ServerSet(mask)
    }

    /// From 0-based indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        ServerSet(indices.into_iter().fold(0, |acc, j| acc | (1u64 << j)))
    }

    /// From 1-based server labels; `None` if a label is 0 or above 64.
    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Option<Self> {
        let mut mask = 0u64;
        for l in labels {
            if l == 0 || l > 64 {
                return None;
            }
            mask |= 1 << (l - 1);
        }
        Some(ServerSet(mask))
    }

    pub const fn mask(self) -> u64 {
        self.0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, j: usize) -> bool {
        self.0 >> j & 1 == 1
    }

    pub const fn is_subset_of(self, other: ServerSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn with(self, j: usize) -> ServerSet {
        ServerSet(self.0 | 1 << j)
    }

    pub const fn without(self, j: usize) -> ServerSet {
        ServerSet(self.0 & !(1 << j))
    }

    /// 0-based indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..64).filter(move |j| mask >> j & 1 == 1)
    }

    /// 1-based labels in increasing order.
    pub fn labels(self) -> Vec<usize> {
        self.indices().map(|j| j + 1).collect()
    }
}

impl Ord for ServerSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.indices().cmp(other.indices()))
    }
}

impl PartialOrd for ServerSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ServerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

/// Keeps the inclusion-minimal members of `family`, deduplicated and sorted.
pub fn minimal_members(family: impl IntoIterator<Item = ServerSet>) -> Vec<ServerSet> {
    let mut sets: Vec<ServerSet> = family.into_iter().collect();
    sets.sort();
    sets.dedup();
    let mut kept: Vec<ServerSet> = Vec::new();
    // Sorted by size, so any strict subset of `s` is already decided.
    for s in sets {
        if !kept.iter().any(|k| k.is_subset_of(s)) {
            kept.push(s);
        }
    }
    kept
}
