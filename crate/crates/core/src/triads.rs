//! Reciprocal-pair reduction and shared-neighbor counting.
//!
//! Two journals are connected here iff each cites the other within the
//! year (loops never count). The count attached to a connected pair is the
//! number of third journals reciprocally tied to both — the complete
//! triads the pair participates in. Pairs with no shared neighbor keep an
//! explicit zero so later stages can tell "pair present, count 0" from
//! "pair absent".
//!
//! Counting intersects the sorted adjacency lists of each pair once, and
//! the per-pair results go into disjoint output slots, so any rayon worker
//! count produces identical output.

use rayon::prelude::*;
use thiserror::Error;

use crate::model::{JournalId, YearNetwork};
use crate::value::ValuedGraph;
use crate::{Count, Weight, Year};

#[derive(Error, Debug, PartialEq, Eq)]
pub enum TriadsError {
    #[error("per-pair counts sum to {sum}, which is not divisible by 3")]
    InconsistentCounts { sum: u64 },
}

/// Undirected view of one year's mutual citations: loop-free, with sorted
/// adjacency lists over the dense id range `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReciprocalGraph {
    year: Year,
    adj: Vec<Vec<JournalId>>,
    n_edges: usize,
}

impl ReciprocalGraph {
    /// Build directly from undirected pairs (tests, fixtures, oracles).
    /// Loops and duplicate pairs are ignored.
    pub fn from_edges(
        year: Year,
        n: usize,
        pairs: impl IntoIterator<Item = (JournalId, JournalId)>,
    ) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (a, b) in pairs {
            if a != b {
                adj[a.index()].push(b);
                adj[b.index()].push(a);
            }
        }
        Self::from_adjacency(year, adj)
    }

    fn from_adjacency(year: Year, mut adj: Vec<Vec<JournalId>>) -> Self {
        for neighbors in &mut adj {
            neighbors.sort_unstable();
            neighbors.dedup();
        }
        let n_edges = adj.iter().map(Vec::len).sum::<usize>() / 2;
        Self { year, adj, n_edges }
    }

    pub fn year(&self) -> Year {
        self.year
    }

    /// Size of the dense id range, isolates included.
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn degree(&self, id: JournalId) -> usize {
        self.adj[id.index()].len()
    }

    pub fn neighbors(&self, id: JournalId) -> &[JournalId] {
        &self.adj[id.index()]
    }

    pub fn contains_edge(&self, a: JournalId, b: JournalId) -> bool {
        self.adj[a.index()].binary_search(&b).is_ok()
    }

    /// Every edge once, as `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (JournalId, JournalId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(a, neighbors)| {
            let a = JournalId(a as u32);
            neighbors
                .iter()
                .copied()
                .filter(move |&b| a < b)
                .map(move |b| (a, b))
        })
    }
}

/// Reduce a year to its reciprocal graph: the pair `{i, j}` is connected
/// iff both arcs `i→j` and `j→i` are present.
pub fn reciprocal_graph(net: &YearNetwork, n: usize) -> ReciprocalGraph {
    reciprocal_graph_with_threshold(net, n, 1)
}

/// Same reduction, but an arc only counts when its weight reaches
/// `min_weight`.
pub fn reciprocal_graph_with_threshold(
    net: &YearNetwork,
    n: usize,
    min_weight: Weight,
) -> ReciprocalGraph {
    let mut adj = vec![Vec::new(); n];
    for ((cited, citing), w) in net.arcs() {
        // Each qualifying pair is seen twice, once per direction; act on
        // the (cited < citing) sighting only.
        if cited < citing && w >= min_weight && net.arc_weight(citing, cited) >= min_weight {
            adj[cited.index()].push(citing);
            adj[citing.index()].push(cited);
        }
    }
    ReciprocalGraph::from_adjacency(net.year(), adj)
}

/// Shared-neighbor counts for every reciprocal pair of one year,
/// zero-count pairs retained. Pairs are sorted by `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriadCountGraph {
    year: Year,
    n: usize,
    entries: Vec<(JournalId, JournalId, Count)>,
}

impl TriadCountGraph {
    pub fn year(&self) -> Year {
        self.year
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `(a, b, count)` with `a < b`, sorted by pair.
    pub fn entries(&self) -> &[(JournalId, JournalId, Count)] {
        &self.entries
    }

    /// Count for a pair in either endpoint order; `None` when the pair is
    /// not reciprocally connected this year.
    pub fn count(&self, a: JournalId, b: JournalId) -> Option<Count> {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.entries
            .binary_search_by_key(&key, |&(x, y, _)| (x, y))
            .ok()
            .map(|idx| self.entries[idx].2)
    }

    /// The same pairs and counts as a valued undirected graph, e.g. for
    /// Pajek export.
    pub fn to_valued_graph(&self) -> ValuedGraph<Count> {
        ValuedGraph::new(self.n, self.entries.iter().copied())
            .expect("triad count entries are unique loop-free pairs")
    }

    /// Assemble from raw entries (oracles, file readers). Entries are
    /// normalized to `a < b` and sorted.
    pub fn from_entries(
        year: Year,
        n: usize,
        entries: impl IntoIterator<Item = (JournalId, JournalId, Count)>,
    ) -> Self {
        let mut entries: Vec<_> = entries
            .into_iter()
            .map(|(a, b, c)| if a <= b { (a, b, c) } else { (b, a, c) })
            .collect();
        entries.sort_unstable_by_key(|&(a, b, _)| (a, b));
        Self { year, n, entries }
    }
}

/// Number of shared reciprocal neighbors for every reciprocal pair.
///
/// Runs on the ambient rayon pool; install a sized pool around the call to
/// pin the worker count. Output is identical for any worker count.
pub fn shared_neighbor_counts(g: &ReciprocalGraph) -> TriadCountGraph {
    let edges: Vec<(JournalId, JournalId)> = g.edges().collect();
    let counts: Vec<Count> = edges
        .par_iter()
        .map(|&(a, b)| intersection_size(g.neighbors(a), g.neighbors(b)))
        .collect();
    let entries = edges
        .into_iter()
        .zip(counts)
        .map(|((a, b), c)| (a, b, c))
        .collect();
    TriadCountGraph {
        year: g.year(),
        n: g.n(),
        entries,
    }
}

/// Size of the intersection of two sorted id lists.
fn intersection_size(mut x: &[JournalId], mut y: &[JournalId]) -> Count {
    let mut count = 0;
    while let (Some(&a), Some(&b)) = (x.first(), y.first()) {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => x = &x[1..],
            std::cmp::Ordering::Greater => y = &y[1..],
            std::cmp::Ordering::Equal => {
                count += 1;
                x = &x[1..];
                y = &y[1..];
            }
        }
    }
    count
}

/// The shared reciprocal neighbors behind a pair's count, sorted by id.
pub fn shared_neighbors(g: &ReciprocalGraph, a: JournalId, b: JournalId) -> Vec<JournalId> {
    let (mut x, mut y) = (g.neighbors(a), g.neighbors(b));
    let mut shared = Vec::new();
    while let (Some(&p), Some(&q)) = (x.first(), y.first()) {
        match p.cmp(&q) {
            std::cmp::Ordering::Less => x = &x[1..],
            std::cmp::Ordering::Greater => y = &y[1..],
            std::cmp::Ordering::Equal => {
                shared.push(p);
                x = &x[1..];
                y = &y[1..];
            }
        }
    }
    shared
}

/// Total complete triads in the year. Per-pair counts see each triangle
/// from its three sides, so their sum must divide by 3; anything else is an
/// internal inconsistency.
pub fn triangle_total(counts: &TriadCountGraph) -> Result<u64, TriadsError> {
    let sum: u64 = counts.entries.iter().map(|&(_, _, c)| c as u64).sum();
    if !sum.is_multiple_of(3) {
        return Err(TriadsError::InconsistentCounts { sum });
    }
    Ok(sum / 3)
}
