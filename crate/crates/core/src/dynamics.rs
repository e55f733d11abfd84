//! Shared-neighbor counts followed across years.
//!
//! Only pairs that stay reciprocally connected in every year of the period
//! are tracked; their per-year counts come from the full yearly count
//! graphs, never from a recount on the persistent subgraph. Each
//! trajectory gets its average yearly change (an exact rational) and a
//! trend class. The default trend rule is strict — any tie between
//! consecutive years disqualifies a monotonic reading; the weak rule
//! tolerates ties but still requires overall movement, so a constant
//! trajectory is never monotonic and a monotonically-up pair always has a
//! positive average change under either rule.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{JournalId, TemporalDataset};
use crate::triads::{reciprocal_graph, shared_neighbor_counts, TriadCountGraph};
use crate::value::ValuedGraph;
use crate::{Change, Count, Year};

#[derive(Error, Debug, PartialEq, Eq)]
pub enum DynamicsError {
    #[error("tracking change needs at least {need} years of data, found {found}")]
    TooFewYears { need: usize, found: usize },
    #[error("count graphs disagree on the journal id range ({left} vs {right})")]
    MismatchedRange { left: usize, right: usize },
}

/// Trend class of one count trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Trend {
    MonotonicUp,
    MonotonicDown,
    Other,
}

impl fmt::Display for Trend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Trend::MonotonicUp => "monotonic-up",
            Trend::MonotonicDown => "monotonic-down",
            Trend::Other => "other",
        })
    }
}

impl FromStr for Trend {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "monotonic-up" => Ok(Trend::MonotonicUp),
            "monotonic-down" => Ok(Trend::MonotonicDown),
            "other" => Ok(Trend::Other),
            _ => Err(()),
        }
    }
}

/// How ties between consecutive years affect the monotonic classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TrendRule {
    /// Every step must strictly rise (resp. fall).
    #[default]
    Strict,
    /// Steps may tie, but the trajectory must move overall: first and last
    /// counts must differ.
    Weak,
}

/// One persistent pair's trajectory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChangeRecord {
    /// Endpoints, smaller id first.
    pub pair: (JournalId, JournalId),
    /// Shared-neighbor count per year, in dataset year order.
    pub counts: Vec<Count>,
    /// `(last - first) / (years - 1)`, exact.
    pub avg_change: Change,
    pub trend: Trend,
}

/// Change records for every persistent pair of a dataset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChangeNetwork {
    n: usize,
    years: Vec<Year>,
    records: Vec<ChangeRecord>,
}

impl ChangeNetwork {
    /// Assemble a network from already-computed records, e.g. parsed back
    /// from a report file. Pairs are normalized low-high and sorted.
    ///
    /// Panics on a loop pair, an endpoint ≥ `n`, or a duplicate pair —
    /// callers reading untrusted input must validate first.
    pub fn from_records(n: usize, years: Vec<Year>, mut records: Vec<ChangeRecord>) -> Self {
        for record in &mut records {
            let (a, b) = record.pair;
            assert!(a != b, "loop pair in change records");
            assert!(a.index() < n && b.index() < n, "pair endpoint out of range");
            if b < a {
                record.pair = (b, a);
            }
        }
        records.sort_by_key(|r| r.pair);
        assert!(
            records.windows(2).all(|w| w[0].pair != w[1].pair),
            "duplicate pair in change records"
        );
        ChangeNetwork { n, years, records }
    }

    /// Size of the dense journal id range the pairs live in.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn years(&self) -> &[Year] {
        &self.years
    }

    /// Records sorted by pair.
    pub fn records(&self) -> &[ChangeRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// The records as a valued undirected graph, lines valued by average
    /// change — the input shape island extraction expects. Call on the
    /// monotonic subnetwork for the hot-spot analysis.
    pub fn to_valued_graph(&self) -> ValuedGraph<Change> {
        ValuedGraph::new(
            self.n,
            self.records
                .iter()
                .map(|r| (r.pair.0, r.pair.1, r.avg_change)),
        )
        .expect("records hold unique loop-free pairs within range")
    }
}

/// Classify one trajectory under the given tie rule.
fn classify(counts: &[Count], rule: TrendRule) -> Trend {
    let strictly =
        |ordering: std::cmp::Ordering| counts.windows(2).all(|w| w[0].cmp(&w[1]) == ordering);
    let weakly = |ordering: std::cmp::Ordering| {
        counts
            .windows(2)
            .all(|w| w[0].cmp(&w[1]) != ordering.reverse())
            && counts.first() != counts.last()
    };
    let (up, down) = match rule {
        TrendRule::Strict => (
            strictly(std::cmp::Ordering::Less),
            strictly(std::cmp::Ordering::Greater),
        ),
        TrendRule::Weak => (
            weakly(std::cmp::Ordering::Less),
            weakly(std::cmp::Ordering::Greater),
        ),
    };
    match (up, down) {
        (true, _) => Trend::MonotonicUp,
        (_, true) => Trend::MonotonicDown,
        _ => Trend::Other,
    }
}

/// Pairs reciprocally connected in every year of the dataset, sorted.
/// Needs at least two years — persistence over one year says nothing.
pub fn persistent_pairs(
    dataset: &TemporalDataset,
) -> Result<Vec<(JournalId, JournalId)>, DynamicsError> {
    if dataset.n_years() < 2 {
        return Err(DynamicsError::TooFewYears {
            need: 2,
            found: dataset.n_years(),
        });
    }
    let n = dataset.registry().len();
    let graphs: Vec<_> = dataset
        .years()
        .iter()
        .map(|net| reciprocal_graph(net, n))
        .collect();
    Ok(graphs[0]
        .edges()
        .filter(|&(a, b)| graphs[1..].iter().all(|g| g.contains_edge(a, b)))
        .collect())
}

/// Count trajectories for persistent pairs under the strict tie rule.
pub fn change_network(dataset: &TemporalDataset) -> Result<ChangeNetwork, DynamicsError> {
    change_network_with(dataset, TrendRule::Strict)
}

/// Count trajectories for persistent pairs; needs at least three years.
pub fn change_network_with(
    dataset: &TemporalDataset,
    rule: TrendRule,
) -> Result<ChangeNetwork, DynamicsError> {
    if dataset.n_years() < 3 {
        return Err(DynamicsError::TooFewYears {
            need: 3,
            found: dataset.n_years(),
        });
    }
    let n = dataset.registry().len();
    let counts: Vec<TriadCountGraph> = dataset
        .years()
        .iter()
        .map(|net| shared_neighbor_counts(&reciprocal_graph(net, n)))
        .collect();
    change_network_from_counts(&counts, rule)
}

/// Build a change network from per-year count graphs directly (e.g. read
/// back from files). A pair is persistent iff it appears in every graph;
/// zero-count pairs are present by construction, so membership is exactly
/// reciprocal connectivity.
pub fn change_network_from_counts(
    per_year: &[TriadCountGraph],
    rule: TrendRule,
) -> Result<ChangeNetwork, DynamicsError> {
    if per_year.len() < 3 {
        return Err(DynamicsError::TooFewYears {
            need: 3,
            found: per_year.len(),
        });
    }
    let n = per_year[0].n();
    for graph in per_year {
        if graph.n() != n {
            return Err(DynamicsError::MismatchedRange {
                left: n,
                right: graph.n(),
            });
        }
    }
    let span = (per_year.len() - 1) as i64;
    let records = per_year[0]
        .entries()
        .iter()
        .filter_map(|&(a, b, first)| {
            let mut counts = Vec::with_capacity(per_year.len());
            counts.push(first);
            for graph in &per_year[1..] {
                counts.push(graph.count(a, b)?);
            }
            let delta = counts[counts.len() - 1] as i64 - counts[0] as i64;
            Some(ChangeRecord {
                pair: (a, b),
                avg_change: Change::new(delta, span),
                trend: classify(&counts, rule),
                counts,
            })
        })
        .collect();
    Ok(ChangeNetwork {
        n,
        years: per_year.iter().map(TriadCountGraph::year).collect(),
        records,
    })
}

/// The subnetwork of monotonic records (both directions).
pub fn monotonic_filter(network: &ChangeNetwork) -> ChangeNetwork {
    ChangeNetwork {
        n: network.n,
        years: network.years.clone(),
        records: network
            .records
            .iter()
            .filter(|r| r.trend != Trend::Other)
            .cloned()
            .collect(),
    }
}
