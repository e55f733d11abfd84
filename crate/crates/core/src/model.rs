//! Journal registry and yearly citation networks.
//!
//! Arcs run from the cited journal to the citing journal, so a journal's
//! out-neighbors are the journals citing it. Self-loops (journal
//! self-citation) are legal and stored; analyses that must ignore them do
//! so explicitly at their own layer.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::{Weight, Year};

/// Dense journal identifier, handed out by [`JournalRegistry`] in
/// first-seen order and usable directly as a vector index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct JournalId(pub u32);

impl JournalId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for JournalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum ModelError {
    #[error("journal name is empty after trimming")]
    EmptyName,
    #[error("journal name {0:?} contains a tab or line break")]
    UnwritableName(String),
    #[error("citation count must be at least 1")]
    ZeroCount,
    #[error(
        "arc ({cited}, {citing}) references an id outside the registry of {registry} journals"
    )]
    UnknownId {
        cited: JournalId,
        citing: JournalId,
        registry: usize,
    },
    #[error("years must be strictly ascending: {prev} is followed by {next}")]
    UnorderedYears { prev: Year, next: Year },
}

/// Interns journal names. Names are trimmed on the way in; registering the
/// same name twice returns the same id.
#[derive(Default, Clone, Debug, PartialEq, Eq)]
pub struct JournalRegistry {
    names: Vec<String>,
    ids: HashMap<String, JournalId>,
}

impl JournalRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Intern `name`, rejecting names that cannot survive the TSV and
    /// Pajek interchange formats (empty, or containing tabs/line breaks).
    pub fn register(&mut self, name: &str) -> Result<JournalId, ModelError> {
        let name = name.trim();
        if name.is_empty() {
            return Err(ModelError::EmptyName);
        }
        if name.contains(['\t', '\n', '\r']) {
            return Err(ModelError::UnwritableName(name.to_string()));
        }
        if let Some(&id) = self.ids.get(name) {
            return Ok(id);
        }
        let id = JournalId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn get(&self, name: &str) -> Option<JournalId> {
        self.ids.get(name.trim()).copied()
    }

    /// Panics on an id this registry never issued.
    pub fn name(&self, id: JournalId) -> &str {
        &self.names[id.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// All journals in id order.
    pub fn iter(&self) -> impl Iterator<Item = (JournalId, &str)> {
        self.names
            .iter()
            .enumerate()
            .map(|(i, name)| (JournalId(i as u32), name.as_str()))
    }
}

/// One year's directed citation network: `(cited, citing) → count`.
///
/// Equality is by content, independent of insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YearNetwork {
    year: Year,
    arcs: HashMap<(JournalId, JournalId), Weight>,
}

impl YearNetwork {
    pub fn new(year: Year) -> Self {
        Self {
            year,
            arcs: HashMap::new(),
        }
    }

    pub fn year(&self) -> Year {
        self.year
    }

    /// Record `count` citations from articles in `citing` to articles in
    /// `cited`, accumulating onto any arc already present.
    pub fn add_citation(
        &mut self,
        cited: JournalId,
        citing: JournalId,
        count: Weight,
    ) -> Result<(), ModelError> {
        if count == 0 {
            return Err(ModelError::ZeroCount);
        }
        *self.arcs.entry((cited, citing)).or_insert(0) += count;
        Ok(())
    }

    /// Stored weight of the arc `cited → citing`, 0 when absent.
    pub fn arc_weight(&self, cited: JournalId, citing: JournalId) -> Weight {
        self.arcs.get(&(cited, citing)).copied().unwrap_or(0)
    }

    /// Number of distinct arcs, loops included.
    pub fn n_arcs(&self) -> usize {
        self.arcs.len()
    }

    /// Sum of all arc weights.
    pub fn total_citations(&self) -> Weight {
        self.arcs.values().sum()
    }

    /// Arcs in hash order — pair with a sort before anything user-visible.
    pub fn arcs(&self) -> impl Iterator<Item = ((JournalId, JournalId), Weight)> + '_ {
        self.arcs.iter().map(|(&pair, &w)| (pair, w))
    }

    /// Arcs sorted by `(cited, citing)` id for deterministic traversal.
    pub fn sorted_arcs(&self) -> Vec<(JournalId, JournalId, Weight)> {
        let mut arcs: Vec<_> = self.arcs.iter().map(|(&(a, b), &w)| (a, b, w)).collect();
        arcs.sort_by_key(|&(a, b, _)| (a, b));
        arcs
    }
}

/// A shared registry plus one network per year, years strictly ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemporalDataset {
    registry: JournalRegistry,
    years: Vec<YearNetwork>,
}

impl TemporalDataset {
    /// Validates that years ascend strictly and that every arc endpoint is
    /// an id the registry actually issued.
    pub fn new(registry: JournalRegistry, years: Vec<YearNetwork>) -> Result<Self, ModelError> {
        for pair in years.windows(2) {
            if pair[1].year() <= pair[0].year() {
                return Err(ModelError::UnorderedYears {
                    prev: pair[0].year(),
                    next: pair[1].year(),
                });
            }
        }
        let n = registry.len();
        for net in &years {
            for ((cited, citing), _) in net.arcs() {
                if cited.index() >= n || citing.index() >= n {
                    return Err(ModelError::UnknownId {
                        cited,
                        citing,
                        registry: n,
                    });
                }
            }
        }
        Ok(Self { registry, years })
    }

    pub fn registry(&self) -> &JournalRegistry {
        &self.registry
    }

    pub fn years(&self) -> &[YearNetwork] {
        &self.years
    }

    pub fn n_years(&self) -> usize {
        self.years.len()
    }

    pub fn year_labels(&self) -> Vec<Year> {
        self.years.iter().map(YearNetwork::year).collect()
    }

    pub fn year(&self, label: Year) -> Option<&YearNetwork> {
        self.years.iter().find(|net| net.year() == label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn register_trims_and_deduplicates() {
        let mut reg = JournalRegistry::new();
        let a = reg.register("  NATURE ").unwrap();
        let b = reg.register("NATURE").unwrap();
        assert_eq!(a, b);
        assert_eq!(reg.name(a), "NATURE");
        assert_eq!(reg.len(), 1);
        assert_eq!(reg.get(" NATURE  "), Some(a));
    }

    #[test]
    fn register_rejects_unusable_names() {
        let mut reg = JournalRegistry::new();
        assert_eq!(reg.register("   "), Err(ModelError::EmptyName));
        assert!(matches!(
            reg.register("BAD\tNAME"),
            Err(ModelError::UnwritableName(_))
        ));
    }

    #[test]
    fn citations_accumulate_and_reject_zero() {
        let mut net = YearNetwork::new(2011);
        let (a, b) = (JournalId(0), JournalId(1));
        net.add_citation(a, b, 2).unwrap();
        net.add_citation(a, b, 3).unwrap();
        assert_eq!(net.arc_weight(a, b), 5);
        assert_eq!(net.arc_weight(b, a), 0);
        assert_eq!(net.add_citation(a, b, 0), Err(ModelError::ZeroCount));
        assert_eq!(net.total_citations(), 5);
    }

    #[test]
    fn loops_are_stored() {
        let mut net = YearNetwork::new(2011);
        let a = JournalId(0);
        net.add_citation(a, a, 7).unwrap();
        assert_eq!(net.arc_weight(a, a), 7);
        assert_eq!(net.n_arcs(), 1);
    }

    #[test]
    fn equality_ignores_insertion_order() {
        let (a, b, c) = (JournalId(0), JournalId(1), JournalId(2));
        let mut left = YearNetwork::new(1);
        left.add_citation(a, b, 1).unwrap();
        left.add_citation(b, c, 2).unwrap();
        let mut right = YearNetwork::new(1);
        right.add_citation(b, c, 2).unwrap();
        right.add_citation(a, b, 1).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn dataset_validates_year_order_and_ids() {
        let mut reg = JournalRegistry::new();
        reg.register("A").unwrap();
        let nets = vec![YearNetwork::new(2012), YearNetwork::new(2011)];
        assert_eq!(
            TemporalDataset::new(reg.clone(), nets).unwrap_err(),
            ModelError::UnorderedYears {
                prev: 2012,
                next: 2011
            }
        );

        let mut stray = YearNetwork::new(2011);
        stray.add_citation(JournalId(0), JournalId(5), 1).unwrap();
        assert!(matches!(
            TemporalDataset::new(reg, vec![stray]).unwrap_err(),
            ModelError::UnknownId { .. }
        ));
    }
}
