//! Whole-network descriptive statistics.
//!
//! Everything here averages over the full shared registry: a journal that
//! never cites and is never cited in a given year still sits in the
//! denominator (and counts as an isolate). Loops count as links and keep a
//! journal active, but never contribute to reciprocal or unidirectional
//! degrees, and the three-year overlap ignores them entirely.

use std::collections::HashMap;

use num_rational::Ratio;

use crate::dynamics::{ChangeRecord, Trend};
use crate::model::{JournalRegistry, YearNetwork};
use crate::Year;

/// One year's activity and degree figures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YearStats {
    pub year: Year,
    /// Journals with at least one arc in or out (loops count).
    pub n_active: usize,
    /// Distinct arcs, loops included.
    pub n_links: usize,
    /// `n_links / N²` over the full registry size N, loops included.
    pub density_loops: Ratio<u64>,
    /// Mean number of mutual-citation partners, over all N journals.
    pub avg_reciprocal_degree: Ratio<u64>,
    /// Mean number of one-directional partners, over all N journals.
    pub avg_unidirectional_degree: Ratio<u64>,
    /// Journals with no arcs at all this year.
    pub n_isolates: usize,
}

/// Compute [`YearStats`] for one year against the full registry.
pub fn year_stats(net: &YearNetwork, registry: &JournalRegistry) -> YearStats {
    let n = registry.len();
    let mut active = vec![false; n];
    // Per unordered pair: bit 1 = arc (low, high), bit 2 = arc (high, low).
    let mut pair_bits: HashMap<(u32, u32), u8> = HashMap::new();
    for ((cited, citing), _) in net.arcs() {
        active[cited.index()] = true;
        active[citing.index()] = true;
        if cited == citing {
            continue;
        }
        let (low, high, bit) = if cited < citing {
            (cited.0, citing.0, 1)
        } else {
            (citing.0, cited.0, 2)
        };
        *pair_bits.entry((low, high)).or_insert(0) |= bit;
    }
    let mut reciprocal_pairs = 0usize;
    let mut unidirectional_pairs = 0usize;
    for &bits in pair_bits.values() {
        if bits == 3 {
            reciprocal_pairs += 1;
        } else {
            unidirectional_pairs += 1;
        }
    }
    let n_active = active.iter().filter(|&&a| a).count();
    let ratio = |num: usize| {
        if n == 0 {
            Ratio::from_integer(0)
        } else {
            Ratio::new(num as u64, n as u64)
        }
    };
    YearStats {
        year: net.year(),
        n_active,
        n_links: net.n_arcs(),
        density_loops: if n == 0 {
            Ratio::from_integer(0)
        } else {
            Ratio::new(net.n_arcs() as u64, (n * n) as u64)
        },
        // Each pair contributes one partner to both endpoints.
        avg_reciprocal_degree: ratio(2 * reciprocal_pairs),
        avg_unidirectional_degree: ratio(2 * unidirectional_pairs),
        n_isolates: n - n_active,
    }
}

/// Exact half-up decimal rendering of a non-negative ratio, e.g. the
/// conventional 3-decimal density and 1-decimal degree displays.
pub fn format_ratio(value: Ratio<u64>, decimals: u32) -> String {
    let scale = 10u128.pow(decimals);
    let numer = *value.numer() as u128;
    let denom = (*value.denom()).max(1) as u128;
    let scaled = (numer * scale * 2 + denom) / (denom * 2);
    let int = scaled / scale;
    if decimals == 0 {
        return int.to_string();
    }
    format!(
        "{int}.{frac:0width$}",
        frac = scaled % scale,
        width = decimals as usize
    )
}

/// Arc-presence counts for the seven regions of a three-set Venn diagram,
/// in the year order given to [`link_overlap`]. Loops are excluded and
/// weights ignored.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OverlapCounts {
    pub only_first: usize,
    pub only_second: usize,
    pub only_third: usize,
    pub first_second: usize,
    pub first_third: usize,
    pub second_third: usize,
    pub all_three: usize,
}

impl OverlapCounts {
    /// Total distinct non-loop arcs across the three years.
    pub fn union(&self) -> usize {
        self.only_first
            + self.only_second
            + self.only_third
            + self.first_second
            + self.first_third
            + self.second_third
            + self.all_three
    }
}

/// Classify every non-loop arc of three years by its presence pattern.
pub fn link_overlap(years: [&YearNetwork; 3]) -> OverlapCounts {
    let mut masks: HashMap<(u32, u32), u8> = HashMap::new();
    for (slot, net) in years.iter().enumerate() {
        for ((cited, citing), _) in net.arcs() {
            if cited != citing {
                *masks.entry((cited.0, citing.0)).or_insert(0) |= 1 << slot;
            }
        }
    }
    let mut counts = OverlapCounts::default();
    for &mask in masks.values() {
        match mask {
            0b001 => counts.only_first += 1,
            0b010 => counts.only_second += 1,
            0b100 => counts.only_third += 1,
            0b011 => counts.first_second += 1,
            0b101 => counts.first_third += 1,
            0b110 => counts.second_third += 1,
            0b111 => counts.all_three += 1,
            _ => unreachable!("mask of three presence bits"),
        }
    }
    counts
}

/// Taxonomy of change records: the sign of the average change partitions
/// the records, and the monotonic classes nest inside the rising and
/// falling parts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ChangeSummary {
    pub total: usize,
    pub net_increase: usize,
    pub monotonic_increase: usize,
    pub net_neutral: usize,
    pub net_decrease: usize,
    pub monotonic_decrease: usize,
}

pub fn change_summary(records: &[ChangeRecord]) -> ChangeSummary {
    let mut summary = ChangeSummary {
        total: records.len(),
        ..ChangeSummary::default()
    };
    for record in records {
        match record.avg_change.cmp(&num_traits::Zero::zero()) {
            std::cmp::Ordering::Greater => summary.net_increase += 1,
            std::cmp::Ordering::Equal => summary.net_neutral += 1,
            std::cmp::Ordering::Less => summary.net_decrease += 1,
        }
        match record.trend {
            Trend::MonotonicUp => summary.monotonic_increase += 1,
            Trend::MonotonicDown => summary.monotonic_decrease += 1,
            Trend::Other => {}
        }
    }
    summary
}

/// Percentage of `part` in `whole` with one decimal place, rounded half-up.
pub fn format_percent(part: usize, whole: usize) -> String {
    if whole == 0 {
        return "0.0".to_string();
    }
    format_ratio(Ratio::new(100 * part as u64, whole as u64), 1)
}
