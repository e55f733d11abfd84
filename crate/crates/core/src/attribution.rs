//! Attribution of newly closed triads to the citation arcs that closed them.
//!
//! For a focal reciprocal pair, a journal that is a shared neighbor this
//! year but was not in the preceding snapshot became shared through specific
//! arcs — exactly those of its four pair-neighbor arcs that are new this
//! year. Arcs are stored cited→citing, so an arc *out of* a core journal
//! means the neighbor started citing it (the core journal is being cited);
//! the report layer spells that reading out next to every raw arc.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{JournalId, JournalRegistry, TemporalDataset, YearNetwork};
use crate::triads::{reciprocal_graph_with_threshold, shared_neighbors, ReciprocalGraph};
use crate::{Weight, Year};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AttributionError {
    #[error("year {0} is not in the dataset")]
    UnknownYear(Year),
    #[error("year {0} is the earliest year; new links need a preceding year")]
    NoPriorYear(Year),
    #[error("journals {a} and {b} are not reciprocally linked in year {year}")]
    NotReciprocal {
        a: JournalId,
        b: JournalId,
        year: Year,
    },
    #[error("a pair needs two distinct journals (got {a} and {b})")]
    InvalidPair { a: JournalId, b: JournalId },
}

/// One of the four arcs tying a neighbor to the focal pair, as observed in
/// the event's year.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcObservation {
    pub cited: JournalId,
    pub citing: JournalId,
    /// Citation count in the event's year.
    pub weight: Weight,
    /// Absent (below the presence threshold) in the preceding year.
    pub is_new: bool,
}

/// Which side of the pair the neighbor is newly linked to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkClass {
    NewWithBoth,
    NewWithFirstOnly,
    NewWithSecondOnly,
}

/// A neighbor becoming shared for the focal pair in one year, with all four
/// pair-neighbor arcs classified as new or persisted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriadEvent {
    /// Focal pair, smaller id first.
    pub pair: (JournalId, JournalId),
    pub neighbor: JournalId,
    pub year: Year,
    /// In order: first→neighbor, neighbor→first, second→neighbor,
    /// neighbor→second (cited→citing).
    pub arcs: [ArcObservation; 4],
    /// Free-text slot for article-level notes; the pipeline leaves it empty.
    pub annotation: Option<String>,
}

impl TriadEvent {
    pub fn new_arcs(&self) -> impl Iterator<Item = &ArcObservation> {
        self.arcs.iter().filter(|a| a.is_new)
    }

    pub fn persisted_arcs(&self) -> impl Iterator<Item = &ArcObservation> {
        self.arcs.iter().filter(|a| !a.is_new)
    }

    /// Whether the neighbor's reciprocal link is new with the first member,
    /// the second, or both. A link is new when either of its arcs is.
    pub fn link_class(&self) -> LinkClass {
        let first_new = self.arcs[0].is_new || self.arcs[1].is_new;
        let second_new = self.arcs[2].is_new || self.arcs[3].is_new;
        match (first_new, second_new) {
            (true, true) => LinkClass::NewWithBoth,
            (true, false) => LinkClass::NewWithFirstOnly,
            (false, true) => LinkClass::NewWithSecondOnly,
            (false, false) => unreachable!("a fully persisted neighbor was already shared"),
        }
    }
}

struct PairContext<'a> {
    pair: (JournalId, JournalId),
    year: Year,
    prev_net: &'a YearNetwork,
    cur_net: &'a YearNetwork,
    prev_graph: ReciprocalGraph,
    cur_graph: ReciprocalGraph,
}

fn pair_context<'a>(
    dataset: &'a TemporalDataset,
    pair: (JournalId, JournalId),
    year: Year,
    min_weight: Weight,
) -> Result<PairContext<'a>, AttributionError> {
    let n = dataset.registry().len();
    let (mut a, mut b) = pair;
    if b < a {
        std::mem::swap(&mut a, &mut b);
    }
    if a == b || b.index() >= n {
        return Err(AttributionError::InvalidPair { a, b });
    }
    let idx = dataset
        .years()
        .iter()
        .position(|net| net.year() == year)
        .ok_or(AttributionError::UnknownYear(year))?;
    if idx == 0 {
        return Err(AttributionError::NoPriorYear(year));
    }
    let prev_net = &dataset.years()[idx - 1];
    let cur_net = &dataset.years()[idx];
    let prev_graph = reciprocal_graph_with_threshold(prev_net, n, min_weight);
    let cur_graph = reciprocal_graph_with_threshold(cur_net, n, min_weight);
    for (graph, net) in [(&cur_graph, cur_net), (&prev_graph, prev_net)] {
        if !graph.contains_edge(a, b) {
            return Err(AttributionError::NotReciprocal {
                a,
                b,
                year: net.year(),
            });
        }
    }
    Ok(PairContext {
        pair: (a, b),
        year,
        prev_net,
        cur_net,
        prev_graph,
        cur_graph,
    })
}

/// Journals that are shared neighbors of the pair in `year` but were not in
/// the preceding year of the dataset. The pair must be reciprocal in both
/// years at the given presence threshold.
pub fn new_shared_neighbors(
    dataset: &TemporalDataset,
    pair: (JournalId, JournalId),
    year: Year,
    min_weight: Weight,
) -> Result<Vec<JournalId>, AttributionError> {
    let ctx = pair_context(dataset, pair, year, min_weight)?;
    Ok(fresh_neighbors(&ctx))
}

fn fresh_neighbors(ctx: &PairContext<'_>) -> Vec<JournalId> {
    let (a, b) = ctx.pair;
    let before = shared_neighbors(&ctx.prev_graph, a, b);
    shared_neighbors(&ctx.cur_graph, a, b)
        .into_iter()
        .filter(|c| before.binary_search(c).is_err())
        .collect()
}

/// One event per newly shared neighbor of the pair in `year`, ascending by
/// neighbor id.
pub fn triad_events(
    dataset: &TemporalDataset,
    pair: (JournalId, JournalId),
    year: Year,
    min_weight: Weight,
) -> Result<Vec<TriadEvent>, AttributionError> {
    let ctx = pair_context(dataset, pair, year, min_weight)?;
    let (a, b) = ctx.pair;
    let events = fresh_neighbors(&ctx)
        .into_iter()
        .map(|n| {
            let observe = |cited: JournalId, citing: JournalId| ArcObservation {
                cited,
                citing,
                weight: ctx.cur_net.arc_weight(cited, citing),
                is_new: ctx.prev_net.arc_weight(cited, citing) < min_weight,
            };
            let event = TriadEvent {
                pair: ctx.pair,
                neighbor: n,
                year: ctx.year,
                arcs: [observe(a, n), observe(n, a), observe(b, n), observe(n, b)],
                annotation: None,
            };
            debug_assert!(
                event.arcs.iter().any(|o| o.is_new),
                "a newly shared neighbor must come with a new arc"
            );
            event
        })
        .collect();
    Ok(events)
}

/// Per-journal direction counts over a batch of events.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DirectionCounts {
    /// Events with a new arc out of the journal: a neighbor started citing
    /// it (it attracts citations).
    pub newly_cited_by: usize,
    /// Events with a new arc into the journal: it started citing a neighbor.
    pub newly_cites: usize,
}

/// One year's event totals for the focal pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct YearAttribution {
    pub year: Year,
    pub new_neighbors: usize,
    /// Direction counts for the pair's first (smaller-id) member.
    pub first: DirectionCounts,
    /// Direction counts for the pair's second member.
    pub second: DirectionCounts,
    pub new_with_both: usize,
    pub new_with_first_only: usize,
    pub new_with_second_only: usize,
}

/// Year-by-year roll-up of triad events for one pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttributionSummary {
    pub pair: (JournalId, JournalId),
    /// One row per year with events, ascending.
    pub rows: Vec<YearAttribution>,
}

pub fn attribution_summary(
    pair: (JournalId, JournalId),
    events: &[TriadEvent],
) -> AttributionSummary {
    let mut by_year: BTreeMap<Year, YearAttribution> = BTreeMap::new();
    for event in events {
        debug_assert_eq!(event.pair, pair, "summary mixes pairs");
        let row = by_year.entry(event.year).or_insert(YearAttribution {
            year: event.year,
            new_neighbors: 0,
            first: DirectionCounts::default(),
            second: DirectionCounts::default(),
            new_with_both: 0,
            new_with_first_only: 0,
            new_with_second_only: 0,
        });
        row.new_neighbors += 1;
        row.first.newly_cited_by += usize::from(event.arcs[0].is_new);
        row.first.newly_cites += usize::from(event.arcs[1].is_new);
        row.second.newly_cited_by += usize::from(event.arcs[2].is_new);
        row.second.newly_cites += usize::from(event.arcs[3].is_new);
        match event.link_class() {
            LinkClass::NewWithBoth => row.new_with_both += 1,
            LinkClass::NewWithFirstOnly => row.new_with_first_only += 1,
            LinkClass::NewWithSecondOnly => row.new_with_second_only += 1,
        }
    }
    AttributionSummary {
        pair,
        rows: by_year.into_values().collect(),
    }
}

/// Human reading of one arc observation. Arcs run cited→citing, so the
/// citing journal is the acting one: "X starts citing Y" for a new arc,
/// "X kept citing Y" for a persisted one.
pub fn arc_reading(arc: &ArcObservation, registry: &JournalRegistry) -> String {
    let verb = if arc.is_new {
        "starts citing"
    } else {
        "kept citing"
    };
    format!(
        "{} {verb} {}",
        registry.name(arc.citing),
        registry.name(arc.cited)
    )
}

/// Event table: `year  neighbor  arc  status  weight  reading`, one row per
/// arc, rows ordered by year, neighbor name, then the fixed arc order.
pub fn write_events_tsv(events: &[TriadEvent], registry: &JournalRegistry) -> String {
    let mut sorted: Vec<&TriadEvent> = events.iter().collect();
    sorted.sort_by_key(|e| (e.year, registry.name(e.neighbor)));
    let mut out = String::from("year\tneighbor\tarc\tstatus\tweight\treading\n");
    for event in sorted {
        for arc in &event.arcs {
            out.push_str(&format!(
                "{}\t{}\t{}->{}\t{}\t{}\t{}\n",
                event.year,
                registry.name(event.neighbor),
                registry.name(arc.cited),
                registry.name(arc.citing),
                if arc.is_new { "new" } else { "persisted" },
                arc.weight,
                arc_reading(arc, registry),
            ));
        }
    }
    out
}

/// Summary table, one row per year:
/// `year  journal_a  journal_b  new_neighbors  a_newly_cited_by  a_newly_cites
///  b_newly_cited_by  b_newly_cites  new_with_both  new_with_a_only  new_with_b_only`.
pub fn write_summary_tsv(summary: &AttributionSummary, registry: &JournalRegistry) -> String {
    let mut out = String::from(
        "year\tjournal_a\tjournal_b\tnew_neighbors\ta_newly_cited_by\ta_newly_cites\t\
         b_newly_cited_by\tb_newly_cites\tnew_with_both\tnew_with_a_only\tnew_with_b_only\n",
    );
    let (a, b) = summary.pair;
    for row in &summary.rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            row.year,
            registry.name(a),
            registry.name(b),
            row.new_neighbors,
            row.first.newly_cited_by,
            row.first.newly_cites,
            row.second.newly_cited_by,
            row.second.newly_cites,
            row.new_with_both,
            row.new_with_first_only,
            row.new_with_second_only,
        ));
    }
    out
}

/// DOT rendering of events: the pair as filled boxes, neighbors as plain
/// nodes, arrows following information flow (cited→citing). New arcs are
/// solid and labeled `year: weight`; persisted arcs are dashed and grey with
/// a bare weight label.
pub fn attribution_dot(
    pair: (JournalId, JournalId),
    events: &[TriadEvent],
    registry: &JournalRegistry,
) -> String {
    use crate::islands::dot_escape;
    let mut out = String::from("digraph attribution {\n  rankdir=LR;\n");
    let (a, b) = if pair.1 < pair.0 {
        (pair.1, pair.0)
    } else {
        (pair.0, pair.1)
    };
    for core in [a, b] {
        out.push_str(&format!(
            "  \"{}\" [shape=box, style=filled, fillcolor=lightgrey];\n",
            dot_escape(registry.name(core))
        ));
    }
    let mut sorted: Vec<&TriadEvent> = events.iter().collect();
    sorted.sort_by_key(|e| (registry.name(e.neighbor), e.year));
    let mut declared: Vec<&str> = Vec::new();
    for event in &sorted {
        let name = registry.name(event.neighbor);
        if !declared.contains(&name) {
            declared.push(name);
            out.push_str(&format!("  \"{}\";\n", dot_escape(name)));
        }
    }
    for event in &sorted {
        for arc in &event.arcs {
            let style = if arc.is_new {
                format!("label=\"{}: {}\", style=solid", event.year, arc.weight)
            } else {
                format!("label=\"{}\", style=dashed, color=grey", arc.weight)
            };
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [{}];\n",
                dot_escape(registry.name(arc.cited)),
                dot_escape(registry.name(arc.citing)),
                style
            ));
        }
    }
    out.push_str("}\n");
    out
}
