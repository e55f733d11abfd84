//! Render and re-read the pipeline's tabular reports.
//!
//! Every table is TSV with a header line; `#` comments, blank lines, and
//! CRLF endings are tolerated on the way back in. Writers order rows by
//! journal name so identical inputs give byte-identical files. Readers
//! accept exactly what the writers produce and recompute derived columns
//! (`avg_change`) instead of trusting them.

use std::collections::HashSet;
use std::io::BufRead;

use anyhow::{bail, ensure, Context, Result};

use triadyn_core::attribution::{arc_reading, AttributionSummary, TriadEvent};
use triadyn_core::dynamics::{ChangeNetwork, ChangeRecord, Trend};
use triadyn_core::ingest::data_lines;
use triadyn_core::metrics::{
    format_percent, format_ratio, ChangeSummary, OverlapCounts, YearStats,
};
use triadyn_core::model::TemporalDataset;
use triadyn_core::triads::TriadCountGraph;
use triadyn_core::{Change, Count, JournalId, JournalRegistry, LineValue, Year};

/// `key  value` facts about a canonicalized dataset: registry size, year
/// count, then per-year arc and citation totals.
pub fn dataset_summary_tsv(dataset: &TemporalDataset) -> String {
    let mut out = String::from("key\tvalue\n");
    out.push_str(&format!("journals\t{}\n", dataset.registry().len()));
    out.push_str(&format!("years\t{}\n", dataset.n_years()));
    for net in dataset.years() {
        out.push_str(&format!("arcs_{}\t{}\n", net.year(), net.n_arcs()));
        out.push_str(&format!(
            "citations_{}\t{}\n",
            net.year(),
            net.total_citations()
        ));
    }
    out
}

/// Per-year statistics, one row per year, columns named after
/// [`YearStats`]'s fields. Density shows 3 decimals, degrees 1.
pub fn stats_tsv(rows: &[YearStats]) -> String {
    let mut out = String::from(
        "year\tn_active\tn_links\tdensity_loops\tavg_reciprocal_degree\t\
         avg_unidirectional_degree\tn_isolates\n",
    );
    for s in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            s.year,
            s.n_active,
            s.n_links,
            format_ratio(s.density_loops, 3),
            format_ratio(s.avg_reciprocal_degree, 1),
            format_ratio(s.avg_unidirectional_degree, 1),
            s.n_isolates,
        ));
    }
    out
}

/// One row per Venn region of the three-year link overlap, plus the union.
pub fn overlap_tsv(counts: &OverlapCounts) -> String {
    let rows = [
        ("only_first", counts.only_first),
        ("only_second", counts.only_second),
        ("only_third", counts.only_third),
        ("first_second", counts.first_second),
        ("first_third", counts.first_third),
        ("second_third", counts.second_third),
        ("all_three", counts.all_three),
        ("union", counts.union()),
    ];
    let mut out = String::from("region\tlinks\n");
    for (region, links) in rows {
        out.push_str(&format!("{region}\t{links}\n"));
    }
    out
}

/// Id-labelled rows of one year's triad table.
pub type TriadEntries = Vec<(JournalId, JournalId, Count)>;

const TRIADS_COLUMNS: [&str; 3] = ["journal_a", "journal_b", "count"];

fn header_matches(fields: &[String], expected: &[&str]) -> bool {
    fields.len() == expected.len()
        && fields
            .iter()
            .map(String::as_str)
            .eq(expected.iter().copied())
}

/// One year's shared-neighbor counts: `journal_a  journal_b  count` with the
/// lexicographically smaller name first, rows sorted by name pair.
/// Zero-count rows stay in — a row's presence means the pair is reciprocally
/// linked that year, which the change stage relies on.
pub fn triads_tsv(counts: &TriadCountGraph, registry: &JournalRegistry) -> String {
    let mut rows: Vec<(&str, &str, Count)> = counts
        .entries()
        .iter()
        .map(|&(a, b, c)| {
            let (na, nb) = (registry.name(a), registry.name(b));
            if na <= nb {
                (na, nb, c)
            } else {
                (nb, na, c)
            }
        })
        .collect();
    rows.sort_unstable();
    let mut out = String::from("journal_a\tjournal_b\tcount\n");
    for (a, b, c) in rows {
        out.push_str(&format!("{a}\t{b}\t{c}\n"));
    }
    out
}

/// Read one year's triad table back, interning names into `registry`.
/// Entries come back id-labelled; assemble the graphs with [`triad_graphs`]
/// once every year's file is read and the registry is complete.
pub fn parse_triads_tsv<R: BufRead>(
    reader: R,
    registry: &mut JournalRegistry,
) -> Result<TriadEntries> {
    let mut lines = data_lines(reader);
    let (line, header) = match lines.next() {
        Some(entry) => entry?,
        None => bail!(
            "empty table: expected a {} header",
            TRIADS_COLUMNS.join("/")
        ),
    };
    ensure!(
        header_matches(&header, &TRIADS_COLUMNS),
        "line {line}: expected header {:?}",
        TRIADS_COLUMNS.join("\t")
    );
    let mut entries = Vec::new();
    for item in lines {
        let (line, fields) = item?;
        ensure!(
            fields.len() == 3,
            "line {line}: expected 3 fields, found {}",
            fields.len()
        );
        let a = registry
            .register(&fields[0])
            .with_context(|| format!("line {line}"))?;
        let b = registry
            .register(&fields[1])
            .with_context(|| format!("line {line}"))?;
        ensure!(a != b, "line {line}: both endpoints are {:?}", fields[0]);
        let count: Count = fields[2]
            .trim()
            .parse()
            .with_context(|| format!("line {line}: bad count {:?}", fields[2]))?;
        entries.push((a, b, count));
    }
    Ok(entries)
}

/// Per-year count graphs over the final registry, rejecting pairs that a
/// year's table lists twice.
pub fn triad_graphs(
    per_year: Vec<(Year, TriadEntries)>,
    registry: &JournalRegistry,
) -> Result<Vec<TriadCountGraph>> {
    per_year
        .into_iter()
        .map(|(year, entries)| {
            let graph = TriadCountGraph::from_entries(year, registry.len(), entries);
            if let Some(pair) = graph
                .entries()
                .windows(2)
                .find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1))
            {
                bail!(
                    "year {year}: pair {} / {} appears twice in the triad table",
                    registry.name(pair[0].0),
                    registry.name(pair[0].1)
                );
            }
            Ok(graph)
        })
        .collect()
}

/// Change-network table: `journal_a  journal_b  c1..cY  avg_change  trend`,
/// rows sorted by name pair with the smaller name first. `avg_change` is an
/// exact decimal, `trend` one of `monotonic-up`, `monotonic-down`, `other`.
pub fn change_tsv(cn: &ChangeNetwork, registry: &JournalRegistry) -> String {
    let mut out = String::from("journal_a\tjournal_b");
    for i in 1..=cn.years().len() {
        out.push_str(&format!("\tc{i}"));
    }
    out.push_str("\tavg_change\ttrend\n");
    let mut rows: Vec<(&str, &str, &ChangeRecord)> = cn
        .records()
        .iter()
        .map(|r| {
            let (na, nb) = (registry.name(r.pair.0), registry.name(r.pair.1));
            if na <= nb {
                (na, nb, r)
            } else {
                (nb, na, r)
            }
        })
        .collect();
    rows.sort_unstable_by_key(|&(a, b, _)| (a, b));
    for (a, b, r) in rows {
        out.push_str(&format!("{a}\t{b}"));
        for c in &r.counts {
            out.push_str(&format!("\t{c}"));
        }
        out.push_str(&format!("\t{}\t{}\n", r.avg_change.format_value(), r.trend));
    }
    out
}

/// Read a change table back. Year labels are not part of the table, so the
/// resumed network carries positional labels `1..=Y`; island extraction and
/// linkage only use the per-pair values, never the labels. `avg_change` is
/// recomputed from the counts and must agree with the written cell; `trend`
/// is taken as written, since it depends on the tie rule the writer ran
/// with.
pub fn parse_change_tsv<R: BufRead>(reader: R) -> Result<(JournalRegistry, ChangeNetwork)> {
    let mut lines = data_lines(reader);
    let (line, header) = match lines.next() {
        Some(entry) => entry?,
        None => bail!("empty table: expected a change-network header"),
    };
    ensure!(
        header.len() >= 7
            && header[0] == "journal_a"
            && header[1] == "journal_b"
            && header[header.len() - 2] == "avg_change"
            && header[header.len() - 1] == "trend",
        "line {line}: not a change table header (needs journal_a, journal_b, \
         at least three count columns, avg_change, trend)"
    );
    let years = header.len() - 4;
    for (i, field) in header[2..2 + years].iter().enumerate() {
        ensure!(
            *field == format!("c{}", i + 1),
            "line {line}: expected count column c{}, found {field:?}",
            i + 1
        );
    }
    let span = (years - 1) as i64;
    let mut registry = JournalRegistry::new();
    let mut seen: HashSet<(JournalId, JournalId)> = HashSet::new();
    let mut records = Vec::new();
    for item in lines {
        let (line, fields) = item?;
        ensure!(
            fields.len() == header.len(),
            "line {line}: expected {} fields, found {}",
            header.len(),
            fields.len()
        );
        let a = registry
            .register(&fields[0])
            .with_context(|| format!("line {line}"))?;
        let b = registry
            .register(&fields[1])
            .with_context(|| format!("line {line}"))?;
        ensure!(a != b, "line {line}: both endpoints are {:?}", fields[0]);
        let pair = if a < b { (a, b) } else { (b, a) };
        ensure!(seen.insert(pair), "line {line}: duplicate pair");
        let counts: Vec<Count> = fields[2..2 + years]
            .iter()
            .map(|f| {
                f.trim()
                    .parse()
                    .with_context(|| format!("line {line}: bad count {f:?}"))
            })
            .collect::<Result<_>>()?;
        let avg_change = Change::new(counts[years - 1] as i64 - counts[0] as i64, span);
        ensure!(
            fields[2 + years] == avg_change.format_value(),
            "line {line}: avg_change {:?} disagrees with the counts (expected {})",
            fields[2 + years],
            avg_change.format_value()
        );
        let trend: Trend = fields[3 + years]
            .parse()
            .ok()
            .with_context(|| format!("line {line}: unknown trend {:?}", fields[3 + years]))?;
        records.push(ChangeRecord {
            pair,
            counts,
            avg_change,
            trend,
        });
    }
    let n = registry.len();
    let network = ChangeNetwork::from_records(n, (1..=years as Year).collect(), records);
    Ok((registry, network))
}

/// Taxonomy roll-up of a change network: pair count per class and its share
/// of all persistent pairs, the monotonic classes nested inside the net
/// ones.
pub fn change_summary_tsv(summary: &ChangeSummary) -> String {
    let rows = [
        ("total", summary.total),
        ("net_increase", summary.net_increase),
        ("monotonic_increase", summary.monotonic_increase),
        ("net_neutral", summary.net_neutral),
        ("net_decrease", summary.net_decrease),
        ("monotonic_decrease", summary.monotonic_decrease),
    ];
    let mut out = String::from("class\tpairs\tpercent\n");
    for (class, pairs) in rows {
        out.push_str(&format!(
            "{class}\t{pairs}\t{}\n",
            format_percent(pairs, summary.total)
        ));
    }
    out
}

/// Event table for a batch of pairs (an island's defining pairs): one row
/// per arc, the pair's names leading each row, rows ordered by pair name,
/// year, neighbor name, then the fixed arc order.
pub fn island_events_tsv(events: &[TriadEvent], registry: &JournalRegistry) -> String {
    let mut sorted: Vec<&TriadEvent> = events.iter().collect();
    sorted.sort_by_key(|e| {
        (
            registry.name(e.pair.0),
            registry.name(e.pair.1),
            e.year,
            registry.name(e.neighbor),
        )
    });
    let mut out =
        String::from("journal_a\tjournal_b\tyear\tneighbor\tarc\tstatus\tweight\treading\n");
    for event in sorted {
        for arc in &event.arcs {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}->{}\t{}\t{}\t{}\n",
                registry.name(event.pair.0),
                registry.name(event.pair.1),
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

/// Per-year summary rows for several pairs in one table, ordered by pair
/// name then year. `journal_a` is each row's pair member the `a_*` columns
/// refer to.
pub fn island_summaries_tsv(
    summaries: &[AttributionSummary],
    registry: &JournalRegistry,
) -> String {
    let mut sorted: Vec<&AttributionSummary> = summaries.iter().collect();
    sorted.sort_by_key(|s| (registry.name(s.pair.0), registry.name(s.pair.1)));
    let mut out = String::from(
        "year\tjournal_a\tjournal_b\tnew_neighbors\ta_newly_cited_by\ta_newly_cites\t\
         b_newly_cited_by\tb_newly_cites\tnew_with_both\tnew_with_a_only\tnew_with_b_only\n",
    );
    for summary in sorted {
        for row in &summary.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                row.year,
                registry.name(summary.pair.0),
                registry.name(summary.pair.1),
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
    }
    out
}
