//! The end-to-end run: ingest, per-year statistics, triad counts, change
//! network, islands, core linkage, and per-island attribution, each stage
//! persisted to the output directory before the next one starts.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};

use triadyn_core::attribution::{
    attribution_summary, triad_events, AttributionSummary, TriadEvent,
};
use triadyn_core::dynamics::{change_network_from_counts, monotonic_filter, TrendRule};
use triadyn_core::ingest::load_dataset;
use triadyn_core::ingest::pajek::write_pajek_edges;
use triadyn_core::islands::{
    core_linkage, core_linkage_dot, display_order, filter_positive, line_islands,
    write_island_lines_tsv, write_membership_tsv, IslandSet,
};
use triadyn_core::metrics::{change_summary, link_overlap, year_stats};
use triadyn_core::model::TemporalDataset;
use triadyn_core::triads::{
    reciprocal_graph_with_threshold, shared_neighbor_counts, TriadCountGraph,
};
use triadyn_core::{Change, Weight, Year};

use crate::report::{
    change_summary_tsv, change_tsv, dataset_summary_tsv, island_events_tsv, island_summaries_tsv,
    overlap_tsv, stats_tsv, triads_tsv,
};
use crate::{emit, parse_year_path};

/// File format for the exported tables and graphs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum ExportFormat {
    /// Tab-separated tables (the native format every stage can re-read).
    #[default]
    Tsv,
    /// Pajek .net files alongside the tables, for graph tooling.
    Pajek,
    /// Graphviz DOT renderings where a drawing exists for the stage.
    Dot,
}

/// Everything `run_pipeline` needs, assembled by the `pipeline` subcommand.
#[derive(Clone, Debug)]
pub struct PipelineConfig {
    /// Year-labelled edge files, any order.
    pub edges: Vec<(Year, PathBuf)>,
    /// Optional alias map folding journal name variants together.
    pub aliases: Option<PathBuf>,
    pub out_dir: PathBuf,
    /// Worker threads for the triad-counting stage; 0 = all available.
    pub workers: usize,
    /// Island size bounds.
    pub smin: usize,
    pub smax: Option<usize>,
    /// How ties inside a count sequence affect the trend classes.
    pub trend_rule: TrendRule,
    /// An arc must reach this weight to make a pair reciprocal.
    pub min_weight: Weight,
    /// Minimum inter-island contacts for a linkage line.
    pub min_contacts: usize,
    /// Extra export format on top of the standard TSV + DOT bundle.
    pub format: ExportFormat,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            edges: Vec::new(),
            aliases: None,
            out_dir: PathBuf::from("."),
            workers: 0,
            smin: 2,
            smax: None,
            trend_rule: TrendRule::Strict,
            min_weight: 1,
            min_contacts: 2,
            format: ExportFormat::Tsv,
        }
    }
}

impl PipelineConfig {
    /// Parse repeated `YEAR=PATH` arguments into the edge list.
    pub fn with_edge_args(mut self, args: &[String]) -> Result<Self> {
        for arg in args {
            let pair = parse_year_path(arg).map_err(anyhow::Error::msg)?;
            self.edges.push(pair);
        }
        Ok(self)
    }
}

/// Count shared neighbors for every year on a pool of `workers` threads
/// (0 = whatever the process has). The counts do not depend on the worker
/// count; only the wall time does.
pub fn triad_counts(
    dataset: &TemporalDataset,
    min_weight: Weight,
    workers: usize,
) -> Result<Vec<TriadCountGraph>> {
    let n = dataset.registry().len();
    let count_all = || {
        dataset
            .years()
            .iter()
            .map(|net| {
                let g = reciprocal_graph_with_threshold(net, n, min_weight);
                shared_neighbor_counts(&g)
            })
            .collect::<Vec<_>>()
    };
    if workers == 0 {
        Ok(count_all())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .context("building the triad worker pool")?;
        Ok(pool.install(count_all))
    }
}

/// Line islands of the monotonic change network.
pub fn extract_islands(
    monotonic: &triadyn_core::dynamics::ChangeNetwork,
    smin: usize,
    smax: Option<usize>,
) -> Result<IslandSet<Change>> {
    let graph = monotonic.to_valued_graph();
    line_islands(&graph, smin, smax).context("extracting line islands")
}

/// Attribution reports for one island: every defining pair, every year after
/// the first, events and per-pair summaries.
pub fn island_attribution(
    dataset: &TemporalDataset,
    island_pairs: &[(triadyn_core::JournalId, triadyn_core::JournalId)],
    min_weight: Weight,
) -> Result<(Vec<TriadEvent>, Vec<AttributionSummary>)> {
    let registry = dataset.registry();
    let mut events = Vec::new();
    let mut summaries = Vec::new();
    for &pair in island_pairs {
        let mut pair_events = Vec::new();
        for &year in &dataset.year_labels()[1..] {
            let year_events = triad_events(dataset, pair, year, min_weight).with_context(|| {
                format!(
                    "attributing triads of {} / {} in {year}",
                    registry.name(pair.0),
                    registry.name(pair.1)
                )
            })?;
            pair_events.extend(year_events);
        }
        let pair = if pair.0 < pair.1 {
            pair
        } else {
            (pair.1, pair.0)
        };
        summaries.push(attribution_summary(pair, &pair_events));
        events.extend(pair_events);
    }
    Ok((events, summaries))
}

/// The unique pairs defining each island, id-ordered and sorted.
fn defining_pairs(
    island: &triadyn_core::islands::Island<Change>,
) -> Vec<(triadyn_core::JournalId, triadyn_core::JournalId)> {
    let mut pairs: Vec<_> = island
        .defining_lines
        .iter()
        .map(|&(a, b, _)| (a, b))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

/// Run every stage in order, writing each report before the next stage
/// starts so a failed run leaves the finished stages behind.
pub fn run_pipeline(config: &PipelineConfig) -> Result<()> {
    if config.edges.len() < 3 {
        bail!(
            "tracking change needs at least three years of data, found {}: \
             pass three or more --edges YEAR=PATH arguments",
            config.edges.len()
        );
    }
    let out = &config.out_dir;

    let dataset = load_dataset(&config.edges, config.aliases.as_deref()).context("ingest stage")?;
    let registry = dataset.registry();
    emit(out, "summary.tsv", &dataset_summary_tsv(&dataset)).context("ingest stage")?;

    let stats: Vec<_> = dataset
        .years()
        .iter()
        .map(|net| year_stats(net, registry))
        .collect();
    emit(out, "stats.tsv", &stats_tsv(&stats)).context("stats stage")?;

    if let [first, second, third] = dataset.years() {
        let counts = link_overlap([first, second, third]);
        emit(out, "overlap.tsv", &overlap_tsv(&counts)).context("overlap stage")?;
    }

    let counts =
        triad_counts(&dataset, config.min_weight, config.workers).context("triads stage")?;
    for graph in &counts {
        let name = format!("triads_{}.tsv", graph.year());
        emit(out, &name, &triads_tsv(graph, registry)).context("triads stage")?;
        if config.format == ExportFormat::Pajek {
            let net = write_pajek_edges(&graph.to_valued_graph(), registry);
            emit(out, &format!("triads_{}.net", graph.year()), &net).context("triads stage")?;
        }
    }

    let change = change_network_from_counts(&counts, config.trend_rule).context("change stage")?;
    emit(out, "change.tsv", &change_tsv(&change, registry)).context("change stage")?;
    emit(
        out,
        "change_summary.tsv",
        &change_summary_tsv(&change_summary(change.records())),
    )
    .context("change stage")?;
    if config.format == ExportFormat::Pajek {
        let net = write_pajek_edges(&change.to_valued_graph(), registry);
        emit(out, "change.net", &net).context("change stage")?;
    }

    let monotonic = monotonic_filter(&change);
    let islands = extract_islands(&monotonic, config.smin, config.smax).context("islands stage")?;
    emit(
        out,
        "islands.tsv",
        &write_membership_tsv(&islands, registry),
    )
    .context("islands stage")?;
    emit(
        out,
        "island_lines.tsv",
        &write_island_lines_tsv(&islands, registry),
    )
    .context("islands stage")?;

    let positive = filter_positive(&islands);
    let linkage = core_linkage(&monotonic, &positive, config.min_contacts);
    emit(
        out,
        "core_linkage.dot",
        &core_linkage_dot(&linkage, &positive, registry),
    )
    .context("linkage stage")?;

    for (display_id, &k) in display_order(&positive, registry).iter().enumerate() {
        let pairs = defining_pairs(&positive.islands()[k]);
        let (events, summaries) =
            island_attribution(&dataset, &pairs, config.min_weight).context("attribution stage")?;
        emit(
            out,
            &format!("attribution_island_{display_id}.tsv"),
            &island_events_tsv(&events, registry),
        )
        .context("attribution stage")?;
        emit(
            out,
            &format!("attribution_island_{display_id}_summary.tsv"),
            &island_summaries_tsv(&summaries, registry),
        )
        .context("attribution stage")?;
    }

    Ok(())
}
