use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand};

use triadyn::pipeline::{
    extract_islands, run_pipeline, triad_counts, ExportFormat, PipelineConfig,
};
use triadyn::report::{
    change_summary_tsv, change_tsv, dataset_summary_tsv, overlap_tsv, parse_change_tsv,
    parse_triads_tsv, stats_tsv, triad_graphs, triads_tsv,
};
use triadyn::{emit, parse_year_path};

use triadyn_core::attribution::{
    attribution_dot, attribution_summary, triad_events, write_events_tsv, write_summary_tsv,
    AttributionError,
};
use triadyn_core::dynamics::{
    change_network_from_counts, monotonic_filter, ChangeNetwork, TrendRule,
};
use triadyn_core::ingest::pajek::{write_pajek_arcs, write_pajek_edges};
use triadyn_core::ingest::{load_dataset, write_edge_file};
use triadyn_core::islands::{
    core_linkage, core_linkage_dot, filter_positive, write_island_lines_tsv, write_membership_tsv,
};
use triadyn_core::metrics::{change_summary, link_overlap, year_stats};
use triadyn_core::model::{TemporalDataset, YearNetwork};
use triadyn_core::oracle::{random_dataset, GenSpec};
use triadyn_core::triads::TriadCountGraph;
use triadyn_core::{JournalRegistry, Weight, Year};

/// Find where journal citation traffic is knitting together or unravelling:
/// count the complete triads around every reciprocal pair year by year,
/// keep the pairs whose counts move monotonically, extract line islands
/// from the change network, and attribute each newly closed triad to the
/// new citation arcs that closed it.
#[derive(Parser)]
#[command(name = "triadyn", version, propagate_version = true)]
struct Cli {
    /// Directory the reports are written into.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Worker threads for triad counting; 0 means all available.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Output format, where a report has more than its TSV form.
    #[arg(long, global = true, value_enum, default_value_t = ExportFormat::Tsv)]
    format: ExportFormat,
    #[command(subcommand)]
    command: Command,
}

/// Year-labelled edge files plus the optional alias map, shared by every
/// subcommand that starts from raw data.
#[derive(Args)]
struct EdgesArgs {
    /// Edge file for one year, repeatable: --edges 2011=path/to/2011.tsv
    #[arg(long = "edges", value_name = "YEAR=PATH", required = true, value_parser = parse_year_path)]
    edges: Vec<(Year, PathBuf)>,
    /// Two-column TSV mapping journal name variants to one canonical name.
    #[arg(long)]
    aliases: Option<PathBuf>,
}

impl EdgesArgs {
    fn load(&self) -> Result<TemporalDataset> {
        load_dataset(&self.edges, self.aliases.as_deref()).context("loading the dataset")
    }
}

#[derive(Subcommand)]
enum Command {
    /// Canonicalize raw edge files and summarize the dataset.
    Ingest {
        #[command(flatten)]
        edges: EdgesArgs,
    },
    /// Per-year activity statistics (links, density, degrees, isolates).
    Stats {
        #[command(flatten)]
        edges: EdgesArgs,
    },
    /// Link counts per Venn region across exactly three years.
    Overlap {
        #[command(flatten)]
        edges: EdgesArgs,
    },
    /// Shared-neighbor counts for every reciprocal pair, one table per year.
    Triads {
        #[command(flatten)]
        edges: EdgesArgs,
        /// An arc must reach this weight to make a pair reciprocal.
        /// An arc must reach this weight to make a pair reciprocal.
        #[arg(long, default_value_t = 1)]
        min_weight: Weight,
    },
    /// Year-by-year count trajectories of the persistent pairs.
    Change {
        /// Edge file for one year, repeatable (raw-data route).
        #[arg(long = "edges", value_name = "YEAR=PATH", value_parser = parse_year_path, conflicts_with = "triads")]
        edges: Vec<(Year, PathBuf)>,
        /// Alias map for the raw-data route.
        #[arg(long)]
        aliases: Option<PathBuf>,
        /// Persisted triad table for one year, repeatable (resume route).
        #[arg(long = "triads", value_name = "YEAR=PATH", value_parser = parse_year_path)]
        triads: Vec<(Year, PathBuf)>,
        /// An arc must reach this weight to make a pair reciprocal.
        #[arg(long, default_value_t = 1)]
        min_weight: Weight,
        /// Let consecutive years tie inside a monotonic trend.
        #[arg(long)]
        weak: bool,
        /// Write only the monotonically rising and falling pairs.
        #[arg(long)]
        monotonic_only: bool,
    },
    /// Line islands of the monotonic change network, with their core linkage.
    Islands {
        /// Edge file for one year, repeatable (raw-data route).
        #[arg(long = "edges", value_name = "YEAR=PATH", value_parser = parse_year_path, conflicts_with = "change")]
        edges: Vec<(Year, PathBuf)>,
        /// Alias map for the raw-data route.
        #[arg(long)]
        aliases: Option<PathBuf>,
        /// Persisted change table (resume route).
        #[arg(long)]
        change: Option<PathBuf>,
        /// An arc must reach this weight to make a pair reciprocal.
        #[arg(long, default_value_t = 1)]
        min_weight: Weight,
        /// Let consecutive years tie inside a monotonic trend.
        #[arg(long)]
        weak: bool,
        /// Smallest island size kept.
        #[arg(long, default_value_t = 2)]
        smin: usize,
        /// Largest island size kept (default: unbounded).
        #[arg(long)]
        smax: Option<usize>,
        /// Minimum inter-island contacts for a core-linkage line.
        #[arg(long, default_value_t = 2)]
        min_contacts: usize,
        /// Keep only islands rising in shared neighbors (positive height).
        #[arg(long)]
        positive_only: bool,
    },
    /// Newly closed triads around one pair, attributed to new arcs.
    Attribute {
        #[command(flatten)]
        edges: EdgesArgs,
        /// The pair, as two journal names: --pair "NameA,NameB".
        #[arg(long, value_parser = parse_pair)]
        pair: (String, String),
        /// Restrict to one year (default: every year after the first).
        #[arg(long)]
        year: Option<Year>,
        /// An arc must reach this weight to make a pair reciprocal.
        #[arg(long, default_value_t = 1)]
        min_weight: Weight,
        /// Also draw the events as a DOT graph.
        #[arg(long)]
        dot: bool,
    },
    /// Generate a seeded random dataset in the raw edge-file format.
    Gen {
        /// Number of journals.
        #[arg(long, default_value_t = 100)]
        nodes: usize,
        /// Probability a journal pair is linked at all.
        #[arg(long, default_value_t = 0.05)]
        p_arc: f64,
        /// Probability a linked pair cites in both directions.
        #[arg(long, default_value_t = 0.5)]
        p_recip: f64,
        /// RNG seed; the same seed always yields the same files.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// How many consecutive years to generate.
        #[arg(long, default_value_t = 3)]
        years: usize,
        /// Label of the first year.
        #[arg(long, default_value_t = 2011)]
        start_year: Year,
    },
    /// Run every stage in order into one output directory.
    Pipeline {
        #[command(flatten)]
        edges: EdgesArgs,
        /// An arc must reach this weight to make a pair reciprocal.
        #[arg(long, default_value_t = 1)]
        min_weight: Weight,
        /// Let consecutive years tie inside a monotonic trend.
        #[arg(long)]
        weak: bool,
        /// Smallest island size kept.
        #[arg(long, default_value_t = 2)]
        smin: usize,
        /// Largest island size kept (default: unbounded).
        #[arg(long)]
        smax: Option<usize>,
        /// Minimum inter-island contacts for a core-linkage line.
        #[arg(long, default_value_t = 2)]
        min_contacts: usize,
    },
}

/// `"NameA,NameB"` → two distinct, non-empty names.
fn parse_pair(text: &str) -> Result<(String, String), String> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| format!("expected NameA,NameB, found {text:?}"))?;
    let (a, b) = (a.trim(), b.trim());
    if a.is_empty() || b.is_empty() {
        return Err(format!("expected two names in {text:?}"));
    }
    if a == b {
        return Err(format!(
            "a pair needs two distinct journals, found {a:?} twice"
        ));
    }
    Ok((a.to_string(), b.to_string()))
}

fn trend_rule(weak: bool) -> TrendRule {
    if weak {
        TrendRule::Weak
    } else {
        TrendRule::Strict
    }
}

fn edge_file_string(net: &YearNetwork, registry: &JournalRegistry) -> Result<String> {
    let mut buf = Vec::new();
    write_edge_file(&mut buf, net, registry)?;
    Ok(String::from_utf8(buf).expect("edge files are UTF-8"))
}

/// Read persisted per-year triad tables back into count graphs over one
/// shared registry.
fn read_triad_tables(files: &[(Year, PathBuf)]) -> Result<(JournalRegistry, Vec<TriadCountGraph>)> {
    let mut files = files.to_vec();
    files.sort_by_key(|&(year, _)| year);
    if let Some(w) = files.windows(2).find(|w| w[0].0 == w[1].0) {
        bail!("year {} is given twice", w[0].0);
    }
    let mut registry = JournalRegistry::new();
    let mut per_year = Vec::new();
    for (year, path) in &files {
        let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        let entries = parse_triads_tsv(BufReader::new(file), &mut registry)
            .with_context(|| format!("reading {}", path.display()))?;
        per_year.push((*year, entries));
    }
    let graphs = triad_graphs(per_year, &registry)?;
    Ok((registry, graphs))
}

/// Count graphs from either raw edges or persisted tables; exactly one
/// route must be chosen.
fn counts_from_either(
    edges: &[(Year, PathBuf)],
    aliases: Option<&std::path::Path>,
    triads: &[(Year, PathBuf)],
    min_weight: Weight,
    workers: usize,
) -> Result<(JournalRegistry, Vec<TriadCountGraph>)> {
    match (edges.is_empty(), triads.is_empty()) {
        (false, true) => {
            let dataset = load_dataset(edges, aliases).context("loading the dataset")?;
            let counts = triad_counts(&dataset, min_weight, workers)?;
            Ok((dataset.registry().clone(), counts))
        }
        (true, false) => read_triad_tables(triads),
        (true, true) => {
            bail!("pass either --edges YEAR=PATH or --triads YEAR=PATH (three or more years)")
        }
        (false, false) => {
            bail!("--edges and --triads are two routes to the same table; pass only one")
        }
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let out = &cli.out;
    match cli.command {
        Command::Ingest { edges } => {
            let dataset = edges.load()?;
            let registry = dataset.registry();
            match cli.format {
                ExportFormat::Tsv => {
                    for net in dataset.years() {
                        let name = format!("edges_{}.tsv", net.year());
                        emit(out, &name, &edge_file_string(net, registry)?)?;
                    }
                }
                ExportFormat::Pajek => {
                    for net in dataset.years() {
                        let name = format!("edges_{}.net", net.year());
                        emit(out, &name, &write_pajek_arcs(net, registry))?;
                    }
                }
                ExportFormat::Dot => bail!("raw edges have no DOT form; use --format tsv or pajek"),
            }
            emit(out, "summary.tsv", &dataset_summary_tsv(&dataset))?;
        }
        Command::Stats { edges } => {
            ensure!(
                cli.format == ExportFormat::Tsv,
                "statistics are a table; use --format tsv"
            );
            let dataset = edges.load()?;
            let rows: Vec<_> = dataset
                .years()
                .iter()
                .map(|net| year_stats(net, dataset.registry()))
                .collect();
            emit(out, "stats.tsv", &stats_tsv(&rows))?;
        }
        Command::Overlap { edges } => {
            ensure!(
                cli.format == ExportFormat::Tsv,
                "overlap counts are a table; use --format tsv"
            );
            let dataset = edges.load()?;
            let [first, second, third] = dataset.years() else {
                bail!(
                    "link overlap compares exactly three years, found {}",
                    dataset.n_years()
                );
            };
            emit(
                out,
                "overlap.tsv",
                &overlap_tsv(&link_overlap([first, second, third])),
            )?;
        }
        Command::Triads { edges, min_weight } => {
            ensure!(
                cli.format != ExportFormat::Dot,
                "triad tables have no DOT form; use --format tsv or pajek"
            );
            let dataset = edges.load()?;
            let registry = dataset.registry();
            let counts = triad_counts(&dataset, min_weight, cli.workers)?;
            for graph in &counts {
                emit(
                    out,
                    &format!("triads_{}.tsv", graph.year()),
                    &triads_tsv(graph, registry),
                )?;
                if cli.format == ExportFormat::Pajek {
                    let net = write_pajek_edges(&graph.to_valued_graph(), registry);
                    emit(out, &format!("triads_{}.net", graph.year()), &net)?;
                }
            }
        }
        Command::Change {
            edges,
            aliases,
            triads,
            min_weight,
            weak,
            monotonic_only,
        } => {
            ensure!(
                cli.format != ExportFormat::Dot,
                "the change network has no DOT form; islands draws the core linkage"
            );
            let (registry, counts) =
                counts_from_either(&edges, aliases.as_deref(), &triads, min_weight, cli.workers)?;
            let change = change_network_from_counts(&counts, trend_rule(weak))
                .context("building the change network")?;
            let emitted = if monotonic_only {
                monotonic_filter(&change)
            } else {
                change
            };
            emit(out, "change.tsv", &change_tsv(&emitted, &registry))?;
            emit(
                out,
                "change_summary.tsv",
                &change_summary_tsv(&change_summary(emitted.records())),
            )?;
            if cli.format == ExportFormat::Pajek {
                emit(
                    out,
                    "change.net",
                    &write_pajek_edges(&emitted.to_valued_graph(), &registry),
                )?;
            }
        }
        Command::Islands {
            edges,
            aliases,
            change,
            min_weight,
            weak,
            smin,
            smax,
            min_contacts,
            positive_only,
        } => {
            ensure!(
                cli.format != ExportFormat::Pajek,
                "islands have no Pajek form; use --format tsv or dot"
            );
            let (registry, network): (JournalRegistry, ChangeNetwork) = match (
                &change,
                edges.is_empty(),
            ) {
                (Some(path), true) => {
                    let file =
                        File::open(path).with_context(|| format!("opening {}", path.display()))?;
                    parse_change_tsv(BufReader::new(file))
                        .with_context(|| format!("reading {}", path.display()))?
                }
                (None, false) => {
                    let dataset =
                        load_dataset(&edges, aliases.as_deref()).context("loading the dataset")?;
                    let counts = triad_counts(&dataset, min_weight, cli.workers)?;
                    let network = change_network_from_counts(&counts, trend_rule(weak))
                        .context("building the change network")?;
                    (dataset.registry().clone(), network)
                }
                (None, true) => bail!("pass either --edges YEAR=PATH or --change PATH"),
                (Some(_), false) => {
                    bail!("--edges and --change are two routes to the same network; pass only one")
                }
            };
            let monotonic = monotonic_filter(&network);
            let islands = extract_islands(&monotonic, smin, smax)?;
            let positive = filter_positive(&islands);
            let table_set = if positive_only { &positive } else { &islands };
            let linkage_dot = core_linkage_dot(
                &core_linkage(&monotonic, &positive, min_contacts),
                &positive,
                &registry,
            );
            if cli.format == ExportFormat::Tsv {
                emit(
                    out,
                    "islands.tsv",
                    &write_membership_tsv(table_set, &registry),
                )?;
                emit(
                    out,
                    "island_lines.tsv",
                    &write_island_lines_tsv(table_set, &registry),
                )?;
            }
            emit(out, "core_linkage.dot", &linkage_dot)?;
        }
        Command::Attribute {
            edges,
            pair,
            year,
            min_weight,
            dot,
        } => {
            ensure!(
                cli.format == ExportFormat::Tsv,
                "attribution writes tables (and a drawing with --dot); use --format tsv"
            );
            let dataset = edges.load()?;
            let registry = dataset.registry();
            ensure!(
                dataset.n_years() >= 2,
                "attribution compares consecutive years and needs at least two, found {}",
                dataset.n_years()
            );
            let a = registry
                .get(&pair.0)
                .with_context(|| format!("journal {:?} is not in the dataset", pair.0))?;
            let b = registry
                .get(&pair.1)
                .with_context(|| format!("journal {:?} is not in the dataset", pair.1))?;
            let pair = if a < b { (a, b) } else { (b, a) };
            let mut events = Vec::new();
            match year {
                Some(year) => {
                    events = triad_events(&dataset, pair, year, min_weight).with_context(|| {
                        format!(
                            "attributing triads of {} / {} in {year}",
                            registry.name(pair.0),
                            registry.name(pair.1)
                        )
                    })?;
                }
                None => {
                    for &year in &dataset.year_labels()[1..] {
                        match triad_events(&dataset, pair, year, min_weight) {
                            Ok(mut year_events) => events.append(&mut year_events),
                            // Years the pair sat out say nothing about it.
                            Err(AttributionError::NotReciprocal { .. }) => continue,
                            Err(err) => {
                                return Err(err).with_context(|| {
                                    format!(
                                        "attributing triads of {} / {} in {year}",
                                        registry.name(pair.0),
                                        registry.name(pair.1)
                                    )
                                });
                            }
                        }
                    }
                }
            }
            emit(out, "attribution.tsv", &write_events_tsv(&events, registry))?;
            let summary = attribution_summary(pair, &events);
            emit(
                out,
                "attribution_summary.tsv",
                &write_summary_tsv(&summary, registry),
            )?;
            if dot {
                emit(
                    out,
                    "attribution.dot",
                    &attribution_dot(pair, &events, registry),
                )?;
            }
        }
        Command::Gen {
            nodes,
            p_arc,
            p_recip,
            seed,
            years,
            start_year,
        } => {
            ensure!(
                cli.format == ExportFormat::Tsv,
                "gen writes raw edge files; use --format tsv"
            );
            let spec = GenSpec {
                n: nodes,
                p_arc,
                p_recip,
                seed,
            };
            let dataset =
                random_dataset(&spec, years, start_year).context("generating the dataset")?;
            let registry = dataset.registry();
            for net in dataset.years() {
                let name = format!("edges_{}.tsv", net.year());
                emit(out, &name, &edge_file_string(net, registry)?)?;
            }
        }
        Command::Pipeline {
            edges,
            min_weight,
            weak,
            smin,
            smax,
            min_contacts,
        } => {
            let config = PipelineConfig {
                edges: edges.edges,
                aliases: edges.aliases,
                out_dir: cli.out.clone(),
                workers: cli.workers,
                smin,
                smax,
                trend_rule: trend_rule(weak),
                min_weight,
                min_contacts,
                format: cli.format,
            };
            run_pipeline(&config)?;
        }
    }
    Ok(())
}
