//! The binary-level acceptance gate: output determinism across runs and
//! worker counts, and wall-clock/memory budgets at the scale the pipeline
//! is meant for. Each test prints one `acceptance: criterion N (...):
//! PASS`/`FAIL` line (visible with `cargo test -- --nocapture`).

use std::collections::BTreeMap;
use std::panic::{catch_unwind, UnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use triadyn::pipeline::{run_pipeline, PipelineConfig};
use triadyn_core::ingest::write_edge_file;
use triadyn_core::metrics::year_stats;
use triadyn_core::oracle::{random_dataset, GenSpec};
use triadyn_core::triads::{reciprocal_graph, shared_neighbor_counts};
use triadyn_core::Year;

fn criterion<F: FnOnce() + UnwindSafe>(number: u32, label: &str, body: F) {
    match catch_unwind(body) {
        Ok(()) => println!("acceptance: criterion {number} ({label}): PASS"),
        Err(panic) => {
            println!("acceptance: criterion {number} ({label}): FAIL");
            std::panic::resume_unwind(panic);
        }
    }
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_triadyn"))
}

fn run_ok(cmd: &mut Command) {
    let output = cmd.output().expect("binary runs");
    assert!(
        output.status.success(),
        "command failed:\n{}",
        String::from_utf8_lossy(&output.stderr)
    );
}

/// Every regular file in `dir` by name, with its exact bytes.
fn bundle(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    for entry in std::fs::read_dir(dir).expect("output directory exists") {
        let entry = entry.unwrap();
        if entry.file_type().unwrap().is_file() {
            files.insert(
                entry.file_name().into_string().unwrap(),
                std::fs::read(entry.path()).unwrap(),
            );
        }
    }
    files
}

#[test]
fn criterion_08_pipeline_output_is_deterministic() {
    criterion(
        8,
        "byte-identical bundles across runs and worker counts",
        || {
            let dir = tempfile::tempdir().unwrap();
            let data = dir.path().join("data");
            // Dense enough that every stage produces rows, attribution included.
            run_ok(
                binary()
                    .args([
                        "gen",
                        "--nodes",
                        "30",
                        "--p-arc",
                        "0.6",
                        "--p-recip",
                        "0.9",
                        "--seed",
                        "11",
                        "--out",
                    ])
                    .arg(&data),
            );

            let mut bundles = Vec::new();
            for workers in ["1", "4", "0"] {
                for repeat in 0..3 {
                    let out = dir.path().join(format!("run_w{workers}_{repeat}"));
                    let mut cmd = binary();
                    cmd.args(["pipeline", "--workers", workers, "--out"])
                        .arg(&out);
                    for year in ["2011", "2012", "2013"] {
                        cmd.arg("--edges").arg(format!(
                            "{year}={}",
                            data.join(format!("edges_{year}.tsv")).display()
                        ));
                    }
                    run_ok(&mut cmd);
                    bundles.push((workers, repeat, bundle(&out)));
                }
            }

            let (_, _, reference) = &bundles[0];
            assert!(
                reference.contains_key("attribution_island_0.tsv"),
                "the fixture dataset should produce at least one rising island, found files {:?}",
                reference.keys().collect::<Vec<_>>()
            );
            assert!(
                reference.len() >= 11,
                "bundle is missing reports: {:?}",
                reference.keys()
            );
            for (workers, repeat, files) in &bundles[1..] {
                assert_eq!(
                    files, reference,
                    "bundle differs on workers={workers} repeat={repeat}"
                );
            }
        },
    );
}

/// Peak resident size of this process so far, from the kernel's accounting.
fn peak_memory_kib() -> u64 {
    let status = std::fs::read_to_string("/proc/self/status").expect("procfs available");
    let line = status
        .lines()
        .find(|l| l.starts_with("VmHWM:"))
        .expect("VmHWM reported");
    line.split_whitespace()
        .nth(1)
        .unwrap()
        .parse()
        .expect("VmHWM is a number")
}

#[test]
fn criterion_09_scale_budget_9000_nodes_mean_degree_100() {
    criterion(9, "9,000 nodes/year at mean reciprocal degree 100", || {
        // 8,999 potential partners x p_arc x p_recip ~= 100 reciprocal
        // partners per journal, ~450,000 reciprocal pairs per year.
        let spec = GenSpec {
            n: 9_000,
            p_arc: 0.012346,
            p_recip: 0.9,
            seed: 0xC9,
        };
        let dataset = random_dataset(&spec, 3, 2011).unwrap();
        let registry = dataset.registry();

        let mut year_files: Vec<(Year, std::path::PathBuf)> = Vec::new();
        let dir = tempfile::tempdir().unwrap();
        for net in dataset.years() {
            let stats = year_stats(net, registry);
            let mean_reciprocal = *stats.avg_reciprocal_degree.numer() as f64
                / *stats.avg_reciprocal_degree.denom() as f64;
            assert!(
                (90.0..=110.0).contains(&mean_reciprocal),
                "year {}: mean reciprocal degree {mean_reciprocal:.1} is off target",
                net.year()
            );

            let started = Instant::now();
            let g = reciprocal_graph(net, registry.len());
            let counts = shared_neighbor_counts(&g);
            let elapsed = started.elapsed();
            assert!(counts.entries().len() > 300_000, "unexpectedly thin year");
            assert!(
                elapsed <= Duration::from_secs(30),
                "triad counting for year {} took {elapsed:?}, budget is 30s",
                net.year()
            );

            let path = dir.path().join(format!("edges_{}.tsv", net.year()));
            let mut file = std::io::BufWriter::new(std::fs::File::create(&path).unwrap());
            write_edge_file(&mut file, net, registry).unwrap();
            year_files.push((net.year(), path));
        }
        drop(dataset);

        let started = Instant::now();
        let config = PipelineConfig {
            edges: year_files,
            out_dir: dir.path().join("out"),
            ..PipelineConfig::default()
        };
        run_pipeline(&config).unwrap();
        let elapsed = started.elapsed();
        assert!(
            elapsed <= Duration::from_secs(180),
            "full pipeline took {elapsed:?}, budget is 3 minutes"
        );

        let peak = peak_memory_kib();
        assert!(
            peak <= 2 * 1024 * 1024,
            "peak memory {peak} KiB exceeds the 2 GiB budget"
        );

        // The run must have actually processed the load it claims.
        let triads = std::fs::read_to_string(dir.path().join("out/triads_2011.tsv")).unwrap();
        assert!(triads.lines().count() > 300_000);
    });
}
