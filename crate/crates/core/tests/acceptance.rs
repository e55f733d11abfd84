//! The acceptance gate: one test per criterion, each printing a single
//! `acceptance: criterion N (...): PASS`/`FAIL` line (visible with
//! `cargo test -- --nocapture`). Every criterion checks the optimized code
//! against an independent route — brute-force enumeration, a hand-checked
//! fixture, or a direct restatement of a definition — never against itself.

use std::panic::{catch_unwind, UnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use triadyn_core::attribution::{triad_events, ArcObservation, AttributionError, TriadEvent};
use triadyn_core::dynamics::{change_network_from_counts, Trend, TrendRule};
use triadyn_core::islands::line_islands;
use triadyn_core::metrics::{change_summary, format_ratio, year_stats};
use triadyn_core::model::{JournalRegistry, TemporalDataset, YearNetwork};
use triadyn_core::oracle::{brute_islands, brute_triads, random_dataset, GenSpec};
use triadyn_core::triads::{
    reciprocal_graph, shared_neighbor_counts, triangle_total, ReciprocalGraph, TriadCountGraph,
};
use triadyn_core::{Change, Count, JournalId, ValuedGraph, Weight, Year};

/// Run one criterion's body and print its verdict line, re-raising any
/// failure so `cargo test` still reports it.
fn criterion<F: FnOnce() + UnwindSafe>(number: u32, label: &str, body: F) {
    match catch_unwind(body) {
        Ok(()) => println!("acceptance: criterion {number} ({label}): PASS"),
        Err(panic) => {
            println!("acceptance: criterion {number} ({label}): FAIL");
            std::panic::resume_unwind(panic);
        }
    }
}

fn j(id: u32) -> JournalId {
    JournalId(id)
}

#[test]
fn criterion_01_shared_neighbor_kernel_matches_brute_enumeration() {
    criterion(1, "triad kernel vs brute enumeration, 200 graphs", || {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
        for case in 0u32..200 {
            let n = rng.gen_range(3..=60usize);
            // Sweep edge probability from very sparse to near-complete.
            let p = 0.02 + 0.9 * f64::from(case) / 199.0;
            let mut edges = Vec::new();
            for a in 0..n as u32 {
                for b in a + 1..n as u32 {
                    if rng.gen::<f64>() < p {
                        edges.push((j(a), j(b)));
                    }
                }
            }
            let g = ReciprocalGraph::from_edges(case as Year, n, edges);
            let brute = brute_triads(&g).expect("within the oracle's size bound");
            let fast = shared_neighbor_counts(&g);
            assert_eq!(fast, brute, "case {case} (n={n}, p={p:.3})");
            // Each triangle is counted once per incident edge.
            triangle_total(&fast).expect("count sum divisible by three");
        }
        let elapsed = start.elapsed();
        assert!(
            elapsed <= Duration::from_secs(10),
            "200 comparisons took {elapsed:?}, budget is 10s"
        );
    });
}

#[test]
fn criterion_02_two_hub_fixture_has_three_shared_neighbors() {
    criterion(2, "two-hub fixture: count(J1,J2) = 3", || {
        // J1 and J2 are reciprocally tied to each other and to three common
        // partners J3, J4, J5; J2 alone is reciprocal with J6, and J1 only
        // cites J6 one-way, so J6 must not count as shared.
        let mut registry = JournalRegistry::new();
        let ids: Vec<JournalId> = (1..=6)
            .map(|i| registry.register(&format!("J{i}")).unwrap())
            .collect();
        let at = |i: usize| ids[i - 1];
        let mut net = YearNetwork::new(2011);
        let reciprocal = |net: &mut YearNetwork, a: JournalId, b: JournalId| {
            net.add_citation(a, b, 1).unwrap();
            net.add_citation(b, a, 1).unwrap();
        };
        for other in [2, 3, 4, 5] {
            reciprocal(&mut net, at(1), at(other));
        }
        for other in [3, 4, 5, 6] {
            reciprocal(&mut net, at(2), at(other));
        }
        net.add_citation(at(1), at(6), 1).unwrap();

        let g = reciprocal_graph(&net, registry.len());
        let counts = shared_neighbor_counts(&g);
        assert_eq!(counts.count(at(1), at(2)), Some(3));
        let shared: Vec<JournalId> = g
            .neighbors(at(1))
            .iter()
            .filter(|n| g.neighbors(at(2)).contains(n))
            .copied()
            .collect();
        assert_eq!(shared, vec![at(3), at(4), at(5)]);
    });
}

/// Ten journals in a chain of value-1 lines carrying three pockets of
/// higher value: {J1,J2} tied at 2, {J4,J8} tied at 2, and {J7,J9,J10}
/// spanned at 3 with one internal value-1 line (J7,J9) that must stay out
/// of the defining set.
fn ten_node_fixture() -> ValuedGraph<i64> {
    ValuedGraph::new(
        10,
        vec![
            (j(0), j(1), 2),
            (j(3), j(7), 2),
            (j(6), j(9), 3),
            (j(8), j(9), 3),
            (j(6), j(8), 1),
            (j(0), j(2), 1),
            (j(1), j(2), 1),
            (j(2), j(3), 1),
            (j(3), j(4), 1),
            (j(4), j(5), 1),
            (j(5), j(6), 1),
            (j(4), j(7), 1),
            (j(7), j(8), 1),
        ],
    )
    .unwrap()
}

#[test]
fn criterion_03_ten_node_fixture_yields_three_islands() {
    criterion(3, "ten-node valued fixture: three islands", || {
        let g = ten_node_fixture();
        // Oracle first: the subset-enumeration route fixes the expected
        // result before the union-find algorithm is consulted.
        let brute = brute_islands(&g, 2, Some(5)).unwrap();
        type Expected = (&'static [u32], i64, &'static [(u32, u32, i64)]);
        let expectations: [Expected; 3] = [
            (&[0, 1], 2, &[(0, 1, 2)]),
            (&[3, 7], 2, &[(3, 7, 2)]),
            (&[6, 8, 9], 3, &[(6, 9, 3), (8, 9, 3)]),
        ];
        assert_eq!(brute.len(), 3);
        for (members, height, lines) in expectations {
            let k = brute.island_of(j(members[0])).expect("member assigned");
            let island = &brute.islands()[k];
            let got: Vec<u32> = island.members.iter().map(|m| m.0).collect();
            assert_eq!(got, members);
            assert_eq!(island.height, height);
            let got_lines: Vec<(u32, u32, i64)> = island
                .defining_lines
                .iter()
                .map(|&(a, b, v)| (a.0, b.0, v))
                .collect();
            assert_eq!(got_lines, lines, "defining lines of {members:?}");
        }
        let fast = line_islands(&g, 2, Some(5)).unwrap();
        assert_eq!(fast, brute);
    });
}

#[test]
fn criterion_04_island_extraction_matches_brute_subsets() {
    criterion(4, "islands vs brute subsets, 200 graphs", || {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0xC4);
        for case in 0..200u32 {
            let n = rng.gen_range(2..=12usize);
            let p = rng.gen_range(0.15..0.85);
            let smin = 2;
            let smax = if rng.gen::<bool>() {
                None
            } else {
                Some(rng.gen_range(smin..=n.max(smin)))
            };
            let mut lines = Vec::new();
            for a in 0..n as u32 {
                for b in a + 1..n as u32 {
                    if rng.gen::<f64>() < p {
                        // A tight signed value set forces plenty of ties.
                        lines.push((j(a), j(b), rng.gen_range(-3i64..=3)));
                    }
                }
            }
            if case % 2 == 0 {
                let g = ValuedGraph::new(n, lines).unwrap();
                let brute = brute_islands(&g, smin, smax).unwrap();
                let fast = line_islands(&g, smin, smax).unwrap();
                assert_eq!(fast, brute, "case {case} (n={n}, smax={smax:?}, i64)");
            } else {
                // Same comparison over exact-rational values, the type the
                // change network actually carries.
                let rational: Vec<(JournalId, JournalId, Change)> = lines
                    .into_iter()
                    .map(|(a, b, v)| (a, b, Change::new(v, 2)))
                    .collect();
                let g = ValuedGraph::new(n, rational).unwrap();
                let brute = brute_islands(&g, smin, smax).unwrap();
                let fast = line_islands(&g, smin, smax).unwrap();
                assert_eq!(fast, brute, "case {case} (n={n}, smax={smax:?}, rational)");
            }
        }
        let elapsed = start.elapsed();
        assert!(
            elapsed <= Duration::from_secs(30),
            "200 comparisons took {elapsed:?}, budget is 30s"
        );
    });
}

#[test]
fn criterion_05_trend_taxonomy_restates_the_definitions() {
    criterion(5, "trend taxonomy on 10,000 count triples", || {
        // Direct restatement of the classes, used as the second route.
        fn direct(counts: &[Count], rule: TrendRule) -> Trend {
            let strictly =
                |cmp: fn(&Count, &Count) -> bool| counts.windows(2).all(|w| cmp(&w[1], &w[0]));
            let moved = counts[counts.len() - 1] != counts[0];
            let (up, down) = match rule {
                TrendRule::Strict => (strictly(|a, b| a > b), strictly(|a, b| a < b)),
                TrendRule::Weak => (
                    strictly(|a, b| a >= b) && moved,
                    strictly(|a, b| a <= b) && moved,
                ),
            };
            match (up, down) {
                (true, _) => Trend::MonotonicUp,
                (_, true) => Trend::MonotonicDown,
                _ => Trend::Other,
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(0xC5);
        for rule in [TrendRule::Strict, TrendRule::Weak] {
            let mut records = Vec::new();
            for case in 0..10_000u32 {
                // Small counts make ties and monotone runs common.
                let counts: [Count; 3] = [
                    rng.gen_range(0..=4),
                    rng.gen_range(0..=4),
                    rng.gen_range(0..=4),
                ];
                let per_year: Vec<TriadCountGraph> = (0..3usize)
                    .map(|y| {
                        TriadCountGraph::from_entries(y as Year + 1, 2, [(j(0), j(1), counts[y])])
                    })
                    .collect();
                let network = change_network_from_counts(&per_year, rule).unwrap();
                let record = &network.records()[0];
                assert_eq!(
                    record.avg_change,
                    Change::new(i64::from(counts[2]) - i64::from(counts[0]), 2),
                    "case {case}: avg_change of {counts:?}"
                );
                assert_eq!(
                    record.trend,
                    direct(&record.counts, rule),
                    "case {case}: trend of {counts:?} under {rule:?}"
                );
                // Nesting: monotonic change implies net change that way.
                match record.trend {
                    Trend::MonotonicUp => assert!(record.avg_change > Change::new(0, 1)),
                    Trend::MonotonicDown => assert!(record.avg_change < Change::new(0, 1)),
                    Trend::Other => {}
                }
                records.push(record.clone());
            }
            let summary = change_summary(&records);
            assert_eq!(summary.total, 10_000);
            assert_eq!(
                summary.net_increase + summary.net_neutral + summary.net_decrease,
                summary.total,
                "net classes partition the records"
            );
            assert!(summary.monotonic_increase <= summary.net_increase);
            assert!(summary.monotonic_decrease <= summary.net_decrease);
        }
    });
}

#[test]
fn criterion_06_desk_scale_density_displays_as_0_026() {
    criterion(6, "8,781 journals / 1,982,108 arcs: density 0.026", || {
        let n = 8_781usize;
        let target_arcs = 1_982_108usize;
        let mut registry = JournalRegistry::new();
        for i in 1..=n {
            registry.register(&format!("J{i}")).unwrap();
        }
        // Fill the first rows of the adjacency matrix until exactly the
        // target number of distinct arcs is present.
        let mut net = YearNetwork::new(1994);
        let mut added = 0usize;
        'fill: for cited in 0..n as u32 {
            for citing in 0..n as u32 {
                if added == target_arcs {
                    break 'fill;
                }
                net.add_citation(j(cited), j(citing), 1).unwrap();
                added += 1;
            }
        }
        assert_eq!(net.n_arcs(), target_arcs);
        let stats = year_stats(&net, &registry);
        assert_eq!(
            stats.density_loops,
            num_rational::Ratio::new(target_arcs as u64, (n * n) as u64)
        );
        assert_eq!(format_ratio(stats.density_loops, 3), "0.026");
    });
}

/// Weight of `cited → citing` reaching the presence threshold.
fn present(net: &YearNetwork, cited: JournalId, citing: JournalId, min_weight: Weight) -> bool {
    net.arc_weight(cited, citing) >= min_weight
}

fn reciprocal_at(net: &YearNetwork, a: JournalId, b: JournalId, min_weight: Weight) -> bool {
    a != b && present(net, a, b, min_weight) && present(net, b, a, min_weight)
}

/// Recompute one pair-year's events straight from the raw arcs: shared
/// neighbors are set-intersected per year, the new ones are the set
/// difference, and each of the four arcs is looked up in both years.
fn brute_events(
    dataset: &TemporalDataset,
    pair: (JournalId, JournalId),
    year: Year,
    min_weight: Weight,
) -> Vec<TriadEvent> {
    let labels = dataset.year_labels();
    let pos = labels.iter().position(|&y| y == year).unwrap();
    let prev = &dataset.years()[pos - 1];
    let cur = &dataset.years()[pos];
    let (a, b) = if pair.0 < pair.1 {
        pair
    } else {
        (pair.1, pair.0)
    };
    let shared = |net: &YearNetwork, x: JournalId| {
        reciprocal_at(net, a, x, min_weight) && reciprocal_at(net, b, x, min_weight)
    };
    let mut events = Vec::new();
    for id in 0..dataset.registry().len() as u32 {
        let n = j(id);
        if n == a || n == b || !shared(cur, n) || shared(prev, n) {
            continue;
        }
        let observe = |cited: JournalId, citing: JournalId| ArcObservation {
            cited,
            citing,
            weight: cur.arc_weight(cited, citing),
            is_new: !present(prev, cited, citing, min_weight),
        };
        events.push(TriadEvent {
            pair: (a, b),
            neighbor: n,
            year,
            arcs: [observe(a, n), observe(n, a), observe(b, n), observe(n, b)],
            annotation: None,
        });
    }
    events
}

#[test]
fn criterion_07_attribution_matches_raw_arc_recomputation() {
    criterion(
        7,
        "attribution vs raw-arc recomputation, 100 datasets",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(0xC7);
            let mut compared = 0usize;
            for case in 0..100u64 {
                let spec = GenSpec {
                    n: rng.gen_range(8..=20),
                    p_arc: rng.gen_range(0.3..0.7),
                    p_recip: rng.gen_range(0.5..0.95),
                    seed: 0x7000 + case,
                };
                let dataset = random_dataset(&spec, 3, 2011).unwrap();
                let min_weight: Weight = if case % 2 == 0 { 1 } else { 2 };
                for &year in &dataset.year_labels()[1..] {
                    let pos = dataset
                        .year_labels()
                        .iter()
                        .position(|&y| y == year)
                        .unwrap();
                    let prev = &dataset.years()[pos - 1];
                    let cur = &dataset.years()[pos];
                    for a in 0..spec.n as u32 {
                        for b in a + 1..spec.n as u32 {
                            let pair = (j(a), j(b));
                            // Events are defined against the preceding year, so
                            // the pair must be reciprocal in both.
                            if reciprocal_at(cur, pair.0, pair.1, min_weight)
                                && reciprocal_at(prev, pair.0, pair.1, min_weight)
                            {
                                let got = triad_events(&dataset, pair, year, min_weight).unwrap();
                                let want = brute_events(&dataset, pair, year, min_weight);
                                assert_eq!(got, want, "case {case}, pair {pair:?}, year {year}");
                                compared += 1;
                            } else {
                                assert!(matches!(
                                    triad_events(&dataset, pair, year, min_weight),
                                    Err(AttributionError::NotReciprocal { .. })
                                ));
                            }
                        }
                    }
                }
            }
            assert!(
            compared > 1_000,
            "only {compared} reciprocal pair-years generated; the sample is too thin to mean much"
        );
        },
    );
}

#[test]
fn criterion_10_island_structure_is_shift_invariant() {
    criterion(10, "island membership invariant under value shifts", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xCA);
        for case in 0..50u32 {
            let n = rng.gen_range(2..=30usize);
            let p = rng.gen_range(0.1..0.6);
            let mut lines = Vec::new();
            for a in 0..n as u32 {
                for b in a + 1..n as u32 {
                    if rng.gen::<f64>() < p {
                        lines.push((j(a), j(b), rng.gen_range(-5i64..=5)));
                    }
                }
            }
            let g = ValuedGraph::new(n, lines).unwrap();
            let smax = if rng.gen::<bool>() {
                None
            } else {
                Some(rng.gen_range(2..=n.max(2)))
            };
            let shift = loop {
                let c = rng.gen_range(-7i64..=7);
                if c != 0 {
                    break c;
                }
            };
            let before = line_islands(&g, 2, smax).unwrap();
            let after = line_islands(&g.map_values(|v| v + shift), 2, smax).unwrap();
            assert_eq!(before.len(), after.len(), "case {case}");
            for (x, y) in before.islands().iter().zip(after.islands()) {
                assert_eq!(x.members, y.members, "case {case}");
                assert_eq!(x.height + shift, y.height, "case {case}");
                let shifted: Vec<_> = x
                    .defining_lines
                    .iter()
                    .map(|&(a, b, v)| (a, b, v + shift))
                    .collect();
                assert_eq!(shifted, y.defining_lines, "case {case}");
            }
        }
    });
}
