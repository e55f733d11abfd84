//! Brute-force reference implementations and a seeded instance generator.
//!
//! Everything here trades speed for transparency: the functions restate the
//! definitions directly (triple enumeration, subset enumeration) so that a
//! disagreement with the optimized modules localizes the bug there. Size
//! bounds are hard errors — a forgotten bound on a subset enumeration is a
//! hung test run. None of this is on the production path.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::islands::{Island, IslandSet};
use crate::model::{JournalId, JournalRegistry, TemporalDataset, YearNetwork};
use crate::triads::{ReciprocalGraph, TriadCountGraph};
use crate::value::{LineValue, ValuedGraph};
use crate::{Count, Year};

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("{what} must lie in [0, 1] (got {value})")]
    BadProbability { what: &'static str, value: f64 },
    #[error("{what} handles at most {max} vertices (got {n})")]
    TooLarge {
        what: &'static str,
        n: usize,
        max: usize,
    },
}

/// Parameters for [`random_dataset`]. The same spec always generates the
/// same instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    /// Probability that an unordered journal pair gets a citation arc.
    pub p_arc: f64,
    /// Probability that a generated arc is accompanied by its reverse.
    pub p_recip: f64,
    pub seed: u64,
}

impl GenSpec {
    fn validate(&self) -> Result<(), OracleError> {
        for (what, value) in [("p_arc", self.p_arc), ("p_recip", self.p_recip)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(OracleError::BadProbability { what, value });
            }
        }
        Ok(())
    }
}

/// Generate `years` independent yearly digraphs over journals "J1".."J{n}"
/// with year labels starting at `start_year`. Weights are uniform in 1..=10;
/// no loops are generated. Deterministic in the seed.
pub fn random_dataset(
    spec: &GenSpec,
    years: usize,
    start_year: Year,
) -> Result<TemporalDataset, OracleError> {
    spec.validate()?;
    let mut registry = JournalRegistry::new();
    for i in 1..=spec.n {
        registry
            .register(&format!("J{i}"))
            .expect("generated names are valid and unique");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut nets = Vec::with_capacity(years);
    for offset in 0..years {
        let mut net = YearNetwork::new(start_year + offset as Year);
        for i in 0..spec.n as u32 {
            for k in i + 1..spec.n as u32 {
                if rng.gen::<f64>() >= spec.p_arc {
                    continue;
                }
                let (cited, citing) = if rng.gen::<bool>() {
                    (JournalId(i), JournalId(k))
                } else {
                    (JournalId(k), JournalId(i))
                };
                let weight = rng.gen_range(1..=10);
                net.add_citation(cited, citing, weight)
                    .expect("generated arcs are valid");
                if rng.gen::<f64>() < spec.p_recip {
                    let weight = rng.gen_range(1..=10);
                    net.add_citation(citing, cited, weight)
                        .expect("generated arcs are valid");
                }
            }
        }
        nets.push(net);
    }
    Ok(TemporalDataset::new(registry, nets).expect("generated years are ordered"))
}

const BRUTE_TRIADS_MAX: usize = 200;

/// Per-edge shared-neighbor counts by triple enumeration, O(n³).
pub fn brute_triads(g: &ReciprocalGraph) -> Result<TriadCountGraph, OracleError> {
    if g.n() > BRUTE_TRIADS_MAX {
        return Err(OracleError::TooLarge {
            what: "brute_triads",
            n: g.n(),
            max: BRUTE_TRIADS_MAX,
        });
    }
    let mut entries = Vec::new();
    for a in 0..g.n() as u32 {
        for b in a + 1..g.n() as u32 {
            let (a, b) = (JournalId(a), JournalId(b));
            if !g.contains_edge(a, b) {
                continue;
            }
            let mut count: Count = 0;
            for c in 0..g.n() as u32 {
                let c = JournalId(c);
                if g.contains_edge(a, c) && g.contains_edge(b, c) {
                    count += 1;
                }
            }
            entries.push((a, b, count));
        }
    }
    Ok(TriadCountGraph::from_entries(g.year(), g.n(), entries))
}

const BRUTE_ISLANDS_MAX: usize = 12;

/// Islands by exhaustive subset checking: every vertex subset within the
/// size bounds is tested against the island predicate, and the maximal
/// passing subsets are returned. O(2ⁿ · n²), so n is capped hard.
pub fn brute_islands<V: LineValue>(
    g: &ValuedGraph<V>,
    smin: usize,
    smax: Option<usize>,
) -> Result<IslandSet<V>, OracleError> {
    let n = g.n();
    if n > BRUTE_ISLANDS_MAX {
        return Err(OracleError::TooLarge {
            what: "brute_islands",
            n,
            max: BRUTE_ISLANDS_MAX,
        });
    }
    let max_size = smax.unwrap_or(n.max(1));
    let mut passing: Vec<(u32, V)> = Vec::new();
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size < smin || size > max_size {
            continue;
        }
        if let Some(height) = island_height(g, mask) {
            passing.push((mask, height));
        }
    }
    let maximal: Vec<(u32, V)> = passing
        .iter()
        .filter(|&&(mask, _)| {
            !passing
                .iter()
                .any(|&(other, _)| other != mask && other & mask == mask)
        })
        .copied()
        .collect();
    let islands = maximal
        .into_iter()
        .map(|(mask, height)| Island {
            members: (0..n as u32)
                .filter(|i| mask & (1 << i) != 0)
                .map(JournalId)
                .collect(),
            height,
            defining_lines: g
                .lines()
                .iter()
                .filter(|&&(a, b, v)| {
                    mask & (1 << a.0) != 0 && mask & (1 << b.0) != 0 && v >= height
                })
                .copied()
                .collect(),
        })
        .collect();
    Ok(IslandSet::new(n, islands))
}

/// The island predicate, straight from its definition: the subset must be
/// spanned by internal lines of value ≥ h where h is the best (largest)
/// such spanning threshold, and every line leaving the subset must have
/// value < h. Returns the height h if the subset is an island.
fn island_height<V: LineValue>(g: &ValuedGraph<V>, mask: u32) -> Option<V> {
    let mut internal: Vec<(u32, u32, V)> = Vec::new();
    let mut outgoing_max: Option<V> = None;
    for &(a, b, v) in g.lines() {
        let ia = mask & (1 << a.0) != 0;
        let ib = mask & (1 << b.0) != 0;
        if ia && ib {
            internal.push((a.0, b.0, v));
        } else if ia || ib {
            outgoing_max = Some(match outgoing_max {
                Some(m) if m >= v => m,
                _ => v,
            });
        }
    }
    // Largest h that still spans the subset: add internal lines from the
    // highest value down until everything connects.
    internal.sort_by_key(|line| std::cmp::Reverse(line.2));
    let members: Vec<u32> = (0..32).filter(|i| mask & (1 << i) != 0).collect();
    if members.len() == 1 {
        return None; // a single vertex spans trivially but is never an island
    }
    let slot = |v: u32| members.binary_search(&v).expect("internal line endpoint");
    let mut parent: Vec<usize> = (0..members.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = members.len();
    let mut height = None;
    for (a, b, v) in internal {
        let (ra, rb) = (find(&mut parent, slot(a)), find(&mut parent, slot(b)));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
            if components == 1 {
                height = Some(v);
                break;
            }
        }
    }
    let h = height?;
    match outgoing_max {
        Some(out) if out >= h => None,
        _ => Some(h),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triads::{reciprocal_graph, shared_neighbor_counts, triangle_total};

    fn j(id: u32) -> JournalId {
        JournalId(id)
    }

    #[test]
    fn same_seed_same_dataset() {
        let spec = GenSpec {
            n: 30,
            p_arc: 0.3,
            p_recip: 0.5,
            seed: 99,
        };
        let d1 = random_dataset(&spec, 3, 2011).unwrap();
        let d2 = random_dataset(&spec, 3, 2011).unwrap();
        assert_eq!(d1.year_labels(), vec![2011, 2012, 2013]);
        for (a, b) in d1.years().iter().zip(d2.years()) {
            assert_eq!(a, b);
        }
        let different = random_dataset(&GenSpec { seed: 100, ..spec }, 3, 2011).unwrap();
        assert!(d1
            .years()
            .iter()
            .zip(different.years())
            .any(|(a, b)| a != b));
    }

    #[test]
    fn probability_edges() {
        let empty = random_dataset(
            &GenSpec {
                n: 20,
                p_arc: 0.0,
                p_recip: 0.5,
                seed: 1,
            },
            2,
            1,
        )
        .unwrap();
        assert!(empty.years().iter().all(|net| net.n_arcs() == 0));

        // Full reciprocation: the reciprocal graph keeps every sampled pair.
        let recip = random_dataset(
            &GenSpec {
                n: 25,
                p_arc: 0.4,
                p_recip: 1.0,
                seed: 2,
            },
            1,
            1,
        )
        .unwrap();
        let net = &recip.years()[0];
        let g = reciprocal_graph(net, 25);
        assert_eq!(g.n_edges() * 2, net.n_arcs());
        assert!(g.n_edges() > 0);
    }

    #[test]
    fn bad_probability_is_rejected() {
        let err = random_dataset(
            &GenSpec {
                n: 5,
                p_arc: 1.5,
                p_recip: 0.0,
                seed: 0,
            },
            1,
            1,
        )
        .unwrap_err();
        assert_eq!(
            err,
            OracleError::BadProbability {
                what: "p_arc",
                value: 1.5
            }
        );
    }

    #[test]
    fn brute_triads_matches_kernel_on_a_sample() {
        let spec = GenSpec {
            n: 40,
            p_arc: 0.5,
            p_recip: 0.6,
            seed: 7,
        };
        let ds = random_dataset(&spec, 1, 1).unwrap();
        let g = reciprocal_graph(&ds.years()[0], 40);
        let brute = brute_triads(&g).unwrap();
        let fast = shared_neighbor_counts(&g);
        assert_eq!(brute, fast);
        assert!(triangle_total(&brute).is_ok());
    }

    #[test]
    fn brute_triads_refuses_large_graphs() {
        let g = ReciprocalGraph::from_edges(1, 300, std::iter::empty());
        assert_eq!(
            brute_triads(&g).unwrap_err(),
            OracleError::TooLarge {
                what: "brute_triads",
                n: 300,
                max: 200
            }
        );
    }

    #[test]
    fn brute_islands_on_a_hand_checked_graph() {
        let g = ValuedGraph::new(
            4,
            vec![(j(0), j(1), 5i64), (j(1), j(2), 1), (j(2), j(3), 4)],
        )
        .unwrap();
        let s = brute_islands(&g, 2, Some(3)).unwrap();
        let sets: Vec<Vec<u32>> = s
            .islands()
            .iter()
            .map(|i| i.members.iter().map(|m| m.0).collect())
            .collect();
        assert_eq!(sets, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(s.islands()[0].height, 5);
        assert_eq!(s.islands()[1].height, 4);
        // Unbounded, the whole connected graph is the single maximal island.
        let whole = brute_islands(&g, 2, None).unwrap();
        assert_eq!(whole.len(), 1);
        assert_eq!(whole.islands()[0].members.len(), 4);
        assert_eq!(whole.islands()[0].height, 1);
    }

    #[test]
    fn brute_islands_refuses_large_graphs() {
        let g: ValuedGraph<i64> = ValuedGraph::new(13, vec![]).unwrap();
        assert_eq!(
            brute_islands(&g, 2, None).unwrap_err(),
            OracleError::TooLarge {
                what: "brute_islands",
                n: 13,
                max: 12
            }
        );
    }

    #[test]
    fn disconnected_subsets_are_never_islands() {
        let g = ValuedGraph::new(4, vec![(j(0), j(1), 3i64), (j(2), j(3), 3)]).unwrap();
        let s = brute_islands(&g, 2, None).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.islands().iter().all(|i| i.members.len() == 2));
    }
}
