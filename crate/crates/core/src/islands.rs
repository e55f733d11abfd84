//! Line-islands extraction: maximal vertex sets whose internal line values
//! strictly exceed every line leaving the set.
//!
//! An island's *height* is the minimum value of the lines needed to span it
//! (the bottleneck of its maximum spanning forest). The island predicate is
//! purely comparative, so it works unchanged for negative values — islands of
//! negative height are "disintegrating" and can be dropped afterwards with
//! [`filter_positive`].
//!
//! The extraction processes lines in descending value order through a
//! union-find, recording the merge dendrogram. A dendrogram cluster is an
//! island exactly when the merge that later absorbs it happens at a strictly
//! lower value than the merge that formed it (a root cluster is absorbed at
//! "minus infinity"); equal-valued lines therefore batch naturally, because a
//! cluster extended at its own formation value is absorbed at that same value.
//! Only maximal qualifying clusters within the size bounds are reported.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::dynamics::ChangeNetwork;
use crate::model::{JournalId, JournalRegistry};
use crate::value::{LineValue, ValuedGraph};
use crate::Change;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IslandsError {
    #[error("minimum island size must be at least 2 (got {0})")]
    MinSizeTooSmall(usize),
    #[error("empty island size range: minimum {smin} exceeds maximum {smax}")]
    EmptySizeRange { smin: usize, smax: usize },
}

/// One island: its members, height, and the internal lines at or above the
/// height (the lines that define its structure).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Island<V> {
    /// Member journals, ascending by id.
    pub members: Vec<JournalId>,
    /// Minimum internal spanning value; strictly above every outgoing line.
    pub height: V,
    /// Internal lines with value ≥ height, endpoints ordered low-high,
    /// sorted by pair.
    pub defining_lines: Vec<(JournalId, JournalId, V)>,
}

impl<V> Island<V> {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// A disjoint family of islands over `n` vertices, in canonical order:
/// descending height, then smallest member id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IslandSet<V> {
    n: usize,
    islands: Vec<Island<V>>,
    assignment: Vec<Option<usize>>,
}

impl<V: LineValue> IslandSet<V> {
    /// Canonicalize a list of islands: sorts members and islands, rebuilds
    /// the vertex assignment.
    ///
    /// Panics if an island is empty, references a vertex ≥ `n`, or overlaps
    /// another island — those are construction bugs, not data errors.
    pub fn new(n: usize, mut islands: Vec<Island<V>>) -> Self {
        for island in &mut islands {
            assert!(!island.members.is_empty(), "empty island");
            island.members.sort_unstable();
            island
                .defining_lines
                .sort_unstable_by_key(|&(a, b, _)| (a, b));
        }
        islands.sort_by(|x, y| {
            y.height
                .cmp(&x.height)
                .then_with(|| x.members[0].cmp(&y.members[0]))
        });
        let mut assignment = vec![None; n];
        for (k, island) in islands.iter().enumerate() {
            for &m in &island.members {
                let slot = assignment
                    .get_mut(m.index())
                    .expect("island member out of range");
                assert!(slot.is_none(), "overlapping islands");
                *slot = Some(k);
            }
        }
        IslandSet {
            n,
            islands,
            assignment,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn islands(&self) -> &[Island<V>] {
        &self.islands
    }

    pub fn len(&self) -> usize {
        self.islands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.islands.is_empty()
    }

    /// Index into [`islands`](Self::islands) for a member vertex.
    pub fn island_of(&self, v: JournalId) -> Option<usize> {
        self.assignment.get(v.index()).copied().flatten()
    }
}

fn check_bounds(smin: usize, smax: Option<usize>) -> Result<(), IslandsError> {
    if smin < 2 {
        return Err(IslandsError::MinSizeTooSmall(smin));
    }
    if let Some(mx) = smax {
        if smin > mx {
            return Err(IslandsError::EmptySizeRange { smin, smax: mx });
        }
    }
    Ok(())
}

#[derive(Clone, Copy)]
enum Child {
    Leaf(usize),
    Node(usize),
}

struct DendroNode<V> {
    formed_at: V,
    size: usize,
    children: [Child; 2],
    /// Value of the merge that absorbed this cluster; `None` for roots.
    parent_value: Option<V>,
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
}

/// Extract all maximal islands with size in `smin..=smax` (`None` = no upper
/// bound). `smin` must be at least 2: a single vertex is never an island.
pub fn line_islands<V: LineValue>(
    g: &ValuedGraph<V>,
    smin: usize,
    smax: Option<usize>,
) -> Result<IslandSet<V>, IslandsError> {
    check_bounds(smin, smax)?;
    let n = g.n();
    let lines = g.lines();
    // Stable sort by descending value keeps the pair order within ties; the
    // result does not depend on it, but determinism is easier to see this way.
    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.sort_by_key(|&i| Reverse(lines[i].2));

    let mut ds = DisjointSet::new(n);
    let mut cluster_of_root: Vec<Option<usize>> = vec![None; n];
    let mut nodes: Vec<DendroNode<V>> = Vec::new();
    for &i in &order {
        let (a, b, v) = lines[i];
        let ra = ds.find(a.index());
        let rb = ds.find(b.index());
        if ra == rb {
            continue;
        }
        let mut size = 0;
        let child = |root: usize, size: &mut usize| match cluster_of_root[root] {
            Some(c) => {
                *size += nodes[c].size;
                Child::Node(c)
            }
            None => {
                *size += 1;
                Child::Leaf(root)
            }
        };
        let ca = child(ra, &mut size);
        let cb = child(rb, &mut size);
        for c in [ca, cb] {
            if let Child::Node(idx) = c {
                nodes[idx].parent_value = Some(v);
            }
        }
        nodes.push(DendroNode {
            formed_at: v,
            size,
            children: [ca, cb],
            parent_value: None,
        });
        ds.parent[rb] = ra;
        cluster_of_root[ra] = Some(nodes.len() - 1);
    }

    let max_size = smax.unwrap_or(n.max(1));
    let qualifies = |node: &DendroNode<V>| {
        node.size >= smin
            && node.size <= max_size
            && node.parent_value.is_none_or(|p| p < node.formed_at)
    };

    // Top-down: report the first qualifying cluster on each root-to-leaf
    // path; everything below it is a smaller island inside a reported one.
    let mut picked: Vec<usize> = Vec::new();
    let mut stack: Vec<usize> = (0..nodes.len())
        .filter(|&i| nodes[i].parent_value.is_none())
        .collect();
    while let Some(i) = stack.pop() {
        if nodes[i].size < smin {
            continue;
        }
        if qualifies(&nodes[i]) {
            picked.push(i);
        } else {
            for c in nodes[i].children {
                if let Child::Node(idx) = c {
                    stack.push(idx);
                }
            }
        }
    }

    let mut islands: Vec<Island<V>> = picked
        .into_iter()
        .map(|i| Island {
            members: collect_members(&nodes, i),
            height: nodes[i].formed_at,
            defining_lines: Vec::new(),
        })
        .collect();
    let mut assignment: Vec<Option<usize>> = vec![None; n];
    for (k, island) in islands.iter().enumerate() {
        for &m in &island.members {
            assignment[m.index()] = Some(k);
        }
    }
    for &(a, b, v) in lines {
        if let (Some(ka), Some(kb)) = (assignment[a.index()], assignment[b.index()]) {
            if ka == kb && v >= islands[ka].height {
                islands[ka].defining_lines.push((a, b, v));
            }
        }
    }
    Ok(IslandSet::new(n, islands))
}

fn collect_members<V>(nodes: &[DendroNode<V>], root: usize) -> Vec<JournalId> {
    let mut members = Vec::with_capacity(nodes[root].size);
    let mut stack = vec![Child::Node(root)];
    while let Some(c) = stack.pop() {
        match c {
            Child::Leaf(v) => members.push(JournalId(v as u32)),
            Child::Node(i) => stack.extend(nodes[i].children),
        }
    }
    members.sort_unstable();
    members
}

/// Recompute each island's defining lines from the graph: the internal lines
/// with value at or above the island's height, aligned with
/// [`IslandSet::islands`] order. A from-definition cross-check for the lines
/// stored in the islands themselves.
pub fn island_lines<V: LineValue>(
    g: &ValuedGraph<V>,
    s: &IslandSet<V>,
) -> Vec<Vec<(JournalId, JournalId, V)>> {
    let mut out = vec![Vec::new(); s.len()];
    for &(a, b, v) in g.lines() {
        if let (Some(ka), Some(kb)) = (s.island_of(a), s.island_of(b)) {
            if ka == kb && v >= s.islands()[ka].height {
                out[ka].push((a, b, v));
            }
        }
    }
    out
}

/// Drop islands whose height is not positive (the disintegrating ones).
pub fn filter_positive<V: LineValue>(s: &IslandSet<V>) -> IslandSet<V> {
    let kept = s
        .islands()
        .iter()
        .filter(|island| island.height > V::zero())
        .cloned()
        .collect();
    IslandSet::new(s.n(), kept)
}

/// How a line earned its place in a [`CoreLinkage`] graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkKind {
    /// Connects members of two different islands.
    InterIsland,
    /// Connects a bridging non-island journal to an island member.
    Bridge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreLink {
    pub a: JournalId,
    pub b: JournalId,
    pub value: Change,
    pub kind: LinkKind,
}

/// The between-islands view: all island members, the lines running between
/// different islands, and the non-island journals tied to enough island
/// members to matter, with those ties.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoreLinkage {
    /// Every island member with its island index, ascending by id.
    pub members: Vec<(JournalId, usize)>,
    /// Non-island journals with lines to ≥ `min_contacts` island members.
    pub bridges: Vec<JournalId>,
    /// Inter-island and bridge lines, ascending by pair.
    pub links: Vec<CoreLink>,
}

/// Build the core-linkage graph from a monotonic-only change network and its
/// islands. `min_contacts` is the minimum number of island members a
/// non-island journal must touch to be included as a bridge (conventionally 2).
pub fn core_linkage(cn: &ChangeNetwork, s: &IslandSet<Change>, min_contacts: usize) -> CoreLinkage {
    let mut links = Vec::new();
    let mut contacts: BTreeMap<JournalId, Vec<(JournalId, JournalId, Change)>> = BTreeMap::new();
    for record in cn.records() {
        let (a, b) = record.pair;
        match (s.island_of(a), s.island_of(b)) {
            (Some(ka), Some(kb)) if ka != kb => links.push(CoreLink {
                a,
                b,
                value: record.avg_change,
                kind: LinkKind::InterIsland,
            }),
            (Some(_), Some(_)) => {} // internal to one island: shown by its defining lines
            (Some(_), None) => contacts
                .entry(b)
                .or_default()
                .push((a, b, record.avg_change)),
            (None, Some(_)) => contacts
                .entry(a)
                .or_default()
                .push((a, b, record.avg_change)),
            (None, None) => {}
        }
    }
    let mut bridges = Vec::new();
    for (journal, lines) in contacts {
        if lines.len() >= min_contacts {
            bridges.push(journal);
            links.extend(lines.into_iter().map(|(a, b, value)| CoreLink {
                a,
                b,
                value,
                kind: LinkKind::Bridge,
            }));
        }
    }
    links.sort_by_key(|l| (l.a, l.b));
    let mut members: Vec<(JournalId, usize)> = (0..s.n())
        .filter_map(|i| {
            let id = JournalId(i as u32);
            s.island_of(id).map(|k| (id, k))
        })
        .collect();
    members.sort_unstable();
    CoreLinkage {
        members,
        bridges,
        links,
    }
}

pub(crate) fn dot_escape(name: &str) -> String {
    name.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Order islands for display: descending height, then lexicographically
/// smallest member name. Returns indices into [`IslandSet::islands`]; the
/// position of an index in this list is the island's stable display id, the
/// numbering every report (membership, defining lines, DOT colors) shares.
pub fn display_order<V: LineValue>(s: &IslandSet<V>, registry: &JournalRegistry) -> Vec<usize> {
    let min_name = |k: usize| {
        s.islands()[k]
            .members
            .iter()
            .map(|&m| registry.name(m))
            .min()
            .expect("islands are nonempty")
    };
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&x, &y| {
        s.islands()[y]
            .height
            .cmp(&s.islands()[x].height)
            .then_with(|| min_name(x).cmp(min_name(y)))
    });
    order
}

/// Membership table: `journal  island  height`, islands numbered from 0 in
/// display order, members listed by name.
pub fn write_membership_tsv<V: LineValue>(s: &IslandSet<V>, registry: &JournalRegistry) -> String {
    let mut out = String::from("journal\tisland\theight\n");
    for (display_id, &k) in display_order(s, registry).iter().enumerate() {
        let island = &s.islands()[k];
        let mut names: Vec<&str> = island.members.iter().map(|&m| registry.name(m)).collect();
        names.sort_unstable();
        for name in names {
            out.push_str(&format!(
                "{name}\t{display_id}\t{}\n",
                island.height.format_value()
            ));
        }
    }
    out
}

/// Defining-lines table: `island  journal_a  journal_b  value`, same island
/// numbering as the membership table, each pair ordered by name.
pub fn write_island_lines_tsv<V: LineValue>(
    s: &IslandSet<V>,
    registry: &JournalRegistry,
) -> String {
    let mut out = String::from("island\tjournal_a\tjournal_b\tvalue\n");
    for (display_id, &k) in display_order(s, registry).iter().enumerate() {
        let island = &s.islands()[k];
        let mut rows: Vec<(&str, &str, String)> = island
            .defining_lines
            .iter()
            .map(|&(a, b, v)| {
                let (na, nb) = (registry.name(a), registry.name(b));
                let (na, nb) = if na <= nb { (na, nb) } else { (nb, na) };
                (na, nb, v.format_value())
            })
            .collect();
        rows.sort_unstable();
        for (na, nb, v) in rows {
            out.push_str(&format!("{display_id}\t{na}\t{nb}\t{v}\n"));
        }
    }
    out
}

/// DOT rendering of a [`CoreLinkage`]: island members filled with a per-island
/// color, bridges white, positive lines solid, negative lines dashed, line
/// values as edge labels.
pub fn core_linkage_dot(
    linkage: &CoreLinkage,
    s: &IslandSet<Change>,
    registry: &JournalRegistry,
) -> String {
    let order = display_order(s, registry);
    let mut display_of = vec![0usize; s.len()];
    for (display_id, &k) in order.iter().enumerate() {
        display_of[k] = display_id;
    }
    let mut out = String::from("graph core_linkage {\n  node [style=filled];\n");
    let mut member_rows: Vec<(String, usize)> = linkage
        .members
        .iter()
        .map(|&(m, k)| (registry.name(m).to_string(), display_of[k]))
        .collect();
    member_rows.sort_unstable();
    for (name, display_id) in member_rows {
        out.push_str(&format!(
            "  \"{}\" [fillcolor=\"/set312/{}\"];\n",
            dot_escape(&name),
            display_id % 12 + 1
        ));
    }
    let mut bridge_rows: Vec<&str> = linkage.bridges.iter().map(|&b| registry.name(b)).collect();
    bridge_rows.sort_unstable();
    for name in bridge_rows {
        out.push_str(&format!("  \"{}\" [fillcolor=white];\n", dot_escape(name)));
    }
    let mut edge_rows: Vec<(String, String, String, bool)> = linkage
        .links
        .iter()
        .map(|l| {
            let (na, nb) = (registry.name(l.a), registry.name(l.b));
            let (na, nb) = if na <= nb { (na, nb) } else { (nb, na) };
            (
                na.to_string(),
                nb.to_string(),
                l.value.format_value(),
                l.value < Change::zero(),
            )
        })
        .collect();
    edge_rows.sort_unstable();
    for (na, nb, label, negative) in edge_rows {
        out.push_str(&format!(
            "  \"{}\" -- \"{}\" [label=\"{}\", style={}];\n",
            dot_escape(&na),
            dot_escape(&nb),
            label,
            if negative { "dashed" } else { "solid" }
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{ChangeRecord, Trend};

    fn j(id: u32) -> JournalId {
        JournalId(id)
    }

    fn graph(n: usize, lines: &[(u32, u32, i64)]) -> ValuedGraph<i64> {
        ValuedGraph::new(n, lines.iter().map(|&(a, b, v)| (j(a), j(b), v))).unwrap()
    }

    fn member_sets<V: LineValue>(s: &IslandSet<V>) -> Vec<Vec<u32>> {
        s.islands()
            .iter()
            .map(|i| i.members.iter().map(|m| m.0).collect())
            .collect()
    }

    #[test]
    fn two_peaks_with_a_low_bridge() {
        let g = graph(
            6,
            &[
                (0, 1, 5),
                (1, 2, 5),
                (0, 2, 5),
                (3, 4, 3),
                (4, 5, 3),
                (2, 3, 1),
            ],
        );
        // Unbounded, the whole connected graph is the one maximal island;
        // capping the size surfaces the two local peaks.
        let whole = line_islands(&g, 2, None).unwrap();
        assert_eq!(member_sets(&whole), vec![vec![0, 1, 2, 3, 4, 5]]);
        assert_eq!(whole.islands()[0].height, 1);
        let s = line_islands(&g, 2, Some(5)).unwrap();
        assert_eq!(member_sets(&s), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert_eq!(s.islands()[0].height, 5);
        assert_eq!(s.islands()[1].height, 3);
        assert_eq!(s.islands()[0].defining_lines.len(), 3);
        assert_eq!(
            s.islands()[1].defining_lines,
            vec![(j(3), j(4), 3), (j(4), j(5), 3)]
        );
        assert_eq!(s.island_of(j(2)), Some(0));
        assert_eq!(s.island_of(j(3)), Some(1));
    }

    #[test]
    fn path_with_two_local_maxima() {
        let g = graph(4, &[(0, 1, 5), (1, 2, 1), (2, 3, 4)]);
        let s = line_islands(&g, 2, Some(3)).unwrap();
        assert_eq!(member_sets(&s), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn equal_valued_component_is_one_island() {
        let g = graph(3, &[(0, 1, 2), (1, 2, 2)]);
        let s = line_islands(&g, 2, None).unwrap();
        assert_eq!(member_sets(&s), vec![vec![0, 1, 2]]);
        assert_eq!(s.islands()[0].height, 2);
    }

    #[test]
    fn equal_boundary_line_absorbs_the_candidate() {
        // Any 2-subset of an equal-valued triangle has an outgoing line at
        // its own internal value, so a size cap of 2 leaves nothing.
        let g = graph(3, &[(0, 1, 5), (1, 2, 5), (0, 2, 5)]);
        let s = line_islands(&g, 2, Some(2)).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn maximality_prefers_the_outer_island() {
        let g = graph(4, &[(0, 1, 5), (1, 2, 4), (2, 3, 1)]);
        let unbounded = line_islands(&g, 2, None).unwrap();
        assert_eq!(member_sets(&unbounded), vec![vec![0, 1, 2, 3]]);
        let capped = line_islands(&g, 2, Some(3)).unwrap();
        assert_eq!(member_sets(&capped), vec![vec![0, 1, 2]]);
        assert_eq!(capped.islands()[0].height, 4);
        let tight = line_islands(&g, 2, Some(2)).unwrap();
        assert_eq!(member_sets(&tight), vec![vec![0, 1]]);
        assert_eq!(tight.islands()[0].height, 5);
    }

    #[test]
    fn negative_heights_extract_and_filter() {
        let g = graph(5, &[(0, 1, -1), (2, 3, 2), (3, 4, -5)]);
        let s = line_islands(&g, 2, Some(2)).unwrap();
        assert_eq!(member_sets(&s), vec![vec![2, 3], vec![0, 1]]);
        assert_eq!(s.islands()[1].height, -1);
        let positive = filter_positive(&s);
        assert_eq!(member_sets(&positive), vec![vec![2, 3]]);
        assert_eq!(positive.island_of(j(0)), None);
    }

    #[test]
    fn stored_lines_match_recomputation() {
        let g = graph(
            6,
            &[
                (0, 1, 5),
                (1, 2, 5),
                (0, 2, 1),
                (3, 4, 3),
                (4, 5, 3),
                (2, 3, 1),
            ],
        );
        let s = line_islands(&g, 2, Some(5)).unwrap();
        // {0,1,2} spans at 5 via the two 5-lines; the internal 1-line is
        // below the height and is not a defining line.
        assert_eq!(
            s.islands()[0].defining_lines,
            vec![(j(0), j(1), 5), (j(1), j(2), 5)]
        );
        let recomputed = island_lines(&g, &s);
        for (island, lines) in s.islands().iter().zip(&recomputed) {
            assert_eq!(&island.defining_lines, lines);
        }
    }

    #[test]
    fn bound_validation() {
        let g = graph(2, &[(0, 1, 1)]);
        assert_eq!(
            line_islands(&g, 1, None).unwrap_err(),
            IslandsError::MinSizeTooSmall(1)
        );
        assert_eq!(
            line_islands(&g, 3, Some(2)).unwrap_err(),
            IslandsError::EmptySizeRange { smin: 3, smax: 2 }
        );
    }

    #[test]
    fn membership_is_shift_invariant() {
        let lines = [(0, 1, 5), (1, 2, 1), (2, 3, 4), (3, 4, -2)];
        let base = line_islands(&graph(5, &lines), 2, Some(3)).unwrap();
        assert_eq!(member_sets(&base), vec![vec![0, 1], vec![2, 3]]);
        let shifted_lines: Vec<(u32, u32, i64)> =
            lines.iter().map(|&(a, b, v)| (a, b, v - 3)).collect();
        let shifted = line_islands(&graph(5, &shifted_lines), 2, Some(3)).unwrap();
        assert_eq!(member_sets(&base), member_sets(&shifted));
        for (x, y) in base.islands().iter().zip(shifted.islands()) {
            assert_eq!(x.height - 3, y.height);
        }
    }

    fn change(n: i64, d: i64) -> Change {
        Change::new(n, d)
    }

    fn linkage_fixture() -> (ChangeNetwork, IslandSet<Change>) {
        // Islands {0,1} and {2,3}; journal 4 touches both islands (bridge);
        // journal 5 touches only one member (excluded); 4–5 line ignored.
        let records = vec![
            ((0, 1), change(2, 1), Trend::MonotonicUp),
            ((2, 3), change(3, 2), Trend::MonotonicUp),
            ((1, 2), change(-1, 2), Trend::MonotonicDown),
            ((0, 4), change(1, 2), Trend::MonotonicUp),
            ((2, 4), change(1, 1), Trend::MonotonicUp),
            ((3, 5), change(1, 2), Trend::MonotonicUp),
            ((4, 5), change(1, 2), Trend::MonotonicUp),
        ];
        let records: Vec<ChangeRecord> = records
            .into_iter()
            .map(|((a, b), avg, trend)| ChangeRecord {
                pair: (j(a), j(b)),
                counts: vec![],
                avg_change: avg,
                trend,
            })
            .collect();
        let cn = ChangeNetwork::from_records(6, vec![2011, 2012, 2013], records);
        let islands = IslandSet::new(
            6,
            vec![
                Island {
                    members: vec![j(0), j(1)],
                    height: change(2, 1),
                    defining_lines: vec![(j(0), j(1), change(2, 1))],
                },
                Island {
                    members: vec![j(2), j(3)],
                    height: change(3, 2),
                    defining_lines: vec![(j(2), j(3), change(3, 2))],
                },
            ],
        );
        (cn, islands)
    }

    #[test]
    fn core_linkage_selects_bridges_and_inter_island_lines() {
        let (cn, islands) = linkage_fixture();
        let linkage = core_linkage(&cn, &islands, 2);
        assert_eq!(
            linkage.members,
            vec![(j(0), 0), (j(1), 0), (j(2), 1), (j(3), 1)]
        );
        assert_eq!(linkage.bridges, vec![j(4)]);
        let kinds: Vec<(u32, u32, LinkKind)> = linkage
            .links
            .iter()
            .map(|l| (l.a.0, l.b.0, l.kind))
            .collect();
        assert_eq!(
            kinds,
            vec![
                (0, 4, LinkKind::Bridge),
                (1, 2, LinkKind::InterIsland),
                (2, 4, LinkKind::Bridge),
            ]
        );
        // With a threshold of 1, journal 5's single contact qualifies too.
        let loose = core_linkage(&cn, &islands, 1);
        assert_eq!(loose.bridges, vec![j(4), j(5)]);
        assert_eq!(loose.links.len(), 4);
    }

    #[test]
    fn dot_export_styles_lines_by_sign() {
        let (cn, islands) = linkage_fixture();
        let mut registry = JournalRegistry::new();
        for name in ["A", "B", "C", "D", "E", "F"] {
            registry.register(name).unwrap();
        }
        let linkage = core_linkage(&cn, &islands, 2);
        let dot = core_linkage_dot(&linkage, &islands, &registry);
        assert!(dot.starts_with("graph core_linkage {"));
        assert!(dot.contains("\"A\" [fillcolor=\"/set312/1\"];"));
        assert!(dot.contains("\"E\" [fillcolor=white];"));
        assert!(dot.contains("\"B\" -- \"C\" [label=\"-0.5\", style=dashed];"));
        assert!(dot.contains("\"A\" -- \"E\" [label=\"0.5\", style=solid];"));
        assert!(dot.ends_with("}\n"));
    }

    #[test]
    fn tsv_reports_use_display_numbering() {
        let g = graph(4, &[(0, 1, 5), (1, 2, 1), (2, 3, 4)]);
        let s = line_islands(&g, 2, Some(3)).unwrap();
        let mut registry = JournalRegistry::new();
        // Names chosen so id order and name order disagree inside an island.
        for name in ["ZEBRA", "APPLE", "MANGO", "BERRY"] {
            registry.register(name).unwrap();
        }
        let membership = write_membership_tsv(&s, &registry);
        assert_eq!(
            membership,
            "journal\tisland\theight\nAPPLE\t0\t5\nZEBRA\t0\t5\nBERRY\t1\t4\nMANGO\t1\t4\n"
        );
        let lines = write_island_lines_tsv(&s, &registry);
        assert_eq!(
            lines,
            "island\tjournal_a\tjournal_b\tvalue\n0\tAPPLE\tZEBRA\t5\n1\tBERRY\tMANGO\t4\n"
        );
    }

    #[test]
    fn dot_escaping_handles_quotes_and_backslashes() {
        assert_eq!(dot_escape(r#"J "THE" ONE\TWO"#), r#"J \"THE\" ONE\\TWO"#);
    }
}
