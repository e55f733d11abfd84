//! Pajek-format interchange, covering the subset this crate emits: one
//! `*Vertices` block with 1-based ids and quoted labels, followed by either
//! one `*Arcs` block (directed, weighted) or one `*Edges` block (undirected,
//! valued). `%` comment lines and blank lines are skipped on input.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{JournalId, JournalRegistry, ModelError, YearNetwork};
use crate::value::{GraphError, LineValue, ValuedGraph};
use crate::{Change, Weight};

#[derive(Error, Debug)]
pub enum PajekError {
    #[error("line {line}: expected {expected:?}")]
    ExpectedHeader { line: usize, expected: &'static str },
    #[error("line {line}: cannot read vertex count")]
    BadVertexCount { line: usize },
    #[error("line {line}: cannot read vertex line (id and quoted label)")]
    BadVertexLine { line: usize },
    #[error("line {line}: vertex id {id} is outside 1..={n}")]
    VertexOutOfRange { line: usize, id: i64, n: usize },
    #[error("line {line}: vertex {id} already has a label")]
    DuplicateVertex { line: usize, id: usize },
    #[error("vertex {id} has no label line")]
    MissingVertex { id: usize },
    #[error("line {line}: cannot read {kind} line")]
    BadBodyLine { line: usize, kind: &'static str },
    #[error("file ends before an *Arcs or *Edges section")]
    MissingSection,
    #[error("line {line}: unexpected extra section")]
    ExtraSection { line: usize },
    #[error("line {line}: {source}")]
    Label { line: usize, source: ModelError },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Parsed Pajek content. Vertex labels become the registry in id order.
#[derive(Debug, Clone)]
pub struct PajekNetwork {
    pub registry: JournalRegistry,
    pub kind: PajekKind,
}

#[derive(Debug, Clone)]
pub enum PajekKind {
    /// `*Arcs` body: `(cited, citing, weight)` triples, weights ≥ 1.
    Directed(Vec<(JournalId, JournalId, Weight)>),
    /// `*Edges` body with exact line values.
    Undirected(ValuedGraph<Change>),
}

fn push_vertices(out: &mut String, registry: &JournalRegistry) {
    let _ = writeln!(out, "*Vertices {}", registry.len());
    for (id, name) in registry.iter() {
        let _ = writeln!(out, "{} \"{}\"", id.0 + 1, name);
    }
}

/// Render a year's directed network. Vertices cover the whole registry so
/// isolates survive a round trip.
pub fn write_pajek_arcs(net: &YearNetwork, registry: &JournalRegistry) -> String {
    let mut out = String::new();
    push_vertices(&mut out, registry);
    out.push_str("*Arcs\n");
    for (cited, citing, w) in net.sorted_arcs() {
        let _ = writeln!(out, "{} {} {}", cited.0 + 1, citing.0 + 1, w);
    }
    out
}

/// Render a valued undirected graph as an `*Edges` block.
pub fn write_pajek_edges<V: LineValue>(
    graph: &ValuedGraph<V>,
    registry: &JournalRegistry,
) -> String {
    let mut out = String::new();
    push_vertices(&mut out, registry);
    out.push_str("*Edges\n");
    for &(a, b, v) in graph.lines() {
        let _ = writeln!(out, "{} {} {}", a.0 + 1, b.0 + 1, v.format_value());
    }
    out
}

/// The label between the first and last double quote, so labels containing
/// quotes survive; anything after the closing quote is ignored.
fn vertex_label(rest: &str) -> Option<&str> {
    let first = rest.find('"')?;
    let last = rest.rfind('"')?;
    (last > first).then(|| &rest[first + 1..last])
}

fn parse_vertex_id(token: &str, n: usize, line: usize) -> Result<usize, PajekError> {
    let id: i64 = token
        .parse()
        .map_err(|_| PajekError::BadVertexLine { line })?;
    if id < 1 || id as usize > n {
        return Err(PajekError::VertexOutOfRange { line, id, n });
    }
    Ok(id as usize - 1)
}

/// Parse text in the subset produced by [`write_pajek_arcs`] /
/// [`write_pajek_edges`].
pub fn parse_pajek(text: &str) -> Result<PajekNetwork, PajekError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(idx, line)| (idx + 1, line.strip_suffix('\r').unwrap_or(line).trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('%'));

    let (line, header) = lines.next().ok_or(PajekError::ExpectedHeader {
        line: 1,
        expected: "*Vertices <n>",
    })?;
    let n: usize = header
        .to_ascii_lowercase()
        .strip_prefix("*vertices")
        .and_then(|rest| rest.trim().parse().ok())
        .ok_or(PajekError::BadVertexCount { line })?;

    let mut labels: Vec<Option<(usize, String)>> = vec![None; n];
    let mut section: Option<&'static str> = None;
    let mut body: Vec<(usize, &str)> = Vec::new();
    for (line, text) in lines {
        let lowered = text.to_ascii_lowercase();
        if lowered.starts_with('*') {
            let kind = if lowered.starts_with("*arcs") {
                "arcs"
            } else if lowered.starts_with("*edges") {
                "edges"
            } else {
                return Err(PajekError::ExpectedHeader {
                    line,
                    expected: "*Arcs or *Edges",
                });
            };
            if section.is_some() {
                return Err(PajekError::ExtraSection { line });
            }
            section = Some(kind);
            continue;
        }
        if section.is_some() {
            body.push((line, text));
            continue;
        }
        // Still in the vertex block.
        let (id_token, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let idx = parse_vertex_id(id_token, n, line)?;
        let label = vertex_label(rest).ok_or(PajekError::BadVertexLine { line })?;
        if labels[idx].is_some() {
            return Err(PajekError::DuplicateVertex { line, id: idx + 1 });
        }
        labels[idx] = Some((line, label.to_string()));
    }

    let mut registry = JournalRegistry::new();
    for (idx, label) in labels.into_iter().enumerate() {
        let (line, label) = label.ok_or(PajekError::MissingVertex { id: idx + 1 })?;
        // Ids must stay dense and in file order, so a label that interns to
        // an already-registered name is a duplicate we cannot represent.
        let id = registry
            .register(&label)
            .map_err(|source| PajekError::Label { line, source })?;
        if id.index() != idx {
            return Err(PajekError::DuplicateVertex { line, id: idx + 1 });
        }
    }

    let kind = section.ok_or(PajekError::MissingSection)?;
    let mut directed = Vec::new();
    let mut undirected = Vec::new();
    for (line, text) in body {
        let mut tokens = text.split_whitespace();
        let (a, b, value) = match (tokens.next(), tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), Some(v), None) => (a, b, v),
            _ => return Err(PajekError::BadBodyLine { line, kind }),
        };
        let a = JournalId(parse_vertex_id(a, n, line)? as u32);
        let b = JournalId(parse_vertex_id(b, n, line)? as u32);
        if kind == "arcs" {
            let w: Weight = value
                .parse()
                .ok()
                .filter(|&w| w >= 1)
                .ok_or(PajekError::BadBodyLine { line, kind })?;
            directed.push((a, b, w));
        } else {
            let v = Change::parse_value(value).ok_or(PajekError::BadBodyLine { line, kind })?;
            undirected.push((a, b, v));
        }
    }

    let kind = if kind == "arcs" {
        PajekKind::Directed(directed)
    } else {
        PajekKind::Undirected(ValuedGraph::new(n, undirected)?)
    };
    Ok(PajekNetwork { registry, kind })
}
