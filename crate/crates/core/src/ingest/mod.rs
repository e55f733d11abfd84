//! Read yearly edge lists, resolve journal renames, and rebuild a dataset
//! on its canonical (post-merge) registry.
//!
//! Edge files are headerless TSV, one arc per line: `cited<TAB>citing<TAB>
//! count`. Alias files are `old<TAB>new`. In both, `#` starts a comment
//! line, blank lines are skipped, and LF as well as CRLF endings are
//! accepted. Names are trimmed; counts must be positive integers.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::model::{JournalRegistry, ModelError, TemporalDataset, YearNetwork};
use crate::{Weight, Year};

pub mod pajek;

#[derive(Error, Debug)]
pub enum IngestError {
    #[error("read failed: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: expected {expected} tab-separated fields, found {found}")]
    FieldCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: {source}")]
    BadName { line: usize, source: ModelError },
    #[error("line {line}: citation count {text:?} is not a positive integer")]
    BadCount { line: usize, text: String },
    #[error("alias chain starting at {name:?} never reaches a final name (cycle)")]
    AliasCycle { name: String },
    #[error("alias {old:?} maps to both {first:?} and {second:?}")]
    AliasConflict {
        old: String,
        first: String,
        second: String,
    },
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: Box<IngestError>,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Data lines of a TSV stream: `(line_number, fields)` with comments and
/// blank lines removed and any trailing `\r` stripped. Every TSV report the
/// pipeline writes is read back through this one dialect.
pub fn data_lines<R: BufRead>(
    reader: R,
) -> impl Iterator<Item = Result<(usize, Vec<String>), IngestError>> {
    reader.lines().enumerate().filter_map(|(idx, line)| {
        let line = match line {
            Ok(line) => line,
            Err(err) => return Some(Err(err.into())),
        };
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            return None;
        }
        let fields = line.split('\t').map(str::to_string).collect();
        Some(Ok((idx + 1, fields)))
    })
}

fn expect_fields(line: usize, fields: &[String], expected: usize) -> Result<(), IngestError> {
    if fields.len() == expected {
        Ok(())
    } else {
        Err(IngestError::FieldCount {
            line,
            expected,
            found: fields.len(),
        })
    }
}

/// Parse one year's edge list, interning names into `registry`.
pub fn parse_edge_file<R: BufRead>(
    reader: R,
    year: Year,
    registry: &mut JournalRegistry,
) -> Result<YearNetwork, IngestError> {
    let mut net = YearNetwork::new(year);
    for entry in data_lines(reader) {
        let (line, fields) = entry?;
        expect_fields(line, &fields, 3)?;
        let cited = registry
            .register(&fields[0])
            .map_err(|source| IngestError::BadName { line, source })?;
        let citing = registry
            .register(&fields[1])
            .map_err(|source| IngestError::BadName { line, source })?;
        let count: Weight = fields[2]
            .trim()
            .parse()
            .ok()
            .filter(|&c| c >= 1)
            .ok_or_else(|| IngestError::BadCount {
                line,
                text: fields[2].clone(),
            })?;
        net.add_citation(cited, citing, count)?;
    }
    Ok(net)
}

/// Write a year's arcs in the format [`parse_edge_file`] reads, sorted by
/// cited then citing name.
pub fn write_edge_file<W: Write>(
    out: &mut W,
    net: &YearNetwork,
    registry: &JournalRegistry,
) -> io::Result<()> {
    let mut rows: Vec<(&str, &str, Weight)> = net
        .arcs()
        .map(|((cited, citing), w)| (registry.name(cited), registry.name(citing), w))
        .collect();
    rows.sort_unstable();
    for (cited, citing, count) in rows {
        writeln!(out, "{cited}\t{citing}\t{count}")?;
    }
    Ok(())
}

/// Journal renames resolved to their final form: every stored entry maps an
/// old name to the last name of its chain, so lookup is single-step.
#[derive(Default, Clone, Debug, PartialEq, Eq)]
pub struct AliasMap {
    canonical: HashMap<String, String>,
}

impl AliasMap {
    /// The canonical spelling of `name`: its final name if renamed, itself
    /// (trimmed) otherwise.
    pub fn resolve<'a>(&'a self, name: &'a str) -> &'a str {
        let name = name.trim();
        self.canonical.get(name).map_or(name, String::as_str)
    }

    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.canonical.is_empty()
    }
}

/// Parse `old<TAB>new` rename lines and collapse chains (`A→B`, `B→C`
/// becomes `A→C`). A name reappearing with a different target is a
/// conflict; a chain that returns to a visited name is a cycle — both
/// errors, as is an entry renaming a journal to itself.
pub fn parse_alias_map<R: BufRead>(reader: R) -> Result<AliasMap, IngestError> {
    let mut direct: HashMap<String, String> = HashMap::new();
    for entry in data_lines(reader) {
        let (line, fields) = entry?;
        expect_fields(line, &fields, 2)?;
        let old = fields[0].trim();
        let new = fields[1].trim();
        if old.is_empty() || new.is_empty() {
            return Err(IngestError::BadName {
                line,
                source: ModelError::EmptyName,
            });
        }
        match direct.get(old) {
            Some(first) if first != new => {
                return Err(IngestError::AliasConflict {
                    old: old.to_string(),
                    first: first.clone(),
                    second: new.to_string(),
                });
            }
            Some(_) => {}
            None => {
                direct.insert(old.to_string(), new.to_string());
            }
        }
    }

    let mut keys: Vec<&String> = direct.keys().collect();
    keys.sort(); // deterministic error attribution when several chains cycle
    let mut canonical = HashMap::new();
    for old in keys {
        let mut seen = vec![old.as_str()];
        let mut cur = direct[old].as_str();
        while let Some(next) = {
            if seen.contains(&cur) {
                return Err(IngestError::AliasCycle { name: old.clone() });
            }
            direct.get(cur)
        } {
            seen.push(cur);
            cur = next.as_str();
        }
        canonical.insert(old.clone(), cur.to_string());
    }
    Ok(AliasMap { canonical })
}

/// Rebuild `dataset` on a registry of canonical names only, summing each
/// journal's citations into its final name. Total weight per year is
/// conserved; mutual citations of a merged pair become a self-loop. Names
/// without an alias entry pass through, so the operation is idempotent.
pub fn canonicalize(
    dataset: &TemporalDataset,
    aliases: &AliasMap,
) -> Result<TemporalDataset, IngestError> {
    let old = dataset.registry();
    let mut registry = JournalRegistry::new();
    let mut to_new = Vec::with_capacity(old.len());
    for (_, name) in old.iter() {
        to_new.push(registry.register(aliases.resolve(name))?);
    }
    let mut years = Vec::with_capacity(dataset.n_years());
    for net in dataset.years() {
        let mut merged = YearNetwork::new(net.year());
        for ((cited, citing), w) in net.arcs() {
            merged.add_citation(to_new[cited.index()], to_new[citing.index()], w)?;
        }
        years.push(merged);
    }
    Ok(TemporalDataset::new(registry, years)?)
}

fn in_file<T>(path: &Path, result: Result<T, IngestError>) -> Result<T, IngestError> {
    result.map_err(|source| IngestError::File {
        path: path.to_path_buf(),
        source: Box::new(source),
    })
}

/// Read year-labelled edge files — in any order — plus an optional alias
/// file, and return the canonicalized dataset. Ids are assigned in year
/// order, so the same files always produce the same registry.
pub fn load_dataset(
    files: &[(Year, PathBuf)],
    aliases: Option<&Path>,
) -> Result<TemporalDataset, IngestError> {
    let mut files: Vec<_> = files.to_vec();
    files.sort_by_key(|&(year, _)| year);
    let mut registry = JournalRegistry::new();
    let mut years = Vec::with_capacity(files.len());
    for (year, path) in &files {
        let reader = BufReader::new(in_file(path, File::open(path).map_err(IngestError::Io))?);
        years.push(in_file(
            path,
            parse_edge_file(reader, *year, &mut registry),
        )?);
    }
    let dataset = TemporalDataset::new(registry, years)?;
    match aliases {
        Some(path) => {
            let reader = BufReader::new(in_file(path, File::open(path).map_err(IngestError::Io))?);
            let map = in_file(path, parse_alias_map(reader))?;
            canonicalize(&dataset, &map)
        }
        None => Ok(dataset),
    }
}
