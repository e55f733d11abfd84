//! Line values and the valued undirected graphs that carry them.
//!
//! Island extraction only ever compares values, so everything downstream is
//! generic over a totally ordered copyable scalar. File interchange needs an
//! exact text form as well — the change pipeline re-reads its own TSV — so
//! the trait pairs each scalar with a format/parse round trip.

use num_traits::Zero;
use thiserror::Error;

use crate::model::JournalId;
use crate::Change;

/// Scalar usable as a line value.
///
/// `format_value` and `parse_value` must round-trip exactly for every value
/// the type can hold, with the one documented exception of rationals whose
/// reduced denominator is not of the form 2^a·5^b (those get 12 fractional
/// digits). The pipeline's own values — average yearly changes over three
/// or more years — are exact whenever `Y - 1` divides a power of ten.
pub trait LineValue: Copy + Ord + Zero {
    /// Render for a TSV cell or a Pajek line value.
    fn format_value(&self) -> String;
    /// Parse what [`LineValue::format_value`] produced; `None` on anything else.
    fn parse_value(text: &str) -> Option<Self>;
}

impl LineValue for i64 {
    fn format_value(&self) -> String {
        self.to_string()
    }
    fn parse_value(text: &str) -> Option<Self> {
        text.parse().ok()
    }
}

impl LineValue for i32 {
    fn format_value(&self) -> String {
        self.to_string()
    }
    fn parse_value(text: &str) -> Option<Self> {
        text.parse().ok()
    }
}

impl LineValue for u32 {
    fn format_value(&self) -> String {
        self.to_string()
    }
    fn parse_value(text: &str) -> Option<Self> {
        text.parse().ok()
    }
}

/// Fractional digits kept for rationals with no terminating decimal form.
const MAX_FRACTION_DIGITS: u32 = 12;

impl LineValue for Change {
    /// Exact decimal whenever the reduced denominator divides a power of
    /// ten (`3/2` → `"1.5"`, `-4/1` → `"-4"`); otherwise rounded half-up at
    /// twelve fractional digits.
    fn format_value(&self) -> String {
        let sign = if *self.numer() < 0 { "-" } else { "" };
        let numer = self.numer().unsigned_abs() as u128;
        let denom = self.denom().unsigned_abs() as u128; // Ratio keeps denom > 0
        let scale = 10u128.pow(MAX_FRACTION_DIGITS);
        // Exact when denom | scale: adding denom/2 < denom cannot bump an
        // exact multiple across the next integer.
        let scaled = (numer * scale + denom / 2) / denom;
        let int = scaled / scale;
        let frac = scaled % scale;
        if frac == 0 {
            return format!("{sign}{int}");
        }
        let frac = format!("{frac:012}");
        format!("{sign}{int}.{}", frac.trim_end_matches('0'))
    }

    fn parse_value(text: &str) -> Option<Self> {
        let (negative, rest) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        let (int_part, frac_part) = match rest.split_once('.') {
            Some((i, f)) => (i, f),
            None => (rest, ""),
        };
        if int_part.is_empty() || rest.contains('.') && frac_part.is_empty() {
            return None;
        }
        let all_digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(int_part) || !all_digits(frac_part) || frac_part.len() > 18 {
            return None;
        }
        let denom = 10i64.checked_pow(frac_part.len() as u32)?;
        let int: i64 = int_part.parse().ok()?;
        let frac: i64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().ok()?
        };
        let numer = int.checked_mul(denom)?.checked_add(frac)?;
        let numer = if negative {
            numer.checked_neg()?
        } else {
            numer
        };
        Some(Change::new(numer, denom))
    }
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum GraphError {
    #[error("line ({0}, {0}) is a loop; valued graphs are loop-free")]
    SelfLine(JournalId),
    #[error("line endpoint {id} is outside the vertex range 0..{n}")]
    OutOfRange { id: JournalId, n: usize },
    #[error("pair ({0}, {1}) appears more than once")]
    DuplicateLine(JournalId, JournalId),
}

/// Simple undirected graph over dense journal ids whose lines carry a
/// scalar value. Endpoints are stored smaller id first and the line list is
/// kept sorted by pair, so iteration order is deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuedGraph<V> {
    n: usize,
    lines: Vec<(JournalId, JournalId, V)>,
}

impl<V: LineValue> ValuedGraph<V> {
    /// Build from `(a, b, value)` triples; endpoints may come in either
    /// order. Loops, duplicate pairs, and out-of-range ids are rejected.
    pub fn new(
        n: usize,
        lines: impl IntoIterator<Item = (JournalId, JournalId, V)>,
    ) -> Result<Self, GraphError> {
        let mut lines: Vec<_> = lines
            .into_iter()
            .map(|(a, b, v)| if a <= b { (a, b, v) } else { (b, a, v) })
            .collect();
        for &(a, b, _) in &lines {
            if a == b {
                return Err(GraphError::SelfLine(a));
            }
            if b.index() >= n {
                return Err(GraphError::OutOfRange { id: b, n });
            }
        }
        lines.sort_by_key(|&(a, b, _)| (a, b));
        for pair in lines.windows(2) {
            if (pair[0].0, pair[0].1) == (pair[1].0, pair[1].1) {
                return Err(GraphError::DuplicateLine(pair[0].0, pair[0].1));
            }
        }
        Ok(Self { n, lines })
    }

    /// Number of vertices (the dense id range, not just line endpoints).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_lines(&self) -> usize {
        self.lines.len()
    }

    /// Lines as `(a, b, value)` with `a < b`, sorted by pair.
    pub fn lines(&self) -> &[(JournalId, JournalId, V)] {
        &self.lines
    }

    /// Same topology with every value transformed.
    pub fn map_values<W: LineValue>(&self, mut f: impl FnMut(V) -> W) -> ValuedGraph<W> {
        ValuedGraph {
            n: self.n,
            lines: self.lines.iter().map(|&(a, b, v)| (a, b, f(v))).collect(),
        }
    }
}
