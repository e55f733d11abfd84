//! Detect integration and disintegration hot-spots in yearly journal
//! citation networks.
//!
//! The analysis runs in stages, each with its own module:
//!
//! 1. [`ingest`] reads yearly `cited → citing` edge lists and merges
//!    renamed journals onto their newest name.
//! 2. [`triads`] reduces each year to its reciprocal (mutual citation)
//!    graph and counts, per pair, the third journals reciprocally tied to
//!    both — the complete triads the pair participates in.
//! 3. [`dynamics`] follows those counts across years for pairs that stay
//!    reciprocal the whole period and classifies each trajectory as
//!    monotonically rising, monotonically falling, or neither.
//! 4. [`islands`] extracts line islands from the monotonic-change network:
//!    maximal journal sets whose internal change stands strictly above
//!    every line leaving the set — the local hot-spots.
//! 5. [`attribution`] explains a pair's newly shared neighbors by the
//!    individual citation arcs that appeared that year.
//!
//! [`metrics`] adds whole-network descriptive statistics and [`oracle`]
//! holds brute-force reference implementations plus a seeded random
//! dataset generator for tests and benchmarks.

pub mod attribution;
pub mod dynamics;
pub mod ingest;
pub mod islands;
pub mod metrics;
pub mod model;
pub mod oracle;
pub mod triads;
pub mod value;

/// Year label of a network snapshot.
pub type Year = i32;

/// Citation count carried by one directed arc. Weights are exact integers;
/// nothing in the pipeline ever rounds them.
pub type Weight = u64;

/// Number of complete triads a reciprocal pair participates in, i.e. its
/// shared-neighbor count within one year.
pub type Count = u32;

/// Average yearly change of a triad count, `(c_Y - c_1) / (Y - 1)`. Kept as
/// an exact rational so equality against zero, tie handling during island
/// extraction, and shifts by a constant are never blurred by rounding.
pub type Change = num_rational::Ratio<i64>;

pub use model::{JournalId, JournalRegistry, TemporalDataset, YearNetwork};
pub use value::{LineValue, ValuedGraph};
