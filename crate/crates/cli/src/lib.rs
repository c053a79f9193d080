//! Command-line lab over `btds-core`: instance checks, exhaustive atlases,
//! predicate searches, fixture regression and witness re-verification.

pub mod atlas;
pub mod config;
pub mod error;
pub mod instance;
pub mod paper;
pub mod predicate;
pub mod props;
pub mod search;
pub mod suites;
pub mod witness;

pub use btds_core as core;
pub use config::SweepConfig;
pub use error::{LabError, Result};

/// Pretty JSON with a trailing newline. Map keys are ordered, so equal
/// values give equal bytes.
pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}
