//! Command-line runner, sweep driver and result catalog for `itersum`.

pub mod catalog;
pub mod cli;
pub mod config;
pub mod error;
pub mod records;
pub mod sweep;

pub use catalog::{read_catalog, sorted_canonical, CatalogRecord, RecordKey, RecordKind, Status};
pub use config::{SweepConfig, Task};
pub use error::{HarnessError, Result};
pub use sweep::{run_sweep, SweepCounts, SweepSummary};
