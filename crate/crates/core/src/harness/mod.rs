//! Input and output formats, random instances, verification and statistics.

pub mod experiment;
pub mod format;
pub mod ingest;
pub mod random;
pub mod stats;
pub mod verify;

pub use experiment::{ExperimentSpec, Taus};
pub use format::{parse_database, write_database, write_patterns, Components, Format};
pub use ingest::{ingest_edge_lists, Ingested};
pub use stats::{stats, StatsReport};
pub use verify::{verify_random, Check, VerifyReport};
