//! File formats, parsers and exports around [`datarank_core`].

pub mod export;
pub mod ingest;
pub mod manifest;
pub mod snapshot;
pub mod stats;

pub use datarank_core as core;
