//! Heterogeneous citation graphs and flow-based impact rankers.
//!
//! The crate is `no_std` (with `alloc`) by default. The `std` feature adds
//! `std::error::Error` integration and the `parallel` feature splits the
//! sparse push kernels and grid cells across a rayon pool. Results are
//! bitwise identical with and without `parallel`: every per-node sum and
//! every reduction runs in a fixed order.
//!
//! Layout:
//!
//! - [`graph`]: the immutable [`CitationGraph`] (CSR forward and reverse
//!   adjacency over dense `u32` node indices), its builder and year pruning.
//! - [`rank`]: NetworkFlow, DataRank, DataRank-FB, PageRank and the
//!   kind-split PageRank behind [`rank::Algorithm`].
//! - [`eval`]: usage joins, Pearson/Spearman correlation, the parameter
//!   grid search and log-binned power-law fits.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![warn(missing_debug_implementations, rust_2018_idioms)]

extern crate alloc;

pub mod eval;
pub mod graph;
pub mod rank;

mod par;

pub use graph::{build_graph, prune_by_year, CitationGraph, GraphBuilder, GraphError, NodeKind, NodeRecord};
pub use rank::{Algorithm, RankError, RankParams, RankVector};
