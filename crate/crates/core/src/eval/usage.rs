use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::EvalError;
use crate::graph::{CitationGraph, NodeKind};
use crate::rank::RankVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UsageKind {
    Visits,
    Downloads,
}

impl fmt::Display for UsageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UsageKind::Visits => "visits",
            UsageKind::Downloads => "downloads",
        })
    }
}

/// Observed usage per external dataset id. Ids are kept sorted, which fixes
/// the order of joined pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageTable {
    entries: BTreeMap<String, u64>,
    kind: UsageKind,
}

impl UsageTable {
    pub fn new(kind: UsageKind) -> Self {
        Self {
            entries: BTreeMap::new(),
            kind,
        }
    }

    pub fn kind(&self) -> UsageKind {
        self.kind
    }

    /// Fails with [`EvalError::DuplicateId`] if `id` is already present.
    pub fn insert(&mut self, id: impl Into<String>, count: u64) -> Result<(), EvalError> {
        let id = id.into();
        if self.entries.contains_key(&id) {
            return Err(EvalError::DuplicateId(id));
        }
        self.entries.insert(id, count);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<u64> {
        self.entries.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> + '_ {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// Dataset nodes matched against a usage table, independent of any score
/// vector so a grid search can resolve ids once.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageJoin {
    /// `(node index, usage count)` in usage-id order.
    pub matched: Vec<(usize, f64)>,
    /// Usage ids with no dataset node in the graph.
    pub unmatched_usage: usize,
    /// Dataset nodes with no usage entry.
    pub unmatched_datasets: usize,
}

impl UsageJoin {
    pub fn resolve(graph: &CitationGraph, usage: &UsageTable) -> Self {
        let mut matched = Vec::new();
        let mut unmatched_usage = 0;
        for (id, count) in usage.iter() {
            match graph.index_of(id) {
                Some(i) if graph.kind(i) == NodeKind::Dataset => matched.push((i, count as f64)),
                _ => unmatched_usage += 1,
            }
        }
        let unmatched_datasets = graph.count_kind(NodeKind::Dataset) - matched.len();
        Self {
            matched,
            unmatched_usage,
            unmatched_datasets,
        }
    }

    pub fn pairs(&self, scores: &[f64]) -> Result<JoinedPairs, EvalError> {
        if self.matched.is_empty() {
            return Err(EvalError::EmptyIntersection {
                unmatched_usage: self.unmatched_usage,
                unmatched_datasets: self.unmatched_datasets,
            });
        }
        Ok(JoinedPairs {
            pairs: self.matched.iter().map(|&(i, u)| (scores[i], u)).collect(),
            unmatched_usage: self.unmatched_usage,
            unmatched_datasets: self.unmatched_datasets,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JoinedPairs {
    /// `(score, usage)` in usage-id order.
    pub pairs: Vec<(f64, f64)>,
    pub unmatched_usage: usize,
    pub unmatched_datasets: usize,
}

/// Pairs every dataset present in both the graph and the usage table.
pub fn join_usage(ranks: &RankVector, usage: &UsageTable, graph: &CitationGraph) -> Result<JoinedPairs, EvalError> {
    if ranks.len() != graph.n_nodes() {
        return Err(EvalError::LengthMismatch {
            expected: graph.n_nodes(),
            got: ranks.len(),
        });
    }
    UsageJoin::resolve(graph, usage).pairs(&ranks.scores)
}
