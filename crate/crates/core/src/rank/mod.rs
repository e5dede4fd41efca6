//! Flow-based and PageRank-style rankers over a [`CitationGraph`].
//!
//! The flow family (NetworkFlow, DataRank, DataRank-FB) accumulates a
//! truncated series of pushes starting from an age-decayed distribution
//! `rho`; walkers that reach a node with nothing to follow simply stop. The
//! PageRank family iterates to a fixed point and hands dangling mass back
//! to every node uniformly.
//!
//! All of them stop when the L1 norm of the change in the score vector
//! falls below [`RankParams::tolerance`], or after
//! [`RankParams::max_iters`] updates with `converged = false`.

mod flow;
mod kernels;
mod pagerank;

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::graph::CitationGraph;

pub use flow::{datarank, datarank_fb, datarank_fb_with, initial_rho, network_flow, BetaCheck};
pub use kernels::{backward_push, forward_push};
pub use pagerank::{modified_pagerank, pagerank};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    NetworkFlow,
    DataRank,
    DataRankFb,
    PageRank,
    ModifiedPageRank,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::NetworkFlow,
        Algorithm::DataRank,
        Algorithm::DataRankFb,
        Algorithm::PageRank,
        Algorithm::ModifiedPageRank,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::NetworkFlow => "networkflow",
            Algorithm::DataRank => "datarank",
            Algorithm::DataRankFb => "datarank-fb",
            Algorithm::PageRank => "pagerank",
            Algorithm::ModifiedPageRank => "modified-pagerank",
        }
    }

    pub fn is_flow(self) -> bool {
        matches!(
            self,
            Algorithm::NetworkFlow | Algorithm::DataRank | Algorithm::DataRankFb
        )
    }

    pub fn run(self, graph: &CitationGraph, params: &RankParams) -> Result<RankVector, RankError> {
        match self {
            Algorithm::NetworkFlow => network_flow(graph, params),
            Algorithm::DataRank => datarank(graph, params),
            Algorithm::DataRankFb => datarank_fb(graph, params),
            Algorithm::PageRank => pagerank(graph, params),
            Algorithm::ModifiedPageRank => modified_pagerank(graph, params),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Algorithm {
    type Err = RankError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .trim()
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .map(|c| c.to_ascii_lowercase())
            .collect();
        match norm.as_str() {
            "networkflow" | "flow" => Ok(Algorithm::NetworkFlow),
            "datarank" => Ok(Algorithm::DataRank),
            "datarankfb" => Ok(Algorithm::DataRankFb),
            "pagerank" => Ok(Algorithm::PageRank),
            "modifiedpagerank" | "mpagerank" => Ok(Algorithm::ModifiedPageRank),
            _ => Err(RankError::UnknownAlgorithm(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RankError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("non-finite score encountered at iteration {iteration}")]
    NonFinite { iteration: usize },
    #[error("graph has no dataset nodes")]
    NoDatasets,
    #[error("graph has no publication nodes")]
    NoPublications,
    #[error("score vector has length {got}, graph has {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },
    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),
}

/// Parameter bundle shared by every ranker; each algorithm reads the fields
/// it needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankParams {
    /// Decay time (years) of the publication starting weight.
    pub tau_pub: f64,
    /// Decay time (years) of the dataset starting weight.
    pub tau_dataset: f64,
    /// Per-step stop probability of the flow walker.
    pub alpha: f64,
    /// Per-step backward (toward citing papers) probability for DataRank-FB.
    pub beta: f64,
    pub d: f64,
    pub d_data: f64,
    pub d_pub: f64,
    pub max_iters: usize,
    pub tolerance: f64,
    /// Scale `rho` to sum to one. Disable to study the raw exponentials.
    pub normalize_rho: bool,
}

impl Default for RankParams {
    fn default() -> Self {
        Self {
            tau_pub: 10.0,
            tau_dataset: 10.0,
            alpha: 0.05,
            beta: 0.01,
            d: 0.85,
            d_data: 0.85,
            d_pub: 0.85,
            max_iters: 1000,
            tolerance: 1e-2,
            normalize_rho: true,
        }
    }
}

fn invalid(msg: impl Into<String>) -> RankError {
    RankError::InvalidParams(msg.into())
}

fn open_unit(name: &str, v: f64) -> Result<(), RankError> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(invalid(alloc::format!("{name} must lie in (0, 1), got {v}")))
    }
}

fn positive(name: &str, v: f64) -> Result<(), RankError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(alloc::format!("{name} must be positive and finite, got {v}")))
    }
}

impl RankParams {
    fn check_iteration(&self) -> Result<(), RankError> {
        if self.max_iters == 0 {
            return Err(invalid("max_iters must be at least 1"));
        }
        positive("tolerance", self.tolerance)
    }

    /// Checks the fields `algorithm` consumes.
    pub fn validate(&self, algorithm: Algorithm) -> Result<(), RankError> {
        self.check_iteration()?;
        match algorithm {
            Algorithm::NetworkFlow => {
                positive("tau_pub", self.tau_pub)?;
                open_unit("alpha", self.alpha)
            }
            Algorithm::DataRank => {
                positive("tau_pub", self.tau_pub)?;
                positive("tau_dataset", self.tau_dataset)?;
                open_unit("alpha", self.alpha)
            }
            Algorithm::DataRankFb => self.validate_fb(BetaCheck::Strict),
            Algorithm::PageRank => open_unit("d", self.d),
            Algorithm::ModifiedPageRank => {
                open_unit("d_data", self.d_data)?;
                open_unit("d_pub", self.d_pub)
            }
        }
    }

    fn validate_fb(&self, check: BetaCheck) -> Result<(), RankError> {
        self.check_iteration()?;
        positive("tau_pub", self.tau_pub)?;
        positive("tau_dataset", self.tau_dataset)?;
        open_unit("alpha", self.alpha)?;
        let beta_ok = match check {
            BetaCheck::Strict => self.beta > 0.0,
            BetaCheck::AllowZero => self.beta >= 0.0,
        };
        if !beta_ok || !self.beta.is_finite() {
            return Err(invalid(alloc::format!("beta must be positive, got {}", self.beta)));
        }
        if self.alpha <= self.beta {
            return Err(invalid(alloc::format!(
                "alpha ({}) must exceed beta ({})",
                self.alpha,
                self.beta
            )));
        }
        Ok(())
    }
}

/// Per-node scores aligned with graph node indices.
#[derive(Debug, Clone, PartialEq)]
pub struct RankVector {
    pub scores: Vec<f64>,
    pub algorithm: Algorithm,
    pub params: RankParams,
    pub iterations_used: usize,
    pub converged: bool,
}

impl RankVector {
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn total(&self) -> f64 {
        crate::par::sum_by(self.scores.len(), |i| self.scores[i])
    }

    /// Node indices by descending score, ties broken by external id.
    pub fn ordering(&self, graph: &CitationGraph) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.scores.len()).collect();
        order.sort_by(|&a, &b| {
            self.scores[b]
                .total_cmp(&self.scores[a])
                .then_with(|| graph.external_id(a).cmp(graph.external_id(b)))
        });
        order
    }
}

/// Deterministic L1 norm.
pub(crate) fn l1(v: &[f64]) -> f64 {
    crate::par::sum_by(v.len(), |i| libm::fabs(v[i]))
}
