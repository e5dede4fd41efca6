//! Parameter grid search with absolute-correlation model selection.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::correlation::{average_ranks, correlation};
use super::usage::{UsageJoin, UsageTable};
use super::EvalError;
use crate::graph::CitationGraph;
use crate::rank::{Algorithm, RankParams};

/// Decay times (years) searched for both publications and datasets.
pub const STANDARD_TAUS: [f64; 8] = [1.0, 5.0, 10.0, 20.0, 30.0, 50.0, 70.0, 100.0];
pub const STANDARD_ALPHAS: [f64; 2] = [0.05, 0.15];

/// What a cell's scores are correlated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CorrelationTarget {
    /// Raw scores against raw usage counts.
    #[default]
    Scores,
    /// Raw scores against `ln(1 + usage)`.
    LogUsage,
    /// Average ranks of both sides.
    Ranks,
}

impl FromStr for CorrelationTarget {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "scores" | "raw" => Ok(CorrelationTarget::Scores),
            "log" | "log-usage" => Ok(CorrelationTarget::LogUsage),
            "ranks" | "rank" => Ok(CorrelationTarget::Ranks),
            other => Err(EvalError::InvalidSpec(format!("unknown correlation target `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub algorithm: Algorithm,
    pub tau_pub_values: Vec<f64>,
    pub tau_dataset_values: Vec<f64>,
    pub alpha_values: Vec<f64>,
    /// Required for DataRank-FB, ignored otherwise.
    pub beta_values: Option<Vec<f64>>,
    /// Supplies every field the axes do not cover (damping, tolerance, ...).
    pub base: RankParams,
    pub target: CorrelationTarget,
}

impl GridSpec {
    /// The 8 x 8 x 2 decay/stop grid; DataRank-FB additionally needs
    /// `beta_values`.
    pub fn standard(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            tau_pub_values: STANDARD_TAUS.to_vec(),
            tau_dataset_values: STANDARD_TAUS.to_vec(),
            alpha_values: STANDARD_ALPHAS.to_vec(),
            beta_values: None,
            base: RankParams::default(),
            target: CorrelationTarget::Scores,
        }
    }

    /// One cell at exactly `params`.
    pub fn single(algorithm: Algorithm, params: RankParams) -> Self {
        Self {
            algorithm,
            tau_pub_values: alloc::vec![params.tau_pub],
            tau_dataset_values: alloc::vec![params.tau_dataset],
            alpha_values: alloc::vec![params.alpha],
            beta_values: Some(alloc::vec![params.beta]),
            base: params,
            target: CorrelationTarget::Scores,
        }
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        let uses = Axes::of(self.algorithm);
        let check = |name: &str, used: bool, values: Option<&Vec<f64>>, ok: fn(f64) -> bool| {
            if !used {
                return Ok(());
            }
            let values = values.ok_or_else(|| EvalError::InvalidSpec(format!("{name} values are required")))?;
            if values.is_empty() {
                return Err(EvalError::InvalidSpec(format!("{name} values are empty")));
            }
            match values.iter().find(|v| !ok(**v)) {
                Some(bad) => Err(EvalError::InvalidSpec(format!("{name} value {bad} out of range"))),
                None => Ok(()),
            }
        };
        let pos = |v: f64| v > 0.0 && v.is_finite();
        let unit = |v: f64| v > 0.0 && v < 1.0;
        check("tau_pub", uses.tau_pub, Some(&self.tau_pub_values), pos)?;
        check("tau_dataset", uses.tau_dataset, Some(&self.tau_dataset_values), pos)?;
        check("alpha", uses.alpha, Some(&self.alpha_values), unit)?;
        check("beta", uses.beta, self.beta_values.as_ref(), unit)?;
        Ok(())
    }

    /// Cartesian product over the axes the algorithm reads, in ascending
    /// `(tau_pub, tau_dataset, alpha, beta)` order.
    pub fn cells(&self) -> Vec<RankParams> {
        let uses = Axes::of(self.algorithm);
        let axis = |used: bool, values: Option<&Vec<f64>>, base: f64| -> Vec<f64> {
            match values {
                Some(v) if used => {
                    let mut v = v.clone();
                    v.sort_by(f64::total_cmp);
                    v.dedup();
                    v
                }
                _ => alloc::vec![base],
            }
        };
        let taus_p = axis(uses.tau_pub, Some(&self.tau_pub_values), self.base.tau_pub);
        let taus_d = axis(uses.tau_dataset, Some(&self.tau_dataset_values), self.base.tau_dataset);
        let alphas = axis(uses.alpha, Some(&self.alpha_values), self.base.alpha);
        let betas = axis(uses.beta, self.beta_values.as_ref(), self.base.beta);
        let mut out = Vec::with_capacity(taus_p.len() * taus_d.len() * alphas.len() * betas.len());
        for &tau_pub in &taus_p {
            for &tau_dataset in &taus_d {
                for &alpha in &alphas {
                    for &beta in &betas {
                        out.push(RankParams {
                            tau_pub,
                            tau_dataset,
                            alpha,
                            beta,
                            ..self.base
                        });
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy)]
struct Axes {
    tau_pub: bool,
    tau_dataset: bool,
    alpha: bool,
    beta: bool,
}

impl Axes {
    fn of(algorithm: Algorithm) -> Self {
        let (tau_pub, tau_dataset, alpha, beta) = match algorithm {
            Algorithm::NetworkFlow => (true, false, true, false),
            Algorithm::DataRank => (true, true, true, false),
            Algorithm::DataRankFb => (true, true, true, true),
            Algorithm::PageRank | Algorithm::ModifiedPageRank => (false, false, false, false),
        };
        Self {
            tau_pub,
            tau_dataset,
            alpha,
            beta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellStatus {
    Ok,
    Failed(String),
}

impl CellStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, CellStatus::Ok)
    }
}

impl fmt::Display for CellStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellStatus::Ok => f.write_str("ok"),
            CellStatus::Failed(reason) => write!(f, "failed: {reason}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub params: RankParams,
    pub pearson: Option<f64>,
    pub spearman: Option<f64>,
    pub n_matched: usize,
    pub converged: bool,
    pub iterations_used: usize,
    pub status: CellStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub algorithm: Algorithm,
    pub rows: Vec<GridRow>,
    /// Index into `rows` of the ok cell with the largest `|pearson|`.
    pub best: Option<usize>,
    pub unmatched_usage: usize,
    pub unmatched_datasets: usize,
}

impl GridResult {
    pub fn best_row(&self) -> Option<&GridRow> {
        self.best.map(|i| &self.rows[i])
    }
}

fn transform(target: CorrelationTarget, pairs: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    match target {
        CorrelationTarget::Scores => pairs,
        CorrelationTarget::LogUsage => pairs.into_iter().map(|(s, u)| (s, libm::log1p(u))).collect(),
        CorrelationTarget::Ranks => {
            let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            average_ranks(&xs).into_iter().zip(average_ranks(&ys)).collect()
        }
    }
}

fn run_cell(graph: &CitationGraph, spec: &GridSpec, join: &UsageJoin, params: RankParams) -> GridRow {
    let mut row = GridRow {
        params,
        pearson: None,
        spearman: None,
        n_matched: join.matched.len(),
        converged: false,
        iterations_used: 0,
        status: CellStatus::Ok,
    };
    let ranks = match spec.algorithm.run(graph, &params) {
        Ok(r) => r,
        Err(e) => {
            row.status = CellStatus::Failed(format!("{e}"));
            return row;
        }
    };
    row.converged = ranks.converged;
    row.iterations_used = ranks.iterations_used;
    let pairs = match join.pairs(&ranks.scores) {
        Ok(j) => transform(spec.target, j.pairs),
        Err(e) => {
            row.status = CellStatus::Failed(format!("{e}"));
            return row;
        }
    };
    match correlation(&pairs) {
        Ok(c) => {
            row.pearson = Some(c.pearson);
            row.spearman = Some(c.spearman);
        }
        Err(e) => {
            row.status = CellStatus::Failed(format!("{e}"));
            return row;
        }
    }
    if !ranks.converged {
        row.status = CellStatus::Failed(format!("not converged after {} iterations", ranks.iterations_used));
    }
    row
}

/// Runs every cell of `spec`, correlates each against `usage` and selects
/// the ok cell with the largest absolute Pearson correlation (earliest cell
/// on ties). Cell failures are recorded in their rows.
pub fn grid_search(graph: &CitationGraph, spec: &GridSpec, usage: &UsageTable) -> Result<GridResult, EvalError> {
    spec.validate()?;
    let join = UsageJoin::resolve(graph, usage);
    if join.matched.is_empty() {
        return Err(EvalError::EmptyIntersection {
            unmatched_usage: join.unmatched_usage,
            unmatched_datasets: join.unmatched_datasets,
        });
    }
    let cells = spec.cells();
    let rows = crate::par::map_collect(&cells, |p| run_cell(graph, spec, &join, *p));

    let mut best: Option<usize> = None;
    for (i, row) in rows.iter().enumerate() {
        let (true, Some(r)) = (row.status.is_ok(), row.pearson) else {
            continue;
        };
        if best.is_none_or(|b| libm::fabs(r) > libm::fabs(rows[b].pearson.unwrap_or(0.0))) {
            best = Some(i);
        }
    }
    if let Some(b) = best {
        let top = libm::fabs(rows[b].pearson.unwrap_or(0.0));
        debug_assert!(rows
            .iter()
            .filter(|r| r.status.is_ok())
            .all(|r| r.pearson.is_none_or(|p| libm::fabs(p) <= top)));
    }

    Ok(GridResult {
        algorithm: spec.algorithm,
        rows,
        best,
        unmatched_usage: join.unmatched_usage,
        unmatched_datasets: join.unmatched_datasets,
    })
}
