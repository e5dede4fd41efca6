//! Delimited exports of score vectors and grid results.
//!
//! Floats use Rust's shortest round-trip formatting, so an export re-parses
//! to exactly the values computed.

use std::io::{self, Write};

use datarank_core::eval::{GridResult, GridRow};
use datarank_core::{Algorithm, CitationGraph, RankVector};

pub const SCORE_HEADER: [&str; 3] = ["external_id", "score", "rank_position"];
pub const GRID_HEADER: [&str; 9] = [
    "tau_pub",
    "tau_dataset",
    "alpha",
    "beta",
    "pearson",
    "spearman",
    "n_matched",
    "converged",
    "status",
];

fn csv_err(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    }
}

/// One row per node, highest score first, ties broken by external id.
/// Positions start at 1.
pub fn write_scores<W: Write>(graph: &CitationGraph, ranks: &RankVector, out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SCORE_HEADER).map_err(csv_err)?;
    for (pos, i) in ranks.ordering(graph).into_iter().enumerate() {
        let score = ranks.scores[i].to_string();
        let pos = (pos + 1).to_string();
        w.write_record([graph.external_id(i), score.as_str(), pos.as_str()])
            .map_err(csv_err)?;
    }
    w.flush()
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Axis values a cell actually varies; parameters the algorithm ignores are
/// left blank.
fn axes(algorithm: Algorithm, row: &GridRow) -> [String; 4] {
    let p = &row.params;
    match algorithm {
        Algorithm::NetworkFlow => [p.tau_pub.to_string(), String::new(), p.alpha.to_string(), String::new()],
        Algorithm::DataRank => [
            p.tau_pub.to_string(),
            p.tau_dataset.to_string(),
            p.alpha.to_string(),
            String::new(),
        ],
        Algorithm::DataRankFb => [
            p.tau_pub.to_string(),
            p.tau_dataset.to_string(),
            p.alpha.to_string(),
            p.beta.to_string(),
        ],
        Algorithm::PageRank | Algorithm::ModifiedPageRank => Default::default(),
    }
}

/// One row per cell in grid order.
pub fn write_grid<W: Write>(result: &GridResult, out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(GRID_HEADER).map_err(csv_err)?;
    for row in &result.rows {
        let [tp, td, a, b] = axes(result.algorithm, row);
        w.write_record([
            tp,
            td,
            a,
            b,
            opt(row.pearson),
            opt(row.spearman),
            row.n_matched.to_string(),
            row.converged.to_string(),
            row.status.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()
}

/// `algorithm=... tau_pub=... pearson=...` line describing the best cell.
pub fn best_summary(result: &GridResult) -> String {
    let Some(row) = result.best_row() else {
        return format!(
            "algorithm={} best=none (no cell produced a correlation)",
            result.algorithm
        );
    };
    let names = ["tau_pub", "tau_dataset", "alpha", "beta"];
    let mut parts = vec![format!("algorithm={}", result.algorithm)];
    for (name, value) in names.iter().zip(axes(result.algorithm, row)) {
        if !value.is_empty() {
            parts.push(format!("{name}={value}"));
        }
    }
    parts.push(format!("pearson={}", opt(row.pearson)));
    parts.push(format!("spearman={}", opt(row.spearman)));
    parts.push(format!("n_matched={}", row.n_matched));
    parts.join(" ")
}
