//! Descriptive statistics of a citation graph: counts by kind and
//! log-binned power-law fits of node age and in-degree.

use std::io::{self, Write};

use datarank_core::eval::{fit_power_law, log_histogram, EvalError, HistogramBin, PowerLawFit};
use datarank_core::{CitationGraph, NodeKind};

pub const DEFAULT_BINS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub name: &'static str,
    /// Positive values entering the histogram.
    pub samples: usize,
    /// Zero values, which a log-binned fit cannot place.
    pub zeros_excluded: usize,
    pub bins: Vec<HistogramBin>,
    pub fit: Result<PowerLawFit, EvalError>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatsReport {
    pub nodes: usize,
    pub publications: usize,
    pub datasets: usize,
    pub edges: usize,
    /// Edges whose cited node is a dataset.
    pub dataset_citations: usize,
    pub reference_year: i32,
    pub distributions: Vec<Distribution>,
}

fn distribution(name: &'static str, values: impl Iterator<Item = u64>, n_bins: usize) -> Distribution {
    let all: Vec<u64> = values.collect();
    let positive: Vec<f64> = all.iter().filter(|v| **v > 0).map(|v| *v as f64).collect();
    Distribution {
        name,
        samples: positive.len(),
        zeros_excluded: all.len() - positive.len(),
        bins: log_histogram(&positive, n_bins).unwrap_or_default(),
        fit: fit_power_law(&positive, n_bins),
    }
}

pub fn compute_stats(graph: &CitationGraph, n_bins: usize) -> StatsReport {
    let n = graph.n_nodes();
    let datasets = graph.count_kind(NodeKind::Dataset);
    let is_dataset = |i: usize| graph.kind(i) == NodeKind::Dataset;
    let age = |i: usize| u64::from(graph.age(i).unwrap_or(0));
    let in_degree = |i: usize| graph.in_degree(i) as u64;
    StatsReport {
        nodes: n,
        publications: n - datasets,
        datasets,
        edges: graph.n_edges(),
        dataset_citations: (0..n).filter(|&i| is_dataset(i)).map(|i| graph.in_degree(i)).sum(),
        reference_year: graph.reference_year(),
        distributions: vec![
            distribution("age", (0..n).map(age), n_bins),
            distribution("dataset_age", (0..n).filter(|&i| is_dataset(i)).map(age), n_bins),
            distribution("in_degree", (0..n).map(in_degree), n_bins),
            distribution(
                "dataset_in_degree",
                (0..n).filter(|&i| is_dataset(i)).map(in_degree),
                n_bins,
            ),
        ],
    }
}

/// `metric,value` rows.
pub fn write_summary<W: Write>(report: &StatsReport, out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut row = |k: &str, v: String| w.write_record([k, v.as_str()]).map_err(io::Error::other);
    row("metric", "value".into())?;
    row("nodes", report.nodes.to_string())?;
    row("publications", report.publications.to_string())?;
    row("datasets", report.datasets.to_string())?;
    row("edges", report.edges.to_string())?;
    row("dataset_citations", report.dataset_citations.to_string())?;
    row("reference_year", report.reference_year.to_string())?;
    for d in &report.distributions {
        let key = |s: &str| format!("{}.{s}", d.name);
        row(&key("samples"), d.samples.to_string())?;
        row(&key("zeros_excluded"), d.zeros_excluded.to_string())?;
        match &d.fit {
            Ok(fit) => {
                row(&key("fit_status"), "ok".into())?;
                row(&key("exponent"), (fit.exponent + 0.0).to_string())?;
                row(&key("standard_error"), (fit.standard_error + 0.0).to_string())?;
                row(&key("fit_points"), fit.n_points.to_string())?;
            }
            Err(e) => row(&key("fit_status"), format!("failed: {e}"))?,
        }
    }
    w.flush()
}

/// `distribution,lo,hi,center,count,density` rows for every occupied bin.
pub fn write_histograms<W: Write>(report: &StatsReport, out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["distribution", "lo", "hi", "center", "count", "density"])
        .map_err(io::Error::other)?;
    for d in &report.distributions {
        for b in &d.bins {
            w.write_record([
                d.name.to_string(),
                b.lo.to_string(),
                b.hi.to_string(),
                b.center.to_string(),
                b.count.to_string(),
                b.density.to_string(),
            ])
            .map_err(io::Error::other)?;
        }
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use datarank_core::{build_graph, NodeRecord};

    #[test]
    fn three_node_counts_and_failed_fits() {
        let nodes = [
            NodeRecord::new("d", NodeKind::Dataset, 2000),
            NodeRecord::new("p", NodeKind::Publication, 2005),
            NodeRecord::new("q", NodeKind::Publication, 2010),
        ];
        let g = build_graph(&nodes, [("p", "d"), ("q", "d"), ("q", "p")], None).unwrap();
        let r = compute_stats(&g, 10);
        assert_eq!(
            (r.nodes, r.publications, r.datasets, r.edges, r.dataset_citations),
            (3, 2, 1, 3, 2)
        );
        assert_eq!(r.reference_year, 2010);
        assert!(r
            .distributions
            .iter()
            .all(|d| matches!(d.fit, Err(EvalError::InsufficientData { .. }))));
        let age = &r.distributions[0];
        assert_eq!((age.samples, age.zeros_excluded), (2, 1));
        let mut buf = Vec::new();
        write_summary(&r, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("nodes,3\n"));
        assert!(text.contains("in_degree.fit_status,\"failed: power-law fit needs at least 3 occupied bins"));
    }
}
