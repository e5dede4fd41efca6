//! PageRank and the kind-split variant with separate damping factors for
//! datasets and publications.
//!
//! Dangling mass (rank sitting on nodes that cite nothing) is handed back to
//! every node uniformly, scaled by the damping factor that applies to the
//! dangling node.

use alloc::vec;

use super::kernels::pull_citers;
use super::{Algorithm, RankError, RankParams, RankVector};
use crate::graph::{CitationGraph, NodeKind};
use crate::par;

/// `PR_i = (1 - d) / N + d * sum_{j -> i} PR_j / L_j`, iterated from the
/// uniform vector.
pub fn pagerank(graph: &CitationGraph, params: &RankParams) -> Result<RankVector, RankError> {
    params.validate(Algorithm::PageRank)?;
    if graph.is_empty() {
        return Err(RankError::EmptyGraph);
    }
    let n = graph.n_nodes();
    let teleport = (1.0 - params.d) / n as f64;
    iterate(graph, params, Algorithm::PageRank, teleport, |_| params.d)
}

/// ```text
/// PR_i = (1 - d_data) / N_data + (1 - d_pub) / N_pub
///      + d_data * sum_{dataset j -> i} PR_j / L_j
///      + d_pub  * sum_{publication k -> i} PR_k / L_k
/// ```
///
/// Datasets never cite, so the dataset sum is identically zero on any valid
/// graph; only the dangling hand-back carries `d_data`.
pub fn modified_pagerank(graph: &CitationGraph, params: &RankParams) -> Result<RankVector, RankError> {
    params.validate(Algorithm::ModifiedPageRank)?;
    if graph.is_empty() {
        return Err(RankError::EmptyGraph);
    }
    let n_data = graph.count_kind(NodeKind::Dataset);
    let n_pub = graph.n_nodes() - n_data;
    if n_data == 0 {
        return Err(RankError::NoDatasets);
    }
    if n_pub == 0 {
        return Err(RankError::NoPublications);
    }
    let teleport = (1.0 - params.d_data) / n_data as f64 + (1.0 - params.d_pub) / n_pub as f64;
    iterate(
        graph,
        params,
        Algorithm::ModifiedPageRank,
        teleport,
        |kind| match kind {
            NodeKind::Dataset => params.d_data,
            NodeKind::Publication => params.d_pub,
        },
    )
}

fn iterate<D>(
    graph: &CitationGraph,
    params: &RankParams,
    algorithm: Algorithm,
    teleport: f64,
    damping: D,
) -> Result<RankVector, RankError>
where
    D: Fn(NodeKind) -> f64 + Sync + Send,
{
    let n = graph.n_nodes();
    let inv_n = 1.0 / n as f64;
    let mut rank = vec![inv_n; n];
    let mut next = vec![0.0; n];
    let mut sent = vec![0.0; n];

    let mut iterations_used = 0;
    let mut converged = false;
    for k in 1..=params.max_iters {
        let r = &rank;
        par::fill(&mut sent, |j| match graph.out_degree(j) {
            0 => 0.0,
            l => damping(graph.kind(j)) * r[j] / l as f64,
        });
        let dangling = par::sum_by(n, |j| {
            if graph.out_degree(j) == 0 {
                damping(graph.kind(j)) * r[j]
            } else {
                0.0
            }
        });
        let base = teleport + dangling * inv_n;
        pull_citers(graph, &sent, 1.0, &mut next);
        par::update(&mut next, |_, x| *x += base);

        let delta = par::sum_by(n, |i| libm::fabs(next[i] - rank[i]));
        core::mem::swap(&mut rank, &mut next);
        iterations_used = k;
        if !delta.is_finite() {
            return Err(RankError::NonFinite { iteration: k });
        }
        if delta < params.tolerance {
            converged = true;
            break;
        }
    }

    Ok(RankVector {
        scores: rank,
        algorithm,
        params: *params,
        iterations_used,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, NodeRecord};

    fn graph(nodes: &[(&str, NodeKind)], edges: &[(&str, &str)]) -> CitationGraph {
        let recs: Vec<NodeRecord> = nodes.iter().map(|(id, k)| NodeRecord::new(*id, *k, 2000)).collect();
        build_graph(&recs, edges.iter().copied(), None).unwrap()
    }

    fn tight() -> RankParams {
        RankParams {
            tolerance: 1e-14,
            ..RankParams::default()
        }
    }

    #[test]
    fn single_node_is_one() {
        let g = graph(&[("a", NodeKind::Publication)], &[]);
        let pr = pagerank(&g, &tight()).unwrap();
        assert!((pr.scores[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_isolated_nodes_split_evenly() {
        let g = graph(&[("a", NodeKind::Publication), ("b", NodeKind::Publication)], &[]);
        let pr = pagerank(&g, &tight()).unwrap();
        assert!(pr.scores.iter().all(|s| (s - 0.5).abs() < 1e-15));
    }

    #[test]
    fn cited_node_outranks_citer_and_mass_is_conserved() {
        let g = graph(
            &[
                ("a", NodeKind::Publication),
                ("b", NodeKind::Publication),
                ("c", NodeKind::Dataset),
            ],
            &[("a", "c"), ("b", "c"), ("b", "a")],
        );
        let pr = pagerank(&g, &tight()).unwrap();
        assert!(pr.scores[2] > pr.scores[0] && pr.scores[0] > pr.scores[1]);
        assert!((pr.total() - 1.0).abs() < 1e-12);
        let floor = (1.0 - 0.85) / 3.0;
        assert!(pr.scores.iter().all(|&s| s >= floor));
    }

    #[test]
    fn modified_needs_both_kinds() {
        let g = graph(&[("a", NodeKind::Publication)], &[]);
        assert_eq!(modified_pagerank(&g, &tight()), Err(RankError::NoDatasets));
        let g = graph(&[("d", NodeKind::Dataset)], &[]);
        assert_eq!(modified_pagerank(&g, &tight()), Err(RankError::NoPublications));
    }

    #[test]
    fn modified_with_equal_damping_is_scaled_pagerank() {
        let g = graph(
            &[
                ("p1", NodeKind::Publication),
                ("p2", NodeKind::Publication),
                ("d1", NodeKind::Dataset),
                ("d2", NodeKind::Dataset),
            ],
            &[("p1", "p2"), ("p1", "d1"), ("p2", "d1"), ("p2", "d2")],
        );
        let p = RankParams {
            d: 0.8,
            d_data: 0.8,
            d_pub: 0.8,
            ..tight()
        };
        let pr = pagerank(&g, &p).unwrap();
        let mpr = modified_pagerank(&g, &p).unwrap();
        // Each teleport term is 2(1 - d)/N with two equal kind populations,
        // so the whole solution is 4x standard PageRank.
        for (a, b) in mpr.scores.iter().zip(&pr.scores) {
            assert!((a - 4.0 * b).abs() < 1e-12, "{a} vs {b}");
        }
    }
}
