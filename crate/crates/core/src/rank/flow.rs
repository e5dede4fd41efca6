//! NetworkFlow, DataRank and DataRank-FB.
//!
//! Traffic is the accumulated series
//!
//! ```text
//! T = rho + sum_{k>=1} (1 - alpha)^k W^k rho                      (forward only)
//! T = rho + sum_{k>=1} [(1 - alpha)^k W^k rho + beta^k M^k rho]   (forward + backward)
//! ```
//!
//! evaluated term by term. The forward and backward terms are kept as two
//! independent sequences; no mixed `W M` products appear.

use alloc::vec;
use alloc::vec::Vec;

use super::kernels::{backward_push_into, forward_push_into};
use super::{l1, Algorithm, RankError, RankParams, RankVector};
use crate::graph::{CitationGraph, NodeKind};
use crate::par;

/// How strictly DataRank-FB checks `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaCheck {
    /// `beta > 0`.
    Strict,
    /// Also accepts `beta = 0`, under which DataRank-FB reduces to DataRank.
    AllowZero,
}

/// Unnormalized starting weights `exp(-age / tau)`, with `tau_dataset` for
/// dataset nodes when `heterogeneous` is set and `tau_pub` everywhere else.
pub fn raw_rho(
    graph: &CitationGraph,
    tau_pub: f64,
    tau_dataset: f64,
    heterogeneous: bool,
) -> Result<Vec<f64>, RankError> {
    if graph.is_empty() {
        return Err(RankError::EmptyGraph);
    }
    let reference = graph.reference_year();
    let mut rho = vec![0.0; graph.n_nodes()];
    par::fill(&mut rho, |i| {
        let age = f64::from(reference - graph.year(i));
        let tau = if heterogeneous && graph.kind(i) == NodeKind::Dataset {
            tau_dataset
        } else {
            tau_pub
        };
        libm::exp(-age / tau)
    });
    Ok(rho)
}

/// Starting distribution, normalized to sum to one.
pub fn initial_rho(
    graph: &CitationGraph,
    tau_pub: f64,
    tau_dataset: f64,
    heterogeneous: bool,
) -> Result<Vec<f64>, RankError> {
    let mut rho = raw_rho(graph, tau_pub, tau_dataset, heterogeneous)?;
    normalize(&mut rho)?;
    Ok(rho)
}

fn normalize(rho: &mut [f64]) -> Result<(), RankError> {
    let total = l1(rho);
    // Every weight underflowed: nothing to normalize against.
    if !(total > 0.0 && total.is_finite()) {
        return Err(RankError::NonFinite { iteration: 0 });
    }
    par::update(rho, |_, x| *x /= total);
    Ok(())
}

fn starting(graph: &CitationGraph, params: &RankParams, heterogeneous: bool) -> Result<Vec<f64>, RankError> {
    let mut rho = raw_rho(graph, params.tau_pub, params.tau_dataset, heterogeneous)?;
    if params.normalize_rho {
        normalize(&mut rho)?;
    }
    Ok(rho)
}

/// Homogeneous flow: every node decays with `tau_pub`.
pub fn network_flow(graph: &CitationGraph, params: &RankParams) -> Result<RankVector, RankError> {
    params.validate(Algorithm::NetworkFlow)?;
    let rho = starting(graph, params, false)?;
    accumulate(graph, rho, params, None, Algorithm::NetworkFlow)
}

/// Flow with kind-specific decay times.
pub fn datarank(graph: &CitationGraph, params: &RankParams) -> Result<RankVector, RankError> {
    params.validate(Algorithm::DataRank)?;
    let rho = starting(graph, params, true)?;
    accumulate(graph, rho, params, None, Algorithm::DataRank)
}

/// DataRank whose walker may also step backward, to papers citing the
/// current node, with probability `beta`.
pub fn datarank_fb(graph: &CitationGraph, params: &RankParams) -> Result<RankVector, RankError> {
    datarank_fb_with(graph, params, BetaCheck::Strict)
}

pub fn datarank_fb_with(graph: &CitationGraph, params: &RankParams, check: BetaCheck) -> Result<RankVector, RankError> {
    params.validate_fb(check)?;
    let rho = starting(graph, params, true)?;
    accumulate(graph, rho, params, Some(params.beta), Algorithm::DataRankFb)
}

fn accumulate(
    graph: &CitationGraph,
    rho: Vec<f64>,
    params: &RankParams,
    beta: Option<f64>,
    algorithm: Algorithm,
) -> Result<RankVector, RankError> {
    let n = graph.n_nodes();
    let keep = 1.0 - params.alpha;
    let mut total = rho.clone();
    let mut forward = rho;
    let mut backward = if beta.is_some() { forward.clone() } else { Vec::new() };
    let mut next = vec![0.0; n];
    let mut scratch = vec![0.0; n];

    let mut iterations_used = 0;
    let mut converged = false;
    for k in 1..=params.max_iters {
        forward_push_into(graph, &forward, keep, &mut scratch, &mut next);
        core::mem::swap(&mut forward, &mut next);
        let delta = match beta {
            Some(beta) => {
                backward_push_into(graph, &backward, beta, &mut scratch, &mut next);
                core::mem::swap(&mut backward, &mut next);
                let (f, b) = (&forward, &backward);
                par::update(&mut total, |i, t| *t += f[i] + b[i]);
                par::sum_by(n, |i| libm::fabs(f[i] + b[i]))
            }
            None => {
                let f = &forward;
                par::update(&mut total, |i, t| *t += f[i]);
                l1(f)
            }
        };
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
        scores: total,
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

    fn graph(nodes: &[(&str, NodeKind, i32)], edges: &[(&str, &str)], reference: i32) -> CitationGraph {
        let recs: Vec<NodeRecord> = nodes.iter().map(|(id, k, y)| NodeRecord::new(*id, *k, *y)).collect();
        build_graph(&recs, edges.iter().copied(), Some(reference)).unwrap()
    }

    fn tight() -> RankParams {
        RankParams {
            tolerance: 1e-15,
            ..RankParams::default()
        }
    }

    #[test]
    fn single_node_rho_is_one() {
        let g = graph(&[("p", NodeKind::Publication, 2012)], &[], 2012);
        assert_eq!(initial_rho(&g, 3.0, 3.0, false).unwrap(), vec![1.0]);
        let t = network_flow(&g, &RankParams::default()).unwrap();
        assert_eq!(t.scores, vec![1.0]);
        assert!(t.converged);
    }

    #[test]
    fn two_publications_one_tau_apart() {
        let tau = 7.0;
        let g = graph(
            &[
                ("young", NodeKind::Publication, 2012),
                ("old", NodeKind::Publication, 2005),
            ],
            &[],
            2012,
        );
        let rho = initial_rho(&g, tau, tau, false).unwrap();
        // 1 / (1 + e^-1) and e^-1 / (1 + e^-1)
        assert!((rho[0] - 0.731_058_578_630_004_9).abs() < 1e-12);
        assert!((rho[1] - 0.268_941_421_369_995_1).abs() < 1e-12);
    }

    #[test]
    fn equal_taus_give_equal_rho_across_kinds() {
        let g = graph(
            &[("p", NodeKind::Publication, 2001), ("d", NodeKind::Dataset, 2001)],
            &[],
            2012,
        );
        let rho = initial_rho(&g, 5.0, 5.0, true).unwrap();
        assert_eq!(rho[0], rho[1]);
    }

    #[test]
    fn chain_matches_hand_summation() {
        // B (2011) cites A (2010), reference year 2012.
        let g = graph(
            &[("A", NodeKind::Publication, 2010), ("B", NodeKind::Publication, 2011)],
            &[("B", "A")],
            2012,
        );
        let p = RankParams {
            tau_pub: 10.0,
            alpha: 0.05,
            ..tight()
        };
        let t = network_flow(&g, &p).unwrap();
        let (ea, eb) = ((-0.2f64).exp(), (-0.1f64).exp());
        let (ra, rb) = (ea / (ea + eb), eb / (ea + eb));
        assert!((t.scores[0] - (ra + 0.95 * rb)).abs() < 1e-12);
        assert!((t.scores[1] - rb).abs() < 1e-12);
        assert!(t.converged);
    }

    #[test]
    fn shorter_dataset_decay_shrinks_dataset_traffic() {
        let g = graph(
            &[("p", NodeKind::Publication, 2000), ("d", NodeKind::Dataset, 2000)],
            &[],
            2012,
        );
        let p = RankParams {
            tau_pub: 20.0,
            tau_dataset: 5.0,
            ..RankParams::default()
        };
        let t = datarank(&g, &p).unwrap();
        assert!(t.scores[1] < t.scores[0]);
    }

    #[test]
    fn fb_first_order_terms_on_chain() {
        let g = graph(
            &[("A", NodeKind::Publication, 2012), ("B", NodeKind::Publication, 2012)],
            &[("B", "A")],
            2012,
        );
        let p = RankParams {
            alpha: 0.3,
            beta: 0.1,
            ..tight()
        };
        let t = datarank_fb(&g, &p).unwrap();
        // rho = (0.5, 0.5). A gains (1 - alpha) rho_B forward, B gains beta rho_A backward.
        // W and M are nilpotent here, so the series stops after one step.
        assert!((t.scores[0] - (0.5 + 0.7 * 0.5)).abs() < 1e-15);
        assert!((t.scores[1] - (0.5 + 0.1 * 0.5)).abs() < 1e-15);
    }

    #[test]
    fn fb_with_zero_beta_is_datarank() {
        let g = graph(
            &[
                ("A", NodeKind::Publication, 2001),
                ("B", NodeKind::Publication, 2005),
                ("C", NodeKind::Publication, 2010),
                ("D", NodeKind::Dataset, 1999),
            ],
            &[("B", "A"), ("C", "A"), ("C", "B"), ("B", "D"), ("A", "D")],
            2012,
        );
        let p = RankParams {
            tau_pub: 8.0,
            tau_dataset: 3.0,
            beta: 0.0,
            ..RankParams::default()
        };
        let fb = datarank_fb_with(&g, &p, BetaCheck::AllowZero).unwrap();
        let dr = datarank(&g, &p).unwrap();
        assert_eq!(fb.scores, dr.scores);
        assert_eq!(fb.iterations_used, dr.iterations_used);
        assert!(matches!(datarank_fb(&g, &p), Err(RankError::InvalidParams(_))));
    }

    #[test]
    fn raw_mode_keeps_exponentials() {
        let g = graph(
            &[("a", NodeKind::Publication, 2012), ("b", NodeKind::Publication, 2002)],
            &[],
            2012,
        );
        let p = RankParams {
            normalize_rho: false,
            tau_pub: 10.0,
            ..RankParams::default()
        };
        let t = network_flow(&g, &p).unwrap();
        assert_eq!(t.scores[0], 1.0);
        assert!((t.scores[1] - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn underflowing_weights_are_reported() {
        let g = graph(&[("a", NodeKind::Publication, 1000)], &[], 3000);
        let p = RankParams {
            tau_pub: 1.0,
            ..RankParams::default()
        };
        assert_eq!(network_flow(&g, &p), Err(RankError::NonFinite { iteration: 0 }));
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let g = graph(
            &[
                ("a", NodeKind::Publication, 2012),
                ("b", NodeKind::Publication, 2012),
                ("c", NodeKind::Publication, 2012),
            ],
            &[("c", "b"), ("b", "a")],
            2012,
        );
        let p = RankParams {
            max_iters: 1,
            tolerance: 1e-12,
            ..RankParams::default()
        };
        let t = network_flow(&g, &p).unwrap();
        assert_eq!(t.iterations_used, 1);
        assert!(!t.converged);
    }
}
