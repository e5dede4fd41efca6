//! Sparse push kernels.
//!
//! Both kernels are written in pull form: each destination sums over its own
//! sorted neighbour list, so a destination is owned by exactly one worker and
//! its sum has a fixed order.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::CitationGraph;
use crate::par;

/// `W v`: every node with out-degree `k > 0` sends `v_j / k` to each node it
/// cites. Nodes with out-degree zero send nothing.
pub fn forward_push(graph: &CitationGraph, v: &[f64]) -> Vec<f64> {
    let n = graph.n_nodes();
    assert_eq!(v.len(), n, "vector length must equal node count");
    let mut scratch = vec![0.0; n];
    let mut out = vec![0.0; n];
    forward_push_into(graph, v, 1.0, &mut scratch, &mut out);
    out
}

/// `M v`: every node with in-degree `k > 0` sends `v_j / k` to each node
/// citing it. Uncited nodes send nothing.
pub fn backward_push(graph: &CitationGraph, v: &[f64]) -> Vec<f64> {
    let n = graph.n_nodes();
    assert_eq!(v.len(), n, "vector length must equal node count");
    let mut scratch = vec![0.0; n];
    let mut out = vec![0.0; n];
    backward_push_into(graph, v, 1.0, &mut scratch, &mut out);
    out
}

/// `out = factor * W v`.
pub(crate) fn forward_push_into(graph: &CitationGraph, v: &[f64], factor: f64, scratch: &mut [f64], out: &mut [f64]) {
    par::fill(scratch, |j| match graph.out_degree(j) {
        0 => 0.0,
        k => v[j] / k as f64,
    });
    pull_citers(graph, scratch, factor, out);
}

/// `out = factor * M v`.
pub(crate) fn backward_push_into(graph: &CitationGraph, v: &[f64], factor: f64, scratch: &mut [f64], out: &mut [f64]) {
    par::fill(scratch, |j| match graph.in_degree(j) {
        0 => 0.0,
        k => v[j] / k as f64,
    });
    let scratch = &*scratch;
    par::fill(out, |i| {
        let mut acc = 0.0;
        for &j in graph.cites(i) {
            acc += scratch[j as usize];
        }
        factor * acc
    });
}

/// `out[i] = factor * sum of sent[j] over nodes j citing i`.
pub(crate) fn pull_citers(graph: &CitationGraph, sent: &[f64], factor: f64, out: &mut [f64]) {
    par::fill(out, |i| {
        let mut acc = 0.0;
        for &j in graph.cited_by(i) {
            acc += sent[j as usize];
        }
        factor * acc
    });
}
