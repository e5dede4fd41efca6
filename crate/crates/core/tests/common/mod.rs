//! Random citation DAGs and dense brute-force oracles.
//!
//! The oracles work from the raw generated records, not from a built
//! `CitationGraph`: they assign their own indices, deduplicate edges with a
//! set, and evaluate every formula with explicit dense matrices.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeSet, HashMap};

use datarank_core::{NodeKind, NodeRecord};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[derive(Debug, Clone)]
pub struct RawGraph {
    pub nodes: Vec<NodeRecord>,
    pub edges: Vec<(String, String)>,
    pub reference_year: i32,
}

impl RawGraph {
    pub fn edge_refs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn build(&self) -> datarank_core::CitationGraph {
        datarank_core::build_graph(&self.nodes, self.edge_refs(), Some(self.reference_year)).unwrap()
    }
}

/// Random DAG with `2..=max_nodes` nodes. Node `j` may only cite nodes with a
/// smaller generation index, and datasets never cite. Some edges are
/// emitted twice to exercise deduplication.
pub fn random_dag(seed: u64, max_nodes: usize) -> RawGraph {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_nodes);
    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        let kind = if rng.random_bool(0.3) {
            NodeKind::Dataset
        } else {
            NodeKind::Publication
        };
        let year = rng.random_range(1985..=2012);
        let prefix = if kind == NodeKind::Dataset { "D" } else { "P" };
        nodes.push(NodeRecord::new(format!("{prefix}{i}"), kind, year));
    }
    // Make sure both kinds are present.
    nodes[0].kind = NodeKind::Dataset;
    nodes[0].external_id = "D0".into();
    if n > 1 {
        nodes[n - 1].kind = NodeKind::Publication;
        nodes[n - 1].external_id = format!("P{}", n - 1);
    }
    let density: f64 = rng.random_range(0.05..0.5);
    let mut edges = Vec::new();
    for j in 1..n {
        if nodes[j].kind == NodeKind::Dataset {
            continue;
        }
        for i in 0..j {
            if rng.random_bool(density) {
                edges.push((nodes[j].external_id.clone(), nodes[i].external_id.clone()));
                if rng.random_bool(0.05) {
                    edges.push((nodes[j].external_id.clone(), nodes[i].external_id.clone()));
                }
            }
        }
    }
    RawGraph {
        nodes,
        edges,
        reference_year: 2012,
    }
}

/// Dense view of a raw graph in generation order.
pub struct Dense {
    pub n: usize,
    pub ids: Vec<String>,
    pub kinds: Vec<NodeKind>,
    pub ages: Vec<f64>,
    /// `adj[j][i]` is true when `j` cites `i`.
    pub adj: Vec<Vec<bool>>,
}

impl Dense {
    pub fn new(raw: &RawGraph) -> Self {
        let n = raw.nodes.len();
        let index: HashMap<&str, usize> = raw
            .nodes
            .iter()
            .enumerate()
            .map(|(i, r)| (r.external_id.as_str(), i))
            .collect();
        let set: BTreeSet<(usize, usize)> = raw
            .edges
            .iter()
            .map(|(a, b)| (index[a.as_str()], index[b.as_str()]))
            .filter(|(a, b)| a != b)
            .collect();
        let mut adj = vec![vec![false; n]; n];
        for (j, i) in set {
            adj[j][i] = true;
        }
        Self {
            n,
            ids: raw.nodes.iter().map(|r| r.external_id.clone()).collect(),
            kinds: raw.nodes.iter().map(|r| r.kind).collect(),
            ages: raw
                .nodes
                .iter()
                .map(|r| f64::from(raw.reference_year - r.year.unwrap()))
                .collect(),
            adj,
        }
    }

    pub fn out_degree(&self, j: usize) -> usize {
        self.adj[j].iter().filter(|&&x| x).count()
    }

    pub fn in_degree(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.adj[j][i]).count()
    }

    /// `W[i][j] = 1 / k_out(j)` if j cites i.
    pub fn w(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.n]; self.n];
        for j in 0..self.n {
            let k = self.out_degree(j);
            for i in 0..self.n {
                if self.adj[j][i] {
                    m[i][j] = 1.0 / k as f64;
                }
            }
        }
        m
    }

    /// `M[i][j] = 1 / k_in(j)` if j is cited by i.
    pub fn m(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.n]; self.n];
        for j in 0..self.n {
            let k = self.in_degree(j);
            for i in 0..self.n {
                if self.adj[i][j] {
                    m[i][j] = 1.0 / k as f64;
                }
            }
        }
        m
    }

    pub fn rho(&self, tau_pub: f64, tau_dataset: f64, heterogeneous: bool) -> Vec<f64> {
        let raw: Vec<f64> = (0..self.n)
            .map(|i| {
                let tau = if heterogeneous && self.kinds[i] == NodeKind::Dataset {
                    tau_dataset
                } else {
                    tau_pub
                };
                (-self.ages[i] / tau).exp()
            })
            .collect();
        let s: f64 = raw.iter().sum();
        raw.iter().map(|x| x / s).collect()
    }
}

pub fn matvec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// `sum_{k=0}^{terms} (factor M)^k v`, explicit powers.
pub fn geometric_series(m: &[Vec<f64>], factor: f64, v: &[f64], terms: usize) -> Vec<f64> {
    let mut total = v.to_vec();
    let mut power = v.to_vec();
    for _ in 1..=terms {
        power = matvec(m, &power).into_iter().map(|x| x * factor).collect();
        for (t, p) in total.iter_mut().zip(&power) {
            *t += p;
        }
    }
    total
}

pub const SERIES_TERMS: usize = 1000;

/// Forward-only flow series.
pub fn flow_oracle(d: &Dense, tau_pub: f64, tau_dataset: f64, heterogeneous: bool, alpha: f64) -> Vec<f64> {
    let rho = d.rho(tau_pub, tau_dataset, heterogeneous);
    geometric_series(&d.w(), 1.0 - alpha, &rho, SERIES_TERMS)
}

/// Forward plus backward series; `rho` counted once.
pub fn fb_oracle(d: &Dense, tau_pub: f64, tau_dataset: f64, alpha: f64, beta: f64) -> Vec<f64> {
    let rho = d.rho(tau_pub, tau_dataset, true);
    let f = geometric_series(&d.w(), 1.0 - alpha, &rho, SERIES_TERMS);
    let b = geometric_series(&d.m(), beta, &rho, SERIES_TERMS);
    f.iter().zip(&b).zip(&rho).map(|((x, y), r)| x + y - r).collect()
}

/// Dense fixed-point iteration of `x = c + A x` where `A` holds per-citer
/// damping over out-degree plus uniform dangling redistribution.
fn dense_fixed_point(d: &Dense, constant: f64, damping: impl Fn(NodeKind) -> f64) -> Vec<f64> {
    let n = d.n;
    let mut a = vec![vec![0.0; n]; n];
    for j in 0..n {
        let k = d.out_degree(j);
        let dj = damping(d.kinds[j]);
        for i in 0..n {
            a[i][j] = if k == 0 {
                dj / n as f64
            } else if d.adj[j][i] {
                dj / k as f64
            } else {
                0.0
            };
        }
    }
    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..20_000 {
        let next: Vec<f64> = matvec(&a, &x).into_iter().map(|v| v + constant).collect();
        let diff: f64 = next.iter().zip(&x).map(|(p, q)| (p - q).abs()).sum();
        x = next;
        if diff < 5e-15 {
            break;
        }
    }
    x
}

pub fn pagerank_oracle(d: &Dense, damping: f64) -> Vec<f64> {
    dense_fixed_point(d, (1.0 - damping) / d.n as f64, |_| damping)
}

pub fn modified_pagerank_oracle(d: &Dense, d_data: f64, d_pub: f64) -> Vec<f64> {
    let n_data = d.kinds.iter().filter(|k| **k == NodeKind::Dataset).count() as f64;
    let n_pub = d.n as f64 - n_data;
    let c = (1.0 - d_data) / n_data + (1.0 - d_pub) / n_pub;
    dense_fixed_point(d, c, |k| match k {
        NodeKind::Dataset => d_data,
        NodeKind::Publication => d_pub,
    })
}

/// Largest elementwise gap between graph-indexed `scores` and
/// generation-indexed `oracle`.
pub fn max_gap(graph: &datarank_core::CitationGraph, scores: &[f64], dense: &Dense, oracle: &[f64]) -> f64 {
    dense
        .ids
        .iter()
        .enumerate()
        .map(|(k, id)| (scores[graph.index_of(id).unwrap()] - oracle[k]).abs())
        .fold(0.0, f64::max)
}

/// Parameters drawn from the valid region of every algorithm.
pub fn random_params(seed: u64) -> datarank_core::RankParams {
    let mut rng = StdRng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let alpha = rng.random_range(0.05..0.5);
    datarank_core::RankParams {
        tau_pub: rng.random_range(1.0..100.0),
        tau_dataset: rng.random_range(1.0..100.0),
        alpha,
        beta: rng.random_range(0.001..alpha * 0.95),
        d: rng.random_range(0.5..0.95),
        d_data: rng.random_range(0.5..0.95),
        d_pub: rng.random_range(0.5..0.95),
        max_iters: 10_000,
        tolerance: 1e-13,
        normalize_rho: true,
    }
}

/// Pearson by the single-pass computational formula.
pub fn naive_pearson(pairs: &[(f64, f64)]) -> f64 {
    let n = pairs.len() as f64;
    let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y) in pairs {
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

/// Rank of each value by counting: 1 + #smaller + (#equal - 1) / 2.
pub fn naive_ranks(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .map(|v| {
            let less = values.iter().filter(|w| *w < v).count() as f64;
            let equal = values.iter().filter(|w| *w == v).count() as f64;
            1.0 + less + (equal - 1.0) / 2.0
        })
        .collect()
}

pub fn naive_spearman(pairs: &[(f64, f64)]) -> f64 {
    let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let rx = naive_ranks(&xs);
    let ry = naive_ranks(&ys);
    let ranked: Vec<(f64, f64)> = rx.into_iter().zip(ry).collect();
    naive_pearson(&ranked)
}
