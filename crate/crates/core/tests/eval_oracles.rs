mod common;

use common::*;
use datarank_core::eval::{correlation, fit_power_law, grid_search, GridSpec, UsageKind, UsageTable};
use datarank_core::{build_graph, Algorithm, CitationGraph, NodeKind, NodeRecord, RankParams};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Zeta};

#[test]
fn correlations_match_naive_formulas() {
    let mut rng = StdRng::seed_from_u64(7);
    for trial in 0..200 {
        let n = rng.random_range(3..60);
        let pairs: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                // Coarse values force ties into the rank computation.
                let x = f64::from(rng.random_range(0..12u32));
                let y = x * 0.5 + rng.random_range(-4.0..4.0);
                (x, y)
            })
            .collect();
        let Ok(c) = correlation(&pairs) else { continue };
        let p = naive_pearson(&pairs);
        let s = naive_spearman(&pairs);
        assert!((c.pearson - p).abs() < 1e-12, "trial {trial}: {} vs {p}", c.pearson);
        assert!((c.spearman - s).abs() < 1e-12, "trial {trial}: {} vs {s}", c.spearman);
    }
}

fn zeta_sample(k: f64, n: usize, seed: u64) -> Vec<f64> {
    let dist = Zeta::new(k).unwrap();
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n).map(|_| dist.sample(&mut rng)).collect()
}

#[test]
fn power_law_exponents_are_recovered() {
    for k in [2.16, 4.1] {
        for seed in 0..5 {
            let fit = fit_power_law(&zeta_sample(k, 100_000, seed), 25).unwrap();
            assert!((fit.exponent - k).abs() <= 0.15, "k={k} seed={seed}: {}", fit.exponent);
        }
    }
}

/// Random graph of `n` nodes where a third are datasets, with citations
/// pointing back in time.
pub fn planted_graph(n: usize, seed: u64) -> CitationGraph {
    let mut rng = StdRng::seed_from_u64(seed);
    let nodes: Vec<NodeRecord> = (0..n)
        .map(|i| {
            let kind = if i % 3 == 0 {
                NodeKind::Dataset
            } else {
                NodeKind::Publication
            };
            let year = 1980 + (i * 32 / n) as i32;
            NodeRecord::new(format!("n{i}"), kind, year)
        })
        .collect();
    let mut edges = Vec::new();
    for j in 1..n {
        if nodes[j].kind == NodeKind::Dataset {
            continue;
        }
        for _ in 0..rng.random_range(1..8) {
            let i = rng.random_range(0..j);
            edges.push((nodes[j].external_id.clone(), nodes[i].external_id.clone()));
        }
    }
    build_graph(&nodes, edges.iter().map(|(a, b)| (a.as_str(), b.as_str())), Some(2012)).unwrap()
}

#[test]
fn planted_cell_is_recovered() {
    let g = planted_graph(500, 11);
    let truth = RankParams {
        tau_pub: 10.0,
        tau_dataset: 5.0,
        alpha: 0.05,
        ..RankParams::default()
    };
    let scores = Algorithm::DataRank.run(&g, &truth).unwrap().scores;
    let mut usage = UsageTable::new(UsageKind::Visits);
    for i in (0..g.n_nodes()).filter(|&i| g.kind(i) == NodeKind::Dataset) {
        usage
            .insert(g.external_id(i), (scores[i] * 1e12).round() as u64)
            .unwrap();
    }
    let spec = GridSpec::standard(Algorithm::DataRank);
    let result = grid_search(&g, &spec, &usage).unwrap();
    let best = result.best_row().unwrap();
    assert_eq!(
        (best.params.tau_pub, best.params.tau_dataset, best.params.alpha),
        (10.0, 5.0, 0.05)
    );
    assert!(best.pearson.unwrap() >= 0.999);
}
