use std::path::PathBuf;
use std::time::Instant;

use anyhow::Context;
use clap::Args;
use datarank::export::write_scores;
use datarank::manifest::RunManifest;
use datarank_core::{Algorithm, RankError};
use log::warn;

use super::{finish_manifest, open_snapshot, record_params, write_with, ParamArgs};
use crate::config::Config;

#[derive(Args, Debug)]
pub struct RankArgs {
    #[arg(long)]
    snapshot: PathBuf,
    /// networkflow, datarank, datarank-fb, pagerank or modified-pagerank.
    #[arg(long, default_value = "datarank")]
    algo: Algorithm,
    #[command(flatten)]
    params: ParamArgs,
    /// Scores file: `external_id,score,rank_position`.
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: RankArgs, config: &Config) -> anyhow::Result<()> {
    let started = Instant::now();
    let params = args.params.resolve(&config.params);
    let (graph, fingerprint) = open_snapshot(&args.snapshot)?;
    let ranks = match args.algo.run(&graph, &params) {
        Ok(r) => r,
        Err(e @ RankError::NonFinite { .. }) => {
            return Err(e).with_context(|| {
                format!(
                    "{} on {} nodes / {} edges with {params:?}",
                    args.algo,
                    graph.n_nodes(),
                    graph.n_edges()
                )
            });
        }
        Err(e) => return Err(e).with_context(|| format!("running {}", args.algo)),
    };
    if !ranks.converged {
        warn!(
            "{} did not converge within {} iterations (tolerance {})",
            args.algo, params.max_iters, params.tolerance
        );
    }
    write_with(&args.out, |w| write_scores(&graph, &ranks, w))?;

    let mut m = RunManifest::new("rank");
    m.input(&args.snapshot);
    m.output(&args.out);
    m.param("algorithm", args.algo.label());
    record_params(&mut m, &params);
    m.graph_fingerprint = Some(fingerprint);
    m.result("converged", ranks.converged);
    m.result("iterations_used", ranks.iterations_used);
    m.result("score_total", ranks.total());
    finish_manifest(m, started, &args.out)
}
