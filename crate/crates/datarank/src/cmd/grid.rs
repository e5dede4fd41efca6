use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::Context;
use clap::Args;
use datarank::export::{best_summary, write_grid};
use datarank::ingest::parse_usage_table;
use datarank::manifest::RunManifest;
use datarank_core::eval::{grid_search, CorrelationTarget, EvalError, GridSpec, STANDARD_ALPHAS, STANDARD_TAUS};
use datarank_core::Algorithm;

use super::build::UsageKindArg;
use super::{finish_manifest, open_snapshot, record_params, write_with, ParamArgs};
use crate::config::Config;

#[derive(Args, Debug)]
pub struct GridArgs {
    #[arg(long)]
    snapshot: PathBuf,
    /// Usage table: `external_id,count`.
    #[arg(long)]
    usage: PathBuf,
    #[arg(long, value_enum, default_value = "visits")]
    usage_kind: UsageKindArg,
    #[arg(long, default_value = "datarank")]
    algo: Algorithm,
    /// Search tau_pub and tau_dataset over 1,5,10,20,30,50,70,100 and alpha
    /// over 0.05,0.15 unless a list is given explicitly.
    #[arg(long)]
    standard_grid: bool,
    /// Comma-separated values.
    #[arg(long, value_delimiter = ',')]
    tau_pub_values: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    tau_dataset_values: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    alpha_values: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    beta_values: Option<Vec<f64>>,
    /// scores (raw usage), log-usage or ranks.
    #[arg(long)]
    target: Option<CorrelationTarget>,
    /// Base values for everything the axes do not cover.
    #[command(flatten)]
    params: ParamArgs,
    /// Grid export, one row per cell.
    #[arg(long)]
    out: PathBuf,
}

fn axis(flag: Option<Vec<f64>>, config: &Option<Vec<f64>>, standard: Option<&[f64]>, single: f64) -> Vec<f64> {
    flag.or_else(|| config.clone())
        .or_else(|| standard.map(<[f64]>::to_vec))
        .unwrap_or_else(|| vec![single])
}

pub fn run(args: GridArgs, config: &Config) -> anyhow::Result<()> {
    let started = Instant::now();
    let base = args.params.resolve(&config.params);
    let g = &config.grid;
    let std_taus = args.standard_grid.then_some(&STANDARD_TAUS[..]);
    let std_alphas = args.standard_grid.then_some(&STANDARD_ALPHAS[..]);
    let target = match (args.target, &g.target) {
        (Some(t), _) => t,
        (None, Some(s)) => s.parse().context("grid.target in config")?,
        (None, None) => CorrelationTarget::Scores,
    };
    let spec = GridSpec {
        algorithm: args.algo,
        tau_pub_values: axis(args.tau_pub_values, &g.tau_pub_values, std_taus, base.tau_pub),
        tau_dataset_values: axis(
            args.tau_dataset_values,
            &g.tau_dataset_values,
            std_taus,
            base.tau_dataset,
        ),
        alpha_values: axis(args.alpha_values, &g.alpha_values, std_alphas, base.alpha),
        beta_values: Some(axis(args.beta_values, &g.beta_values, None, base.beta)),
        base,
        target,
    };

    let (graph, fingerprint) = open_snapshot(&args.snapshot)?;
    let file = File::open(&args.usage).with_context(|| format!("opening {}", args.usage.display()))?;
    let usage = parse_usage_table(BufReader::new(file), args.usage_kind.into())
        .with_context(|| format!("reading {}", args.usage.display()))?;
    let result = grid_search(&graph, &spec, &usage).map_err(|e| match e {
        EvalError::EmptyIntersection {
            unmatched_usage,
            unmatched_datasets,
        } => anyhow::anyhow!(
            "no usage id matches a dataset in the graph: {} usage ids, {unmatched_usage} unmatched; {} datasets, \
             {unmatched_datasets} without usage",
            usage.len(),
            graph.count_kind(datarank_core::NodeKind::Dataset)
        ),
        other => other.into(),
    })?;
    write_with(&args.out, |w| write_grid(&result, w))?;
    let summary = best_summary(&result);
    println!("{summary}");

    let mut m = RunManifest::new("grid");
    m.input(&args.snapshot);
    m.input(&args.usage);
    m.output(&args.out);
    m.param("algorithm", args.algo.label());
    record_params(&mut m, &spec.base);
    m.param("tau_pub_values", spec.tau_pub_values.clone());
    m.param("tau_dataset_values", spec.tau_dataset_values.clone());
    m.param("alpha_values", spec.alpha_values.clone());
    m.param("beta_values", spec.beta_values.clone());
    m.param("target", format!("{target:?}").to_lowercase());
    m.param("usage_kind", usage.kind().to_string());
    m.graph_fingerprint = Some(fingerprint);
    m.result("cells", result.rows.len());
    m.result("failed_cells", result.rows.iter().filter(|r| !r.status.is_ok()).count());
    m.result("best", summary);
    m.result("unmatched_usage", result.unmatched_usage);
    m.result("datasets_without_usage", result.unmatched_datasets);
    finish_manifest(m, started, &args.out)
}
