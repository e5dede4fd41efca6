use std::path::PathBuf;
use std::time::Instant;

use anyhow::bail;
use clap::Args;
use datarank::manifest::RunManifest;
use datarank::stats::{compute_stats, write_histograms, write_summary, DEFAULT_BINS};

use super::{finish_manifest, open_snapshot, sidecar, write_with};

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[arg(long)]
    snapshot: PathBuf,
    /// Log-spaced bins per histogram.
    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,
    /// Summary file: `metric,value`.
    #[arg(long)]
    out: PathBuf,
    /// Histogram file; defaults to `<out>.histograms.csv`.
    #[arg(long)]
    histograms: Option<PathBuf>,
}

pub fn run(args: StatsArgs) -> anyhow::Result<()> {
    let started = Instant::now();
    if args.bins == 0 {
        bail!("--bins must be positive");
    }
    let (graph, fingerprint) = open_snapshot(&args.snapshot)?;
    if graph.is_empty() {
        bail!("snapshot {} has no nodes", args.snapshot.display());
    }
    let report = compute_stats(&graph, args.bins);
    let hist = sidecar(args.histograms, &args.out, ".histograms.csv");
    write_with(&args.out, |w| write_summary(&report, w))?;
    write_with(&hist, |w| write_histograms(&report, w))?;

    let mut m = RunManifest::new("stats");
    m.input(&args.snapshot);
    m.output(&args.out);
    m.output(&hist);
    m.param("bins", args.bins);
    m.graph_fingerprint = Some(fingerprint);
    for d in &report.distributions {
        let value = match &d.fit {
            Ok(f) => serde_json::json!({"exponent": f.exponent, "standard_error": f.standard_error}),
            Err(e) => serde_json::json!({"error": e.to_string()}),
        };
        m.result(d.name, value);
    }
    finish_manifest(m, started, &args.out)
}
