pub mod build;
pub mod extract;
pub mod grid;
pub mod rank;
pub mod stats;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use clap::Args;
use datarank::manifest::{manifest_path, RunManifest};
use datarank::snapshot::load_snapshot;
use datarank_core::{CitationGraph, RankParams};

use crate::config::ParamConfig;

/// Ranking parameters; unset flags fall back to the config file, then to
/// the built-in defaults.
#[derive(Args, Debug, Clone, Default)]
pub struct ParamArgs {
    /// Publication decay time in years.
    #[arg(long)]
    pub tau_pub: Option<f64>,
    /// Dataset decay time in years.
    #[arg(long)]
    pub tau_dataset: Option<f64>,
    /// Stop probability of the flow walkers.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Backward-step probability (datarank-fb).
    #[arg(long)]
    pub beta: Option<f64>,
    /// PageRank damping.
    #[arg(long)]
    pub d: Option<f64>,
    /// Modified PageRank damping for dataset citers.
    #[arg(long)]
    pub d_data: Option<f64>,
    /// Modified PageRank damping for publication citers.
    #[arg(long)]
    pub d_pub: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// L1 change below which iteration stops.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Use unnormalized exp(-age/tau) start weights.
    #[arg(long)]
    pub raw_rho: bool,
}

impl ParamArgs {
    pub fn resolve(&self, config: &ParamConfig) -> RankParams {
        let d = RankParams::default();
        RankParams {
            tau_pub: self.tau_pub.or(config.tau_pub).unwrap_or(d.tau_pub),
            tau_dataset: self.tau_dataset.or(config.tau_dataset).unwrap_or(d.tau_dataset),
            alpha: self.alpha.or(config.alpha).unwrap_or(d.alpha),
            beta: self.beta.or(config.beta).unwrap_or(d.beta),
            d: self.d.or(config.d).unwrap_or(d.d),
            d_data: self.d_data.or(config.d_data).unwrap_or(d.d_data),
            d_pub: self.d_pub.or(config.d_pub).unwrap_or(d.d_pub),
            max_iters: self.max_iters.or(config.max_iters).unwrap_or(d.max_iters),
            tolerance: self.tolerance.or(config.tolerance).unwrap_or(d.tolerance),
            normalize_rho: if self.raw_rho {
                false
            } else {
                config.normalize_rho.unwrap_or(d.normalize_rho)
            },
        }
    }
}

pub fn record_params(m: &mut RunManifest, p: &RankParams) {
    m.param("tau_pub", p.tau_pub);
    m.param("tau_dataset", p.tau_dataset);
    m.param("alpha", p.alpha);
    m.param("beta", p.beta);
    m.param("d", p.d);
    m.param("d_data", p.d_data);
    m.param("d_pub", p.d_pub);
    m.param("max_iters", p.max_iters);
    m.param("tolerance", p.tolerance);
    m.param("normalize_rho", p.normalize_rho);
}

pub fn open_snapshot(path: &Path) -> anyhow::Result<(CitationGraph, String)> {
    load_snapshot(path).with_context(|| format!("loading snapshot {}", path.display()))
}

pub fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

pub fn write_with(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> anyhow::Result<()> {
    let mut w = create(path)?;
    f(&mut w)
        .and_then(|_| w.flush())
        .with_context(|| format!("writing {}", path.display()))
}

/// `<output>.<suffix>` unless an explicit path was given.
pub fn sidecar(explicit: Option<PathBuf>, output: &Path, suffix: &str) -> PathBuf {
    explicit.unwrap_or_else(|| {
        let mut name = output.file_name().map(|n| n.to_os_string()).unwrap_or_default();
        name.push(suffix);
        output.with_file_name(name)
    })
}

/// Stamps the wall time and writes the manifest beside `primary`.
pub fn finish_manifest(mut m: RunManifest, started: Instant, primary: &Path) -> anyhow::Result<()> {
    m.wall_time_seconds = started.elapsed().as_secs_f64();
    let path = manifest_path(primary);
    m.write(&path).with_context(|| format!("writing {}", path.display()))
}
