//! Config, artifacts and the `run` entry point.
//!
//! `run` loads a config, runs every sweep point, renders all CSV, SVG and
//! log output in memory, and only then writes it to the output directory.

pub mod config;
pub mod output;
pub mod plots;

use std::collections::HashSet;
use std::path::Path;
use std::time::Instant;

use log::info;

pub use config::{HpbwTarget, Overrides, PatternSpec, SimConfig};
pub use output::{PointArtifact, RunArtifacts};

use crate::error::Result;
use crate::montecarlo::MonteCarlo;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub overrides: Overrides,
    pub no_plots: bool,
}

/// Loads `config_path`, applies overrides, simulates and writes artifacts.
pub fn run(config_path: impl AsRef<Path>, opts: &RunOptions) -> Result<RunArtifacts> {
    let mut cfg = SimConfig::load(config_path)?;
    cfg.apply(&opts.overrides)?;
    run_config(&cfg, !opts.no_plots)
}

/// Simulates every sweep point without touching the file system.
pub fn simulate(cfg: &SimConfig) -> Result<RunArtifacts> {
    let profile = cfg.load_profile()?;
    let config_hash = cfg.hash()?;
    let mc = MonteCarlo::new(profile, cfg.generation.clone(), cfg.eps_theta, cfg.eps_phi, cfg.runs, cfg.seed)?
        .with_jobs(cfg.jobs);
    let specs = cfg.points()?;
    info!("{} sweep point(s) x {} run(s), config {}", specs.len(), cfg.runs, &config_hash[..12]);

    let mut seen = HashSet::new();
    let mut points = Vec::with_capacity(specs.len());
    for (k, spec) in specs.iter().enumerate() {
        let start = Instant::now();
        let result = mc.run_point(k as u64, spec)?;
        let mut tag = output::point_tag(&result.omega);
        if !seen.insert(tag.clone()) {
            tag = format!("{tag}_{k}");
        }
        info!(
            "{tag}: sigma_theta={:.3} sigma_phi={:.3} ({:.1}s)",
            result.aor.sigma_theta,
            result.aor.sigma_phi,
            start.elapsed().as_secs_f64()
        );
        points.push(PointArtifact { tag, result });
    }
    Ok(RunArtifacts {
        config_hash,
        seed: cfg.seed,
        runs: cfg.runs,
        points,
        log: String::new(),
        files: Vec::new(),
    })
}

/// Inserts `<!-- config_hash=... -->` right after the opening `<svg>` tag.
fn with_hash_comment(svg: &str, hash: &str) -> String {
    let at = svg.find('>').map_or(0, |i| i + 1);
    format!("{}\n<!-- config_hash={hash} -->{}", &svg[..at], &svg[at..])
}

/// [`simulate`], then write CSVs, optional SVG figures and the run log.
pub fn run_config(cfg: &SimConfig, plots: bool) -> Result<RunArtifacts> {
    let mut a = simulate(cfg)?;
    let mut files: Vec<(String, Vec<u8>)> =
        output::render_csvs(&a).into_iter().map(|(n, s)| (n, s.into_bytes())).collect();
    if plots {
        for fig in plots::figures(&a) {
            let svg = plots::render_svg(&fig)?;
            files.push((format!("{}.svg", fig.name), with_hash_comment(&svg, &a.config_hash).into_bytes()));
        }
    }
    a.log = output::run_log(&a);
    files.push((output::LOG_FILE.into(), a.log.clone().into_bytes()));
    a.files = output::write_all(&cfg.output_dir, &files)?;
    info!("wrote {} file(s) to {}", a.files.len(), cfg.output_dir.display());
    Ok(a)
}
