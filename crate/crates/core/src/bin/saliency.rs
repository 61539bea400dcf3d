//! Command-line front end: `detect`, `eval`, `ablate` and `synth`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use graphsal::batch::{self, DetectOptions};
use graphsal::evaluation::write_report;
use graphsal::{Error, PipelineConfig};

#[derive(Parser, Debug)]
#[command(name = "saliency", version, about = "Graph-based salient object detection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute saliency maps for an image or a directory of images.
    Detect {
        #[arg(long)]
        input: PathBuf,
        /// Output directory, or a `.png` path when the input is one file.
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override a configuration key, e.g. `--set kappa=2`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Directory of `<stem>.png` edge maps replacing the built-in Sobel map.
        #[arg(long)]
        edge_maps: Option<PathBuf>,
        /// Directory of `<stem>.png` objectness maps.
        #[arg(long)]
        objectness: Option<PathBuf>,
        /// Also write every intermediate map and per-superpixel tables.
        #[arg(long)]
        dump_stages: bool,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Score saliency maps against ground-truth masks.
    Eval {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        gt: PathBuf,
        /// Per-image CSV; curves and summary are written next to it.
        #[arg(long)]
        report: PathBuf,
    },
    /// Evaluate configuration variants over a manifest.
    Ablate {
        #[arg(long)]
        manifest: PathBuf,
        /// `name:key=val,key=val;name2:...`
        #[arg(long)]
        variants: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Write the synthetic test corpus with ground truth and a manifest.
    Synth {
        #[arg(long)]
        out: PathBuf,
    },
}

/// Failure classes mapped to exit codes.
enum Failure {
    /// Bad configuration, missing input, no pairs, empty variant grid.
    Usage(anyhow::Error),
    /// Every image failed.
    AllFailed(anyhow::Error),
    Other(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::InvalidParameter { .. } | Error::Dataset(_) | Error::Io { .. } => {
                Failure::Usage(e.into())
            }
            other => Failure::Other(other.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

fn load_config(path: Option<&Path>, overrides: &[String]) -> Result<PipelineConfig, Failure> {
    let mut cfg = match path {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    for kv in overrides {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got '{kv}'")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Detect {
            input,
            output,
            config,
            overrides,
            edge_maps,
            objectness,
            dump_stages,
            jobs,
        } => {
            let cfg = load_config(config.as_deref(), &overrides)?;
            let inputs = batch::collect_inputs(&input)?;
            let opts = DetectOptions {
                edge_dir: edge_maps,
                objectness_dir: objectness,
                dump_stages,
                jobs,
            };
            let summary = batch::detect(&inputs, &output, &cfg, &opts)?;
            for (path, err) in &summary.failed {
                eprintln!("warning: {}: {err}", path.display());
            }
            if summary.written.is_empty() {
                return Err(Failure::AllFailed(anyhow::anyhow!(
                    "all {} images failed",
                    summary.failed.len()
                )));
            }
            log::info!(
                "wrote {} saliency maps ({} failed)",
                summary.written.len(),
                summary.failed.len()
            );
        }
        Command::Eval { pred, gt, report } => {
            let r = batch::evaluate_dirs(&pred, &gt)?;
            if let Some(dir) = report.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)
                    .with_context(|| format!("creating {}", dir.display()))?;
            }
            write_report(&report, &r)?;
            let a = &r.aggregates;
            println!(
                "images={} meanMaxF={:.4} meanMAE={:.4} meanAUC={:.4}",
                a.image_count, a.mean_max_f, a.mean_mae, a.mean_auc
            );
        }
        Command::Ablate {
            manifest,
            variants,
            out,
            config,
            jobs,
        } => {
            let base = load_config(config.as_deref(), &[])?;
            let variants = batch::parse_variants(&variants)?;
            let entries = batch::read_manifest(&manifest)?;
            let threads = if jobs == 0 {
                std::thread::available_parallelism().map_or(1, |n| n.get())
            } else {
                jobs
            };
            let rows = graphsal::par::with_threads(threads, || {
                batch::ablate(&entries, &variants, &base, &out)
            })?;
            for (name, a) in rows {
                println!(
                    "{name}: meanMaxF={:.4} meanMAE={:.4} meanAUC={:.4}",
                    a.mean_max_f, a.mean_mae, a.mean_auc
                );
            }
        }
        Command::Synth { out } => {
            graphsal::synth::write_corpus(&out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::AllFailed(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
