mod commands;
mod config;
mod verify;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::commands::Emit;
use crate::config::ExperimentConfig;

#[derive(Parser)]
#[command(name = "melonlab", version, about = "Experiments on random melonic graphs and colored trees")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args)]
struct Common {
    /// JSON config file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Data file. The JSON summary goes next to it with a `.json` extension.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    dim: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Verb {
    /// Sample random trees in the one-line serialization.
    Sample {
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        count: Option<usize>,
        /// Sample simple melons instead of general trees.
        #[arg(long)]
        simple: bool,
    },
    /// Depth, tree depth and stack depth of words such as `0;10132120312`.
    Depth {
        words: Vec<String>,
        /// File with one word per line (default: standard input).
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Exact block constants plus a Monte Carlo estimate.
    Lemma2 {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        reps: Option<usize>,
    },
    /// Mean depth against tree size and the fitted exponent.
    Hausdorff {
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long)]
        reps: Option<usize>,
        /// `tree` or `ball`.
        #[arg(long)]
        metric: Option<String>,
    },
    /// Return probability of random walks and the spectral dimension.
    Spectral {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        t_max: Option<usize>,
        #[arg(long)]
        walkers: Option<usize>,
        #[arg(long)]
        graphs: Option<usize>,
        /// `general` or `simple`.
        #[arg(long)]
        ensemble: Option<String>,
        #[arg(long)]
        t_lo: Option<usize>,
        /// Fixes the upper window end instead of choosing it automatically.
        #[arg(long)]
        t_hi: Option<usize>,
    },
    /// Coefficients of a simple-melon generating function.
    Series {
        #[arg(long)]
        order: Option<usize>,
        /// `Hempty`, `H0`, `H00` or `H1`.
        #[arg(long)]
        target: Option<String>,
        /// Fit the singularity exponent.
        #[arg(long)]
        fit: bool,
    },
    /// Exact walk probabilities on the graph of a serialized tree.
    WalkExact {
        /// Tree file (default: standard input).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Which tree of the file to use.
        #[arg(long)]
        index: Option<usize>,
        #[arg(long)]
        t_max: Option<usize>,
        /// Use the closed graph instead of the open two-point graph.
        #[arg(long)]
        closed: bool,
        #[arg(long)]
        start: Option<usize>,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, conflicts_with = "full")]
        quick: bool,
        #[arg(long)]
        full: bool,
    },
}

impl Verb {
    fn name(&self) -> &'static str {
        match self {
            Verb::Sample { .. } => "sample",
            Verb::Depth { .. } => "depth",
            Verb::Lemma2 { .. } => "lemma2",
            Verb::Hausdorff { .. } => "hausdorff",
            Verb::Spectral { .. } => "spectral",
            Verb::Series { .. } => "series",
            Verb::WalkExact { .. } => "walk-exact",
            Verb::Verify { .. } => "verify",
        }
    }

    fn flags(&self) -> ExperimentConfig {
        let t = |b: bool| b.then_some(true);
        let mut c = ExperimentConfig::default();
        match self {
            Verb::Sample { size, count, simple } => {
                c.size = *size;
                c.count = *count;
                c.simple = t(*simple);
            }
            Verb::Depth { words, input } => {
                c.words = (!words.is_empty()).then(|| words.clone());
                c.input = input.clone();
            }
            Verb::Lemma2 { n, reps } => {
                c.n = *n;
                c.reps = *reps;
            }
            Verb::Hausdorff { sizes, reps, metric } => {
                c.sizes = sizes.clone();
                c.reps = *reps;
                c.metric = metric.clone();
            }
            Verb::Spectral { n, t_max, walkers, graphs, ensemble, t_lo, t_hi } => {
                c.n = *n;
                c.t_max = *t_max;
                c.walkers = *walkers;
                c.graphs = *graphs;
                c.ensemble = ensemble.clone();
                c.t_lo = *t_lo;
                c.t_hi = *t_hi;
            }
            Verb::Series { order, target, fit } => {
                c.order = *order;
                c.target = target.clone();
                c.fit = t(*fit);
            }
            Verb::WalkExact { input, index, t_max, closed, start } => {
                c.input = input.clone();
                c.index = *index;
                c.t_max = *t_max;
                c.closed = t(*closed);
                c.start = *start;
            }
            Verb::Verify { .. } => {}
        }
        c
    }
}

enum Failure {
    Usage(anyhow::Error),
    Verify,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn apply_thread_cap() -> Result<()> {
    if let Ok(v) = std::env::var("MELONLAB_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("MELONLAB_THREADS={v:?} is not a count"))?;
        melonlab_core::par::set_thread_cap(n)?;
    }
    Ok(())
}

fn write_outputs(cfg: &ExperimentConfig, emit: &Emit) -> Result<()> {
    let mut body = format!("# config: {}\n", cfg.to_json());
    for l in &emit.lines {
        body.push_str(l);
        body.push('\n');
    }
    let summary = json!({ "config": cfg, "result": emit.summary });
    let summary = serde_json::to_string_pretty(&summary)?;
    match &cfg.out {
        Some(path) => {
            fs::write(path, &body).with_context(|| format!("writing {}", path.display()))?;
            let json_path = path.with_extension("json");
            fs::write(&json_path, format!("{summary}\n"))
                .with_context(|| format!("writing {}", json_path.display()))?;
            println!("{summary}");
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            // keep stdout a valid commented CSV
            writeln!(out, "# summary: {}", serde_json::to_string(&emit.summary)?)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let common = &cli.common;
    apply_thread_cap()?;
    let base = match &common.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    let mut flags = cli.verb.flags();
    flags.verb = Some(cli.verb.name().to_string());
    flags.dim = common.dim;
    flags.seed = common.seed;
    flags.out = common.out.clone();
    let mut cfg = base.overlay(&flags);
    let emit = match &cli.verb {
        Verb::Sample { .. } => commands::sample(&mut cfg)?,
        Verb::Depth { .. } => commands::depth(&mut cfg)?,
        Verb::Lemma2 { .. } => commands::lemma2(&mut cfg)?,
        Verb::Hausdorff { .. } => commands::hausdorff(&mut cfg)?,
        Verb::Spectral { .. } => commands::spectral(&mut cfg)?,
        Verb::Series { .. } => commands::series(&mut cfg)?,
        Verb::WalkExact { .. } => commands::walk_exact(&mut cfg)?,
        Verb::Verify { full, .. } => return run_verify(*full),
    };
    write_outputs(&cfg, &emit)?;
    Ok(())
}

fn run_verify(full: bool) -> Result<(), Failure> {
    let results = verify::run(full);
    let mut failed = 0;
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("{status} {}: {}", r.name, r.detail);
        failed += usize::from(!r.passed);
    }
    println!("{} of {} checks passed", results.len() - failed, results.len());
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Verify) => ExitCode::from(2),
    }
}
