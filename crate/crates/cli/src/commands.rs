use std::io::Read;

use anyhow::{bail, Context, Result};
use melonlab_core::coverage::{lambda_delta, mc_lambda_ratio, mean_block_length, sample_depths, Metric};
use melonlab_core::depth::{depth_via_array, stack_depth};
use melonlab_core::sampler::{sample_simple_melon, sample_uniform_tree};
use melonlab_core::series_lab::{fit_singularity, z0, Target};
use melonlab_core::walk::{
    estimate_spectral_dimension, estimate_spectral_dimension_auto, exact_walk_distribution, simulate_return_curve,
    Ensemble, SpectralConfig, WalkConfig,
};
use melonlab_core::{ColoredWord, Exec, Field, MelonGraph, MelonTree};
use serde_json::{json, Value};

use crate::config::ExperimentConfig;

/// What a verb produces: data lines (CSV, or tree lines for `sample`) and a
/// JSON summary.
pub struct Emit {
    pub lines: Vec<String>,
    pub summary: Value,
}

pub const DEFAULT_DIM: usize = 3;

fn dim(cfg: &mut ExperimentConfig) -> usize {
    *cfg.dim.get_or_insert(DEFAULT_DIM)
}

fn seed(cfg: &mut ExperimentConfig) -> u64 {
    *cfg.seed.get_or_insert(0)
}

pub fn sample(cfg: &mut ExperimentConfig) -> Result<Emit> {
    let d = dim(cfg);
    let seed = seed(cfg);
    let size = *cfg.size.get_or_insert(100);
    let count = *cfg.count.get_or_insert(1);
    let simple = *cfg.simple.get_or_insert(false);
    let mut lines = Vec::with_capacity(count);
    for k in 0..count as u64 {
        // one seed per tree so any single tree can be regenerated alone
        let s = seed.wrapping_add(k);
        let tree = if simple { sample_simple_melon(d, size, s)? } else { sample_uniform_tree(d, size, s)? };
        lines.push(tree.to_line());
    }
    Ok(Emit { lines, summary: json!({ "D": d, "size": size, "count": count, "simple": simple }) })
}

fn read_input(cfg: &ExperimentConfig) -> Result<String> {
    match &cfg.input {
        Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
            Ok(s)
        }
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

pub fn depth(cfg: &mut ExperimentConfig) -> Result<Emit> {
    let d = dim(cfg);
    let words: Vec<String> = match &cfg.words {
        Some(w) if !w.is_empty() => w.clone(),
        _ => data_lines(&read_input(cfg)?).map(String::from).collect(),
    };
    let mut lines = vec!["word,tree_depth,depth,stack_depth".to_string()];
    let mut deepest = 0;
    for raw in &words {
        let w: ColoredWord = raw.parse().with_context(|| format!("bad word {raw:?}"))?;
        let (depth, _) = depth_via_array(&w, d)?;
        let stack = stack_depth(&w, d)?;
        deepest = deepest.max(depth);
        lines.push(format!("{w},{},{depth},{stack}", w.len()));
    }
    Ok(Emit { lines, summary: json!({ "D": d, "words": words.len(), "max_depth": deepest }) })
}

pub fn lemma2(cfg: &mut ExperimentConfig) -> Result<Emit> {
    let d = dim(cfg);
    let seed = seed(cfg);
    let n = *cfg.n.get_or_insert(100_000);
    let reps = *cfg.reps.get_or_insert(20);
    let exact = lambda_delta(d)?;
    let est = mc_lambda_ratio(d, n, reps, seed, Exec::default())?;
    let lines =
        vec!["n,mean_depth,stderr".to_string(), format!("{n},{},{}", est.mean * n as f64, est.stderr * n as f64)];
    let summary = json!({
        "D": d,
        "lambda_delta": exact.to_string(),
        "lambda_delta_float": exact.to_f64(),
        "mean_block_length": mean_block_length(d)?.to_string(),
        "mc_ratio": est.mean,
        "mc_ratio_err": est.stderr,
    });
    Ok(Emit { lines, summary })
}

pub fn hausdorff(cfg: &mut ExperimentConfig) -> Result<Emit> {
    let d = dim(cfg);
    let seed = seed(cfg);
    let sizes = cfg.sizes.get_or_insert_with(|| (10..=14).map(|k| 1 << k).collect()).clone();
    let reps = *cfg.reps.get_or_insert(50);
    let metric = match cfg.metric.get_or_insert_with(|| "tree".into()).as_str() {
        "tree" => Metric::Tree,
        "ball" => Metric::Ball,
        other => bail!("unknown metric {other:?}, expected tree or ball"),
    };
    let samples = sample_depths(d, &sizes, reps, seed, Exec::default())?;
    let fit = samples.fit(metric)?;
    let mut lines = vec!["n,mean_depth,stderr".to_string()];
    for ((n, m), e) in sizes.iter().zip(&fit.means).zip(&fit.stderrs) {
        lines.push(format!("{n},{m},{e}"));
    }
    let ratio = samples.ball_tree_increment_ratio();
    let limit = lambda_delta(d)?.to_f64();
    let summary = json!({
        "D": d,
        "metric": metric,
        "exponent": fit.exponent,
        "exponent_err": fit.exponent_err,
        "d_H": fit.hausdorff_dimension(),
        "excluded_smallest": fit.excluded_smallest,
        "ball_tree_ratio": ratio,
        "lambda_delta_ratio": ratio / limit,
    });
    Ok(Emit { lines, summary })
}

pub fn spectral(cfg: &mut ExperimentConfig) -> Result<Emit> {
    let d = dim(cfg);
    let seed = seed(cfg);
    let ensemble: Ensemble = cfg.ensemble.get_or_insert_with(|| "general".into()).parse()?;
    let wc = WalkConfig {
        dim: d,
        n: *cfg.n.get_or_insert(4096),
        t_max: *cfg.t_max.get_or_insert(1024),
        walkers: *cfg.walkers.get_or_insert(100),
        graphs: *cfg.graphs.get_or_insert(100),
        seed,
        ensemble,
    };
    let curve = simulate_return_curve(&wc, Exec::default())?;
    let t_lo = *cfg.t_lo.get_or_insert(16);
    let fit = match cfg.t_hi {
        Some(t_hi) => estimate_spectral_dimension(&curve, (t_lo, t_hi))?,
        None => {
            let sc = SpectralConfig { t_lo, t_hi_max: 1024.min(wc.t_max), ..SpectralConfig::default() };
            estimate_spectral_dimension_auto(&curve, &sc)?
        }
    };
    let mut lines = vec!["t,P,stderr".to_string()];
    for i in 0..curve.times.len() {
        lines.push(format!("{},{},{}", curve.times[i], curve.probs[i], curve.stderrs[i]));
    }
    let summary = json!({
        "d_S": fit.d_s,
        "err": fit.err,
        "window": [fit.window.0, fit.window.1],
        "n": wc.n,
        "D": d,
        "ensemble": ensemble,
    });
    Ok(Emit { lines, summary })
}

pub fn series(cfg: &mut ExperimentConfig) -> Result<Emit> {
    let d = dim(cfg);
    let order = *cfg.order.get_or_insert(128);
    let target: Target = cfg.target.get_or_insert_with(|| "Hempty".into()).parse()?;
    let do_fit = *cfg.fit.get_or_insert(false);
    let s = target.series(d, order)?;
    let mut lines = vec!["N,coefficient".to_string()];
    for (k, c) in s.coeffs().iter().enumerate() {
        lines.push(format!("{k},{c}"));
    }
    let mut summary = json!({
        "D": d,
        "target": target,
        "order": order,
        "z0": z0(d)?.to_string(),
        "predicted_exponent": target.predicted_exponent(),
    });
    if do_fit {
        let f = fit_singularity(&s, d)?;
        summary["exponent"] = json!(f.exponent);
        summary["exponent_err"] = json!(f.exponent_err);
        summary["n_used"] = json!([f.n_used.0, f.n_used.1]);
    }
    Ok(Emit { lines, summary })
}

pub fn walk_exact(cfg: &mut ExperimentConfig) -> Result<Emit> {
    let index = *cfg.index.get_or_insert(0);
    let t_max = *cfg.t_max.get_or_insert(20);
    let closed = *cfg.closed.get_or_insert(false);
    let text = read_input(cfg)?;
    let line = data_lines(&text).nth(index).with_context(|| format!("no tree at index {index}"))?;
    let tree = MelonTree::parse_line(line)?;
    let graph = MelonGraph::build(&tree, closed);
    let externals = graph.externals();
    let start = match (cfg.start, externals) {
        (Some(s), _) => s,
        (None, Some((i, _))) => i,
        (None, None) => 0,
    };
    cfg.start = Some(start);
    let rows = exact_walk_distribution::<melonlab_core::Rational>(&graph, t_max, start)?;
    let mut lines = Vec::with_capacity(rows.len() + 1);
    match externals {
        Some((_, o)) => {
            lines.push("t,return,transit".to_string());
            for (t, row) in rows.iter().enumerate() {
                lines.push(format!("{t},{},{}", row[start], row[o]));
            }
        }
        None => {
            lines.push("t,return".to_string());
            for (t, row) in rows.iter().enumerate() {
                lines.push(format!("{t},{}", row[start]));
            }
        }
    }
    let summary = json!({
        "D": tree.dim(),
        "nodes": tree.len(),
        "vertices": graph.vertex_count(),
        "closed": closed,
        "start": start,
    });
    Ok(Emit { lines, summary })
}
