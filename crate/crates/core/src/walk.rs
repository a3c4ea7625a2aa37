//! Random walks on closed melonic graphs and spectral-dimension fits.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::linear_fit;
use crate::graph::MelonGraph;
use crate::par::{map_indexed, Exec};
use crate::sampler::{sample_simple_melon_with, sample_uniform_tree_with, stream_rng};
use crate::series::Field;
use crate::word::check_dim;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ensemble {
    General,
    Simple,
}

impl std::str::FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(Ensemble::General),
            "simple" => Ok(Ensemble::Simple),
            _ => Err(Error::Parse(format!("unknown ensemble {s:?}"))),
        }
    }
}

/// Parameters of a Monte Carlo return-probability run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalkConfig {
    pub dim: usize,
    pub n: usize,
    pub t_max: usize,
    pub walkers: usize,
    pub graphs: usize,
    pub seed: u64,
    pub ensemble: Ensemble,
}

/// Return probability at even times, averaged over graphs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReturnCurve {
    pub times: Vec<usize>,
    pub probs: Vec<f64>,
    /// Standard error across graphs.
    pub stderrs: Vec<f64>,
    /// Total number of walks.
    pub samples: usize,
    pub graphs: usize,
}

impl ReturnCurve {
    /// Curve from exact or synthetic values; errors are set to zero.
    pub fn from_values(times: Vec<usize>, probs: Vec<f64>) -> ReturnCurve {
        let stderrs = vec![0.0; probs.len()];
        ReturnCurve { times, probs, stderrs, samples: 0, graphs: 0 }
    }

    pub fn t_max(&self) -> usize {
        self.times.last().copied().unwrap_or(0)
    }

    pub fn prob_at(&self, t: usize) -> Option<f64> {
        self.times.binary_search(&t).ok().map(|i| self.probs[i])
    }
}

/// Hit counts of `walkers` walks from uniform starts on one closed graph;
/// entry `k` counts returns at time `2k`.
pub fn graph_return_hits<R: Rng + ?Sized>(graph: &MelonGraph, t_max: usize, walkers: usize, rng: &mut R) -> Vec<u32> {
    debug_assert!(graph.is_closed());
    let w = graph.dim() + 1;
    let table = graph.color_table();
    let nv = graph.vertex_count();
    let mut hits = vec![0u32; t_max / 2 + 1];
    for _ in 0..walkers {
        let start = rng.random_range(0..nv);
        let mut v = start;
        hits[0] += 1;
        for t in 1..=t_max {
            let c = rng.random_range(0..w);
            v = table[v * w + c] as usize;
            if t % 2 == 0 && v == start {
                hits[t / 2] += 1;
            }
        }
    }
    hits
}

/// Samples `graphs` closed melonic graphs with `n` nodes and runs `walkers`
/// walks of length `t_max` on each.
pub fn simulate_return_curve(cfg: &WalkConfig, exec: Exec) -> Result<ReturnCurve> {
    check_dim(cfg.dim)?;
    if cfg.t_max % 2 == 1 {
        return Err(Error::InvalidArgument(format!("t_max must be even, got {}", cfg.t_max)));
    }
    if cfg.n == 0 || cfg.walkers == 0 || cfg.graphs == 0 {
        return Err(Error::InvalidArgument("n, walkers and graphs must be positive".into()));
    }
    let per_graph = map_indexed(exec, cfg.graphs, |g| {
        let mut rng = stream_rng(cfg.seed, g as u64);
        let tree = match cfg.ensemble {
            Ensemble::General => sample_uniform_tree_with(cfg.dim, cfg.n, &mut rng),
            Ensemble::Simple => sample_simple_melon_with(cfg.dim, cfg.n, &mut rng),
        }
        .expect("valid parameters");
        let graph = MelonGraph::build(&tree, true);
        graph_return_hits(&graph, cfg.t_max, cfg.walkers, &mut rng)
    });
    let k = cfg.t_max / 2 + 1;
    let gf = cfg.graphs as f64;
    let wf = cfg.walkers as f64;
    let mut probs = vec![0.0; k];
    let mut stderrs = vec![0.0; k];
    for i in 0..k {
        let freqs = per_graph.iter().map(|h| h[i] as f64 / wf);
        let mean = freqs.clone().sum::<f64>() / gf;
        let var = if cfg.graphs > 1 { freqs.map(|f| (f - mean) * (f - mean)).sum::<f64>() / (gf - 1.0) } else { 0.0 };
        probs[i] = mean;
        stderrs[i] = (var / gf).sqrt();
    }
    Ok(ReturnCurve {
        times: (0..k).map(|i| 2 * i).collect(),
        probs,
        stderrs,
        samples: cfg.walkers * cfg.graphs,
        graphs: cfg.graphs,
    })
}

/// Occupation probabilities at times `0..=t_max` for a walk from `start`
/// that picks a uniformly random incident edge at each step.
pub fn exact_walk_distribution<F: Field>(graph: &MelonGraph, t_max: usize, start: usize) -> Result<Vec<Vec<F>>> {
    let nv = graph.vertex_count();
    if nv > 10_000 {
        return Err(Error::InvalidArgument(format!("{nv} vertices exceed the exact-walk limit")));
    }
    if start >= nv {
        return Err(Error::InvalidArgument(format!("start vertex {start} out of range")));
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for e in graph.edges() {
        adj[e.u as usize].push(e.v as usize);
        adj[e.v as usize].push(e.u as usize);
    }
    let inv_deg: Vec<F> = adj.iter().map(|a| F::one().div_ref(&F::from_i64(a.len() as i64))).collect();
    let mut cur = vec![F::zero(); nv];
    cur[start] = F::one();
    let mut out = Vec::with_capacity(t_max + 1);
    out.push(cur.clone());
    for _ in 0..t_max {
        let mut next = vec![F::zero(); nv];
        for (v, p) in cur.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let share = p.mul_ref(&inv_deg[v]);
            for &u in &adj[v] {
                next[u] = next[u].add_ref(&share);
            }
        }
        out.push(next.clone());
        cur = next;
    }
    Ok(out)
}

/// Spectral dimension from a log–log fit of the return curve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralFit {
    pub d_s: f64,
    pub err: f64,
    pub window: (usize, usize),
    pub points: usize,
}

/// Fits `log P` against `log t` over the even times in `[t_lo, t_hi]`;
/// `d_S = -2 · slope`.
pub fn estimate_spectral_dimension(curve: &ReturnCurve, window: (usize, usize)) -> Result<SpectralFit> {
    let (t_lo, t_hi) = window;
    if t_lo == 0 || t_hi < 4 * t_lo {
        return Err(Error::WindowTooNarrow(format!("[{t_lo}, {t_hi}] spans less than a factor of 4")));
    }
    if t_hi > curve.t_max() {
        return Err(Error::InvalidArgument(format!("window end {t_hi} beyond curve end {}", curve.t_max())));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = curve
        .times
        .iter()
        .zip(&curve.probs)
        .filter(|(&t, &p)| t >= t_lo && t <= t_hi && t % 2 == 0 && p > 0.0)
        .map(|(&t, &p)| ((t as f64).ln(), p.ln()))
        .unzip();
    if xs.len() < 3 {
        return Err(Error::InsufficientData("fewer than 3 positive points in window".into()));
    }
    let fit = linear_fit(&xs, &ys)?;
    Ok(SpectralFit { d_s: -2.0 * fit.slope, err: 2.0 * fit.slope_err, window, points: xs.len() })
}

/// Automatic window selection.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralConfig {
    pub t_lo: usize,
    pub t_hi_max: usize,
    /// Largest accepted slope difference between window halves.
    pub curvature_tol: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig { t_lo: 16, t_hi_max: 1024, curvature_tol: 0.02 }
    }
}

fn slope_in(curve: &ReturnCurve, t_lo: usize, t_hi: usize) -> Option<(f64, f64)> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = curve
        .times
        .iter()
        .zip(&curve.probs)
        .filter(|(&t, &p)| t >= t_lo && t <= t_hi && t > 0 && p > 0.0)
        .map(|(&t, &p)| ((t as f64).ln(), p.ln()))
        .unzip();
    if xs.len() < 3 {
        return None;
    }
    linear_fit(&xs, &ys).ok().map(|f| (f.slope, f.slope_err))
}

/// Curvature of `log P` against `log t` over a window: the slope difference
/// between its upper and lower halves (split at the geometric midpoint),
/// together with the standard error of that difference.
pub fn window_curvature(curve: &ReturnCurve, t_lo: usize, t_hi: usize) -> (f64, f64) {
    let mid = ((t_lo as f64) * (t_hi as f64)).sqrt().round() as usize;
    match (slope_in(curve, t_lo, mid), slope_in(curve, mid, t_hi)) {
        (Some((a, ea)), Some((b, eb))) => ((b - a).abs(), (ea * ea + eb * eb).sqrt()),
        _ => (f64::INFINITY, 0.0),
    }
}

/// Starts from `[t_lo, min(t_hi_max, t_max)]` and halves the upper end while
/// the curvature exceeds the tolerance by more than twice its standard
/// error, stopping at a factor-4 window.
pub fn auto_window(curve: &ReturnCurve, cfg: &SpectralConfig) -> Result<(usize, usize)> {
    let t_lo = cfg.t_lo;
    let mut t_hi = cfg.t_hi_max.min(curve.t_max());
    if t_lo == 0 || t_hi < 4 * t_lo {
        return Err(Error::WindowTooNarrow(format!("[{t_lo}, {t_hi}] spans less than a factor of 4")));
    }
    while t_hi / 2 >= 4 * t_lo {
        let (k, err) = window_curvature(curve, t_lo, t_hi);
        if k <= cfg.curvature_tol + 2.0 * err {
            break;
        }
        t_hi /= 2;
    }
    Ok((t_lo, t_hi))
}

/// Auto-window fit.
pub fn estimate_spectral_dimension_auto(curve: &ReturnCurve, cfg: &SpectralConfig) -> Result<SpectralFit> {
    let window = auto_window(curve, cfg)?;
    estimate_spectral_dimension(curve, window)
}
