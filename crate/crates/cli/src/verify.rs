//! One-shot verification suite. `quick` runs exact identities only; `full`
//! adds the Monte Carlo and asymptotic checks.

use std::collections::HashMap;

use melonlab_core::count::{count_colored_trees, count_simple_melons};
use melonlab_core::coverage::{
    lambda_delta, mc_lambda_ratio, multinomial_compositions_sum, pascal_inverse_check, s_multinomial, sample_depths,
    Metric,
};
use melonlab_core::depth::{depth_profile, depth_via_array, depth_via_subwords, stack_depth_profile};
use melonlab_core::sampler::{
    enumerate_simple_melons, enumerate_trees, sample_simple_melon, sample_uniform_tree, sample_uniform_tree_with,
    stream_rng,
};
use melonlab_core::series_lab::{fit_singularity, solve_h_empty, Target};
use melonlab_core::walk::{
    estimate_spectral_dimension_auto, exact_walk_distribution, simulate_return_curve, Ensemble, SpectralConfig,
    WalkConfig,
};
use melonlab_core::walk_algebra::{first_return_matrix, h_at_one, return_matrix};
use melonlab_core::{ColoredWord, Exec, Field, MelonGraph, Rational, RationalSeries};
use statrs::distribution::{ChiSquared, ContinuousCDF};

pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = (&'static str, fn() -> (bool, String));

fn worked_example() -> (bool, String) {
    let w: ColoredWord = "0;10132120312".parse().expect("literal word");
    let profile = depth_profile(&w, 3).expect("valid word");
    let (depth, trace) = depth_via_array(&w, 3).expect("valid word");
    let (_, div) = depth_via_subwords(&w, 3).expect("valid word");
    let ok = profile == [0, 1, 2, 2, 2, 3, 3, 3, 3, 4, 4, 4]
        && trace.last().map(|a| a.entries().to_vec()) == Some(vec![3, 4, 4, 4])
        && div.render(&w) == "(0)(1)(013)(2120)(312)";
    (ok, format!("depth {depth}, division {}", div.render(&w)))
}

fn stack_table() -> (bool, String) {
    let mut letters = vec![0];
    for _ in 0..6 {
        letters.extend([1, 2, 0]);
    }
    let w = ColoredWord::from_values(1, &letters, 2).expect("valid letters");
    let depth = depth_profile(&w, 2).expect("valid word");
    let stack = stack_depth_profile(&w, 2).expect("valid word");
    let ok = depth == [0, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6, 7, 7, 8, 8, 9, 9, 10, 10]
        && stack == [0, 1, 2, 2, 2, 3, 3, 3, 4, 4, 4, 5, 5, 5, 6, 6, 6, 7, 7, 7];
    (ok, format!("final depth {}, stack depth {}", depth[19], stack[19]))
}

fn coverage_identities() -> (bool, String) {
    let sums_ok = (0..=14).all(|n| (0..=8).all(|q| s_multinomial(n, q) == multinomial_compositions_sum(n, q)));
    let inverse_ok = (1..=12).all(pascal_inverse_check);
    (sums_ok && inverse_ok, format!("compositions {sums_ok}, inverse {inverse_ok}"))
}

fn block_constants() -> (bool, String) {
    let got: Vec<String> = (2..=4).map(|d| lambda_delta(d).expect("valid dim").recip().to_string()).collect();
    (got == ["9/2", "22/3", "125/12"], got.join(", "))
}

fn counting() -> (bool, String) {
    let mut ok = true;
    for d in [2, 3] {
        for n in 1..=5 {
            ok &= enumerate_trees(d, n).map(|t| t.len().into()).ok() == count_colored_trees(d, n as u64).ok();
            ok &= enumerate_simple_melons(d, n).map(|t| t.len().into()).ok() == count_simple_melons(d, n as u64).ok();
        }
    }
    (ok, "D = 2, 3 up to 5 nodes".into())
}

fn walk_oracle() -> (bool, String) {
    for s in 0..20u64 {
        let d = 2 + (s % 3) as usize;
        let t = sample_uniform_tree(d, 1 + (s % 6) as usize, s).expect("valid parameters");
        let r = return_matrix(&first_return_matrix(&t, 12).expect("order positive")).expect("invertible");
        let g = MelonGraph::build(&t, false);
        let (i, o) = g.externals().expect("open graph");
        let rows: Vec<Vec<Rational>> = exact_walk_distribution(&g, 12, i).expect("small graph");
        if rows.iter().enumerate().any(|(k, row)| r.oo.coeff(k) != row[i] || r.ob.coeff(k) != row[o]) {
            return (false, format!("tree {s} disagrees"));
        }
    }
    (true, "20 trees to t = 12".into())
}

fn h_identity() -> (bool, String) {
    for s in 0..200u64 {
        let d = 2 + (s % 3) as usize;
        let p = 1 + (s % 30) as usize;
        let t = sample_simple_melon(d, p, s).expect("valid parameters");
        if h_at_one(&t).ok() != Some(Rational::from_i64(((d + 1) * p + 1) as i64)) {
            return (false, format!("D={d} p={p}"));
        }
    }
    (true, "200 simple melons".into())
}

fn series_counts() -> (bool, String) {
    let h = solve_h_empty(3, 30).expect("valid order");
    let rhs = RationalSeries::one(30).add(&h.pow(3).shift(1));
    let counts_ok = (0..=30).all(|k| {
        let c = count_simple_melons(3, k as u64).expect("valid dim");
        h.coeff(k) == Rational::from_integer(c.into())
    });
    (h == rhs && counts_ok, "D = 3 to order 30".into())
}

fn mc_lambda() -> (bool, String) {
    let est = mc_lambda_ratio(2, 1_000_000, 50, 2024, Exec::default()).expect("valid parameters");
    let target = lambda_delta(2).expect("valid dim").to_f64();
    let z = (est.mean - target) / est.stderr;
    (z.abs() <= 3.0, format!("{:.6} vs {target:.6} ({z:+.2}σ)", est.mean))
}

fn depth_scaling() -> (bool, String) {
    let sizes: Vec<usize> = (10..=16).map(|k| 1 << k).collect();
    let s = sample_depths(2, &sizes, 200, 31, Exec::default()).expect("valid parameters");
    let t = s.fit(Metric::Tree).expect("enough sizes").exponent;
    let b = s.fit(Metric::Ball).expect("enough sizes").exponent;
    let rel = s.ball_tree_increment_ratio() / lambda_delta(2).expect("valid dim").to_f64() - 1.0;
    let ok = (t - 0.5).abs() <= 0.03 && (b - 0.5).abs() <= 0.03 && rel.abs() <= 0.02;
    (ok, format!("tree {t:.4}, ball {b:.4}, ratio offset {:+.2}%", 100.0 * rel))
}

fn series_exponents() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for t in [Target::HEmpty, Target::H0, Target::H00, Target::H1] {
        let f = fit_singularity(&t.series(2, 512).expect("valid order"), 2).expect("enough coefficients");
        ok &= (f.exponent - t.predicted_exponent()).abs() <= 0.05;
        parts.push(format!("{:.4}", f.exponent));
    }
    (ok, parts.join(", "))
}

fn spectral() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for d in [2, 3] {
        let cfg = WalkConfig {
            dim: d,
            n: 1 << 15,
            t_max: 2048,
            walkers: 100,
            graphs: 1000,
            seed: 7,
            ensemble: Ensemble::General,
        };
        let curve = simulate_return_curve(&cfg, Exec::default()).expect("valid parameters");
        let f = estimate_spectral_dimension_auto(&curve, &SpectralConfig::default()).expect("wide window");
        ok &= (1.23..=1.43).contains(&f.d_s);
        parts.push(format!("D={d} {:.3}", f.d_s));
    }
    (ok, parts.join(", "))
}

fn uniformity() -> (bool, String) {
    let (d, n) = (2, 4);
    let trees = enumerate_trees(d, n).expect("small set");
    let index: HashMap<String, usize> = trees.iter().enumerate().map(|(i, t)| (t.to_line(), i)).collect();
    let draws = 10_000 * trees.len();
    let mut counts = vec![0usize; trees.len()];
    let mut rng = stream_rng(42, 0);
    for _ in 0..draws {
        let t = sample_uniform_tree_with(d, n, &mut rng).expect("valid parameters");
        counts[index[&t.to_line()]] += 1;
    }
    let e = draws as f64 / trees.len() as f64;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    let p = 1.0 - ChiSquared::new((trees.len() - 1) as f64).expect("positive dof").cdf(stat);
    (p > 1e-3, format!("{} trees, p = {p:.3}", trees.len()))
}

const QUICK: [Check; 8] = [
    ("worked example", worked_example),
    ("depth vs stack depth table", stack_table),
    ("coverage identities", coverage_identities),
    ("block constants", block_constants),
    ("counting oracles", counting),
    ("walk algebra oracle", walk_oracle),
    ("h at one", h_identity),
    ("simple melon series", series_counts),
];

const FULL: [Check; 5] = [
    ("block constant Monte Carlo", mc_lambda),
    ("depth scaling", depth_scaling),
    ("series exponents", series_exponents),
    ("spectral dimension", spectral),
    ("sampler uniformity", uniformity),
];

pub fn run(full: bool) -> Vec<CheckResult> {
    let extra: &[Check] = if full { &FULL } else { &[] };
    QUICK
        .iter()
        .chain(extra)
        .map(|&(name, f)| {
            let (passed, detail) = f();
            CheckResult { name, passed, detail }
        })
        .collect()
}
