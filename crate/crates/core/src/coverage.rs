//! Alphabet-coverage identities and depth-scaling experiments.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rand::Rng;
use serde::Serialize;

use crate::count::binomial;
use crate::depth::ball_depths;
use crate::error::{Error, Result};
use crate::fit::{linear_fit, mean_stderr};
use crate::par::{map_indexed, Exec};
use crate::sampler::{sample_uniform_tree_with, stream_rng};
use crate::word::check_dim;

fn big_binomial(n: u64, k: u64) -> BigInt {
    BigInt::from(binomial(n, k))
}

/// `Σ_{r=0}^{q} (-1)^{q-r} binom(q, r) r^n`: the number of ways `n`
/// labelled draws hit each of `q` letters at least once.
pub fn s_multinomial(n: u32, q: u32) -> BigInt {
    let mut acc = BigInt::zero();
    for r in 0..=q {
        let term = big_binomial(q as u64, r as u64) * Pow::pow(BigInt::from(r), n);
        if (q - r) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// The same quantity as a direct sum of multinomial coefficients over
/// compositions `k_1 + ... + k_q = n` with every `k_i ≥ 1`.
pub fn multinomial_compositions_sum(n: u32, q: u32) -> BigInt {
    fn rec(remaining: u32, parts: u32, fact: &[BigUint]) -> BigUint {
        // Σ over compositions of `remaining` into `parts` positive parts of Π 1/k_i!,
        // scaled by remaining! so the result stays integral.
        if parts == 0 {
            return if remaining == 0 { BigUint::one() } else { BigUint::zero() };
        }
        let mut acc = BigUint::zero();
        for k in 1..=remaining {
            let rest = rec(remaining - k, parts - 1, fact);
            if rest.is_zero() {
                continue;
            }
            acc += binomial_from(fact, remaining, k) * rest;
        }
        acc
    }
    fn binomial_from(fact: &[BigUint], n: u32, k: u32) -> BigUint {
        &fact[n as usize] / (&fact[k as usize] * &fact[(n - k) as usize])
    }
    let mut fact = vec![BigUint::one()];
    for i in 1..=n {
        let next = &fact[i as usize - 1] * i;
        fact.push(next);
    }
    BigInt::from(rec(n, q, &fact))
}

/// Checks that `L_{rs} = binom(r, s)` and `P_{rs} = (-1)^{r-s} binom(r, s)`,
/// `1 ≤ s ≤ r ≤ q`, are mutually inverse.
pub fn pascal_inverse_check(q: usize) -> bool {
    if q == 0 {
        return false;
    }
    let mut l = vec![vec![0i128; q]; q];
    let mut p = vec![vec![0i128; q]; q];
    for r in 1..=q {
        for s in 1..=r {
            let c: i128 = binomial(r as u64, s as u64).try_into().unwrap_or(i128::MAX);
            l[r - 1][s - 1] = c;
            p[r - 1][s - 1] = if (r - s) % 2 == 0 { c } else { -c };
        }
    }
    let is_identity = |a: &[Vec<i128>], b: &[Vec<i128>]| {
        (0..q).all(|i| {
            (0..q).all(|j| {
                let v: i128 = (0..q).map(|k| a[i][k] * b[k][j]).sum();
                v == i128::from(i == j)
            })
        })
    };
    is_identity(&l, &p) && is_identity(&p, &l)
}

/// Probability that `n` uniform draws from `D + 1` letters show exactly `q`
/// distinct letters.
pub fn coverage_probability(n: u32, q: u32, dim: usize) -> Result<BigRational> {
    check_dim(dim)?;
    let letters = dim as u32 + 1;
    if q > letters {
        return Err(Error::InvalidArgument(format!("q = {q} exceeds D + 1 = {letters}")));
    }
    let num = big_binomial(letters as u64, q as u64) * s_multinomial(n, q);
    let den = Pow::pow(BigInt::from(letters), n);
    Ok(BigRational::new(num, den))
}

/// Mean block length `Λ_Δ^{-1} = (D+1) Σ_r (-1)^{D-r} binom(D, r) r / (D+1-r)^2`.
pub fn mean_block_length(dim: usize) -> Result<BigRational> {
    check_dim(dim)?;
    let d = dim as u64;
    let mut acc = BigRational::zero();
    for r in 0..=d {
        let t = BigRational::new(big_binomial(d, r) * BigInt::from(r), BigInt::from((d + 1 - r) * (d + 1 - r)));
        if (d - r) % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    Ok(acc * BigRational::from_integer(BigInt::from(d + 1)))
}

/// Almost-sure limit of `Λ(w)/n` for words of `n` uniform letters.
pub fn lambda_delta(dim: usize) -> Result<BigRational> {
    Ok(mean_block_length(dim)?.recip())
}

/// Mean and standard error of a replicate statistic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

/// Depth of a word of `n` uniform letters (root letter 0), streamed.
pub fn random_word_depth<R: Rng + ?Sized>(dim: usize, n: usize, rng: &mut R) -> usize {
    let mut entries = [1u32; crate::word::MAX_DIM + 1];
    let entries = &mut entries[..=dim];
    entries[0] = 0;
    let mut last = 0;
    for _ in 0..n {
        let j = rng.random_range(0..=dim);
        let mut m = u32::MAX;
        for (k, &e) in entries.iter().enumerate() {
            if k != j && e < m {
                m = e;
            }
        }
        entries[j] = m + 1;
        last = j;
    }
    if n == 0 {
        0
    } else {
        entries[last] as usize
    }
}

/// Monte Carlo estimate of `Λ(w)/n` over `reps` independent words.
pub fn mc_lambda_ratio(dim: usize, n: usize, reps: usize, seed: u64, exec: Exec) -> Result<Estimate> {
    check_dim(dim)?;
    if n == 0 || reps == 0 {
        return Err(Error::InvalidArgument("n and reps must be positive".into()));
    }
    let ratios = map_indexed(exec, reps, |r| {
        let mut rng = stream_rng(seed, r as u64);
        random_word_depth(dim, n, &mut rng) as f64 / n as f64
    });
    let (mean, stderr) = mean_stderr(&ratios);
    Ok(Estimate { mean, stderr })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Tree,
    Ball,
}

/// Per-tree mean depths for a ladder of tree sizes.
#[derive(Clone, Debug)]
pub struct DepthSamples {
    pub dim: usize,
    pub sizes: Vec<usize>,
    /// `tree[i][r]`: mean tree depth over all nodes of replicate `r` at size `i`.
    pub tree: Vec<Vec<f64>>,
    pub ball: Vec<Vec<f64>>,
}

/// Samples `reps` uniform trees per size and records the mean depth over all
/// vertices of each tree in both metrics.
pub fn sample_depths(dim: usize, sizes: &[usize], reps: usize, seed: u64, exec: Exec) -> Result<DepthSamples> {
    check_dim(dim)?;
    if reps == 0 || sizes.contains(&0) {
        return Err(Error::InvalidArgument("sizes and reps must be positive".into()));
    }
    let jobs = sizes.len() * reps;
    let flat = map_indexed(exec, jobs, |job| {
        let (i, r) = (job / reps, job % reps);
        let mut rng = stream_rng(seed, ((i as u64) << 32) | r as u64);
        let tree = sample_uniform_tree_with(dim, sizes[i], &mut rng).expect("valid parameters");
        let n = tree.len() as f64;
        let td: u64 = tree.tree_depths().iter().map(|&d| d as u64).sum();
        let bd: u64 = ball_depths(&tree).iter().map(|&d| d as u64).sum();
        (td as f64 / n, bd as f64 / n)
    });
    let mut tree = vec![Vec::with_capacity(reps); sizes.len()];
    let mut ball = vec![Vec::with_capacity(reps); sizes.len()];
    for (job, (t, b)) in flat.into_iter().enumerate() {
        tree[job / reps].push(t);
        ball[job / reps].push(b);
    }
    Ok(DepthSamples { dim, sizes: sizes.to_vec(), tree, ball })
}

impl DepthSamples {
    pub fn fit(&self, metric: Metric) -> Result<ScalingFit> {
        let data = match metric {
            Metric::Tree => &self.tree,
            Metric::Ball => &self.ball,
        };
        let (means, stderrs): (Vec<f64>, Vec<f64>) = data.iter().map(|v| mean_stderr(v)).unzip();
        fit_scaling(&self.sizes, &means, &stderrs)
    }

    /// Ratio of mean ball depth to mean tree depth at size index `i`.
    pub fn ball_tree_ratio(&self, i: usize) -> f64 {
        let t: f64 = self.tree[i].iter().sum();
        let b: f64 = self.ball[i].iter().sum();
        b / t
    }

    /// Ratio of the growth of mean ball depth to that of mean tree depth
    /// between the smallest and largest size. Insensitive to the additive
    /// offset between the two metrics, which decays only slowly in the plain
    /// ratio.
    pub fn ball_tree_increment_ratio(&self) -> f64 {
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let last = self.sizes.len() - 1;
        let db = mean(&self.ball[last]) - mean(&self.ball[0]);
        let dt = mean(&self.tree[last]) - mean(&self.tree[0]);
        db / dt
    }
}

/// Power-law fit `mean ≈ A n^exponent` in log–log coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingFit {
    pub sizes: Vec<usize>,
    pub means: Vec<f64>,
    pub stderrs: Vec<f64>,
    pub exponent: f64,
    pub exponent_err: f64,
    pub prefactor: f64,
    /// True when the smallest size was dropped by the finite-size guard.
    pub excluded_smallest: bool,
}

impl ScalingFit {
    /// Hausdorff dimension read off as the inverse depth exponent.
    pub fn hausdorff_dimension(&self) -> f64 {
        1.0 / self.exponent
    }
}

/// Least-squares fit of `log mean` against `log n`. The smallest size is
/// dropped when its residual exceeds three times its relative standard error.
pub fn fit_scaling(sizes: &[usize], means: &[f64], stderrs: &[f64]) -> Result<ScalingFit> {
    if sizes.len() < 4 {
        return Err(Error::InsufficientData(format!("need at least 4 sizes, got {}", sizes.len())));
    }
    if means.len() != sizes.len() || stderrs.len() != sizes.len() {
        return Err(Error::InvalidArgument("sizes, means and stderrs differ in length".into()));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("sizes must be strictly increasing".into()));
    }
    if means.iter().any(|m| m.is_nan() || *m <= 0.0) {
        return Err(Error::InvalidArgument("means must be positive".into()));
    }
    let xs: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = means.iter().map(|m| m.ln()).collect();
    let mut fit = linear_fit(&xs, &ys)?;
    let sigma0 = stderrs[0] / means[0];
    let mut excluded = false;
    if fit.residuals[0].abs() > 3.0 * sigma0 {
        fit = linear_fit(&xs[1..], &ys[1..])?;
        excluded = true;
    }
    Ok(ScalingFit {
        sizes: sizes.to_vec(),
        means: means.to_vec(),
        stderrs: stderrs.to_vec(),
        exponent: fit.slope,
        exponent_err: fit.slope_err,
        prefactor: fit.intercept.exp(),
        excluded_smallest: excluded,
    })
}

/// Samples and fits one metric.
pub fn mc_depth_scaling(
    dim: usize,
    sizes: &[usize],
    reps: usize,
    seed: u64,
    metric: Metric,
    exec: Exec,
) -> Result<ScalingFit> {
    if sizes.len() < 4 {
        return Err(Error::InsufficientData(format!("need at least 4 sizes, got {}", sizes.len())));
    }
    sample_depths(dim, sizes, reps, seed, exec)?.fit(metric)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ratio;

    #[test]
    fn s_values() {
        assert_eq!(s_multinomial(3, 2), BigInt::from(6));
        for n in 1..10 {
            assert_eq!(s_multinomial(n, 1), BigInt::one());
            assert_eq!(s_multinomial(n, 2), BigInt::from((1u64 << n) - 2));
            assert_eq!(s_multinomial(n, 0), BigInt::zero());
        }
        assert_eq!(s_multinomial(2, 3), BigInt::zero());
    }

    #[test]
    fn compositions_agree_small() {
        for n in 0..8 {
            for q in 0..6 {
                assert_eq!(s_multinomial(n, q), multinomial_compositions_sum(n, q), "n={n} q={q}");
            }
        }
    }

    #[test]
    fn coverage_values() {
        assert_eq!(coverage_probability(2, 1, 2).unwrap(), ratio(1, 3));
        assert_eq!(coverage_probability(3, 4, 3).unwrap(), ratio(0, 1));
        assert!(coverage_probability(3, 5, 3).is_err());
    }

    #[test]
    fn lambda_values() {
        assert_eq!(mean_block_length(2).unwrap(), ratio(9, 2));
        assert_eq!(lambda_delta(2).unwrap(), ratio(2, 9));
        assert_eq!(lambda_delta(3).unwrap(), ratio(3, 22));
        assert_eq!(lambda_delta(4).unwrap(), ratio(12, 125));
    }

    #[test]
    fn short_word_ratio_bounded() {
        let e = mc_lambda_ratio(2, 10, 1, 3, Exec::Sequential).unwrap();
        assert!((0.0..=1.0).contains(&e.mean));
    }

    #[test]
    fn constant_input_has_zero_exponent() {
        let sizes = [256, 512, 1024, 2048];
        let f = fit_scaling(&sizes, &[5.0; 4], &[0.1; 4]).unwrap();
        assert_eq!(f.exponent, 0.0);
        assert!(fit_scaling(&sizes[..3], &[5.0; 3], &[0.1; 3]).is_err());
    }
}
