//! Generating functions of simple melons weighted by `h` derivatives, and
//! singularity-exponent extraction from their coefficients.
//!
//! `H^{(n_1..n_p)}(z) = Σ_M z^{N_M} h_M^{(n_1)} ... h_M^{(n_p)}`, the sum
//! running over simple melons with `N_M` nodes and `h^{(n)}` the `n`-th
//! derivative of `h` at `y = 1`.

use std::collections::HashMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;
use serde::Serialize;

use crate::count::binomial;
use crate::error::{Error, Result};
use crate::series::{Field, RationalSeries, TruncatedSeries};
use crate::word::check_dim;

/// Radius of convergence `(D-1)^{D-1} / D^D` of the simple-melon series.
pub fn z0(dim: usize) -> Result<BigRational> {
    check_dim(dim)?;
    let d = dim as u32;
    Ok(BigRational::new(Pow::pow(BigInt::from(d - 1), d - 1), Pow::pow(BigInt::from(d), d)))
}

/// Solves `H = 1 + s z H^D` coefficient by coefficient. With `s = 1` this is
/// the plain generating function; `s = z0` rescales the variable so that the
/// radius of convergence becomes 1.
pub fn solve_h_empty_scaled<F: Field>(dim: usize, order: usize, s: &F) -> Result<TruncatedSeries<F>> {
    check_dim(dim)?;
    if order == 0 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    // P = H^D via the power recurrence, extended one coefficient at a time.
    let m = dim as i64;
    let mut h: Vec<F> = vec![F::one()];
    let mut p: Vec<F> = vec![F::one()];
    for k in 1..=order {
        h.push(s.mul_ref(&p[k - 1]));
        let mut acc = F::zero();
        for j in 1..=k {
            let w = (m + 1) * j as i64 - k as i64;
            if w != 0 {
                acc = acc.add_ref(&F::from_i64(w).mul_ref(&h[j]).mul_ref(&p[k - j]));
            }
        }
        p.push(acc.div_ref(&F::from_i64(k as i64)));
    }
    Ok(TruncatedSeries::from_coeffs(h, order))
}

/// `H^{()}`: coefficient of `z^N` is the number of simple melons with `N` nodes.
pub fn solve_h_empty(dim: usize, order: usize) -> Result<RationalSeries> {
    solve_h_empty_scaled(dim, order, &BigRational::from_i64(1))
}

/// Applies `((D+1) z d/dz + 1)^p` to `H^{()}`, which weights each melon by
/// `h^{(0)}^p = ((D+1)N + 1)^p`.
pub fn weight_by_h0<F: Field>(h: &TruncatedSeries<F>, dim: usize, p: usize) -> TruncatedSeries<F> {
    let mut out = h.clone();
    for _ in 0..p {
        out = out.euler_op(dim as i64 + 1, 1);
    }
    out
}

/// `H^{(0,...,0)}` with `p` zeros.
pub fn weighted_h(dim: usize, order: usize, p: usize) -> Result<RationalSeries> {
    Ok(weight_by_h0(&solve_h_empty(dim, order)?, dim, p))
}

/// `H^{(1)}` from the one-index relation, in the variable `s z`.
///
/// Uses `H - 1` as the source term, so the constant coefficient is
/// `h^{(1)} = 0` of the bare line.
pub fn solve_h1_scaled<F: Field>(dim: usize, order: usize, s: &F) -> Result<TruncatedSeries<F>> {
    if order < 2 {
        return Err(Error::InvalidArgument("order must be at least 2".into()));
    }
    let d = dim as i64;
    let h = solve_h_empty_scaled(dim, order, s)?;
    let h0 = weight_by_h0(&h, dim, 1);
    let h00 = weight_by_h0(&h, dim, 2);
    let hd1 = h.pow(dim as u32 - 1);
    let hd2 = h.pow(dim as u32 - 2);
    let sz = |x: &TruncatedSeries<F>| x.shift(1).scale(s);

    let mut rhs = h.sub(&TruncatedSeries::one(order));
    rhs = rhs.add(&sz(&h0.mul(&hd1)).scale(&F::from_i64(2 * d)));
    rhs = rhs.add(&sz(&h0.mul(&h0).mul(&hd2)).scale(&F::from_i64(d * (d - 1))));
    rhs = rhs.add(&sz(&h00.mul(&hd1)).scale(&F::from_i64(d)));
    let lhs = TruncatedSeries::one(order).sub(&sz(&hd1).scale(&F::from_i64(d)));
    rhs.div(&lhs)
}

pub fn solve_h1(dim: usize, order: usize) -> Result<RationalSeries> {
    solve_h1_scaled(dim, order, &BigRational::from_i64(1))
}

/// `H^{(S)}` from the resummed leading-order relation, for index lists with
/// `Σ n_i ≤ 2`. Lists of zeros use the exact weighted sums. The result
/// carries the leading singular behaviour only, not exact coefficients.
pub fn resummed_leading<F: Field>(dim: usize, order: usize, indices: &[usize], s: &F) -> Result<TruncatedSeries<F>> {
    if indices.iter().sum::<usize>() > 2 {
        return Err(Error::InvalidArgument("resummed relation limited to index sums up to 2".into()));
    }
    let h = solve_h_empty_scaled(dim, order, s)?;
    let mut memo = HashMap::new();
    resummed_rec(dim, &h, s, indices, &mut memo)
}

fn resummed_rec<F: Field>(
    dim: usize,
    h: &TruncatedSeries<F>,
    s: &F,
    indices: &[usize],
    memo: &mut HashMap<Vec<usize>, TruncatedSeries<F>>,
) -> Result<TruncatedSeries<F>> {
    let mut key = indices.to_vec();
    key.sort_unstable_by(|a, b| b.cmp(a));
    if let Some(v) = memo.get(&key) {
        return Ok(v.clone());
    }
    let order = h.order();
    let d = dim as i64;
    let value = if key.iter().all(|&n| n == 0) {
        weight_by_h0(h, dim, key.len())
    } else {
        let hd1 = h.pow(dim as u32 - 1);
        let hd2 = h.pow(dim as u32 - 2);
        let mut pairs = TruncatedSeries::zero(order);
        let p = key.len();
        // ordered splits into two non-empty sublists
        for mask in 1..(1u32 << p) - 1 {
            let (a, b): (Vec<usize>, Vec<usize>) = {
                let mut a = Vec::new();
                let mut b = Vec::new();
                for (i, &n) in key.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        a.push(n);
                    } else {
                        b.push(n);
                    }
                }
                (a, b)
            };
            let fa = resummed_rec(dim, h, s, &a, memo)?;
            let fb = resummed_rec(dim, h, s, &b, memo)?;
            pairs = pairs.add(&fa.mul(&fb));
        }
        let mut singles = TruncatedSeries::zero(order);
        for (j, &nj) in key.iter().enumerate() {
            for r in 1..=nj {
                let mut sub = vec![r - 1, nj - r];
                sub.extend(key.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &n)| n));
                let w = binomial(nj as u64, r as u64) * r as u64;
                let w = F::from_i64(i64::try_from(w).expect("small binomial"));
                singles = singles.add(&resummed_rec(dim, h, s, &sub, memo)?.scale(&w));
            }
        }
        let sz = |x: &TruncatedSeries<F>| x.shift(1).scale(s);
        let rhs =
            sz(&hd2.mul(&pairs)).scale(&F::from_i64(d * (d - 1))).add(&sz(&hd1.mul(&singles)).scale(&F::from_i64(d)));
        let lhs = TruncatedSeries::one(order).sub(&sz(&hd1).scale(&F::from_i64(d)));
        rhs.div(&lhs)?
    };
    memo.insert(key, value.clone());
    Ok(value)
}

/// `Σ_p C_p / ((D+1)p + 1) z^p`, the residue series at the `y = 1` pole.
pub fn q_pole_series(dim: usize, order: usize) -> Result<RationalSeries> {
    let h = solve_h_empty(dim, order)?;
    let coeffs = h
        .coeffs()
        .iter()
        .enumerate()
        .map(|(p, c)| c.div_ref(&BigRational::from_i64((dim as i64 + 1) * p as i64 + 1)))
        .collect();
    Ok(TruncatedSeries::from_coeffs(coeffs, order))
}

/// Named generating functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Target {
    #[serde(rename = "Hempty")]
    HEmpty,
    H0,
    H00,
    H1,
}

impl Target {
    /// Exponent `a` in `c_N ~ z0^{-N} N^{a-1}`: `p - 1/2 + 3/2 Σ n_i`.
    pub fn predicted_exponent(self) -> f64 {
        match self {
            Target::HEmpty => -0.5,
            Target::H0 => 0.5,
            Target::H00 => 1.5,
            Target::H1 => 2.0,
        }
    }

    pub fn series(self, dim: usize, order: usize) -> Result<RationalSeries> {
        match self {
            Target::HEmpty => solve_h_empty(dim, order),
            Target::H0 => weighted_h(dim, order, 1),
            Target::H00 => weighted_h(dim, order, 2),
            Target::H1 => solve_h1(dim, order),
        }
    }

    /// Same series in the rescaled variable `z0 z`, float coefficients.
    pub fn series_scaled(self, dim: usize, order: usize) -> Result<TruncatedSeries<f64>> {
        let s = z0(dim)?.to_f64();
        match self {
            Target::HEmpty => solve_h_empty_scaled(dim, order, &s),
            Target::H0 => Ok(weight_by_h0(&solve_h_empty_scaled(dim, order, &s)?, dim, 1)),
            Target::H00 => Ok(weight_by_h0(&solve_h_empty_scaled(dim, order, &s)?, dim, 2)),
            Target::H1 => solve_h1_scaled(dim, order, &s),
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Hempty" => Ok(Target::HEmpty),
            "H0" => Ok(Target::H0),
            "H00" => Ok(Target::H00),
            "H1" => Ok(Target::H1),
            _ => Err(Error::Parse(format!("unknown series target {s:?}"))),
        }
    }
}

/// Fitted singularity exponent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentFit {
    /// Radius used, as `p/q`.
    pub z0: String,
    pub exponent: f64,
    pub exponent_err: f64,
    /// Range of `N` entering the extrapolation.
    pub n_used: (usize, usize),
}

/// Minimum number of coefficients accepted by the fits.
pub const MIN_COEFFICIENTS: usize = 64;

/// Fits `a` in `c_N ≈ z0^{-N} N^{a-1}` using the exact radius for `D`.
pub fn fit_singularity<F: Field>(series: &TruncatedSeries<F>, dim: usize) -> Result<ExponentFit> {
    let r = z0(dim)?;
    let mut fit = fit_singularity_at(series, &F::from_rational(&r))?;
    fit.z0 = r.to_string();
    Ok(fit)
}

/// Exponent fit at a given radius.
///
/// The ratio sequence `r_N = N (c_{N+1} z0 / c_N - 1)` tends to `a - 1` with
/// corrections in powers of `N^{-1/2}`. One Richardson step removes the
/// `1/N` term; the remaining `N^{-1/2}` term is removed by a second
/// extrapolation between `N` and `N/4`. The error is the size of that last
/// correction.
pub fn fit_singularity_at<F: Field>(series: &TruncatedSeries<F>, radius: &F) -> Result<ExponentFit> {
    let c = series.coeffs();
    if c.len() < MIN_COEFFICIENTS {
        return Err(Error::InsufficientData(format!("need at least {MIN_COEFFICIENTS} coefficients, got {}", c.len())));
    }
    let last = c.len() - 1;
    let r = |n: usize| -> f64 {
        let rho = c[n + 1].mul_ref(radius).div_ref(&c[n]).to_f64();
        n as f64 * (rho - 1.0)
    };
    // R_N = (N+1) r_{N+1} - N r_N
    let rich = |n: usize| (n + 1) as f64 * r(n + 1) - n as f64 * r(n);
    let n2 = last - 2;
    let n1 = n2 / 4;
    if c[n1..].iter().any(Field::is_zero) {
        return Err(Error::InvalidArgument("zero coefficient in fit range".into()));
    }
    let (a2, a1) = (rich(n2), rich(n1));
    // s_N = s + b N^{-1/2}: eliminate b between N and N/4
    let (w2, w1) = ((n2 as f64).sqrt(), (n1 as f64).sqrt());
    let extrapolated = (w2 * a2 - w1 * a1) / (w2 - w1);
    Ok(ExponentFit {
        z0: String::new(),
        exponent: 1.0 + extrapolated,
        exponent_err: (extrapolated - a2).abs(),
        n_used: (n1, last),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::count_simple_melons;
    use crate::series::ratio;

    #[test]
    fn radius() {
        assert_eq!(z0(2).unwrap(), ratio(1, 4));
        assert_eq!(z0(3).unwrap(), ratio(4, 27));
    }

    #[test]
    fn h_empty_counts() {
        let h = solve_h_empty(2, 10).unwrap();
        let expect = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796];
        for (k, e) in expect.iter().enumerate() {
            assert_eq!(h.coeff(k), ratio(*e, 1));
        }
        let h3 = solve_h_empty(3, 12).unwrap();
        for k in 0..=12 {
            let c = BigRational::from_integer(count_simple_melons(3, k as u64).unwrap().into());
            assert_eq!(h3.coeff(k), c);
        }
    }

    #[test]
    fn fixed_point_residual_vanishes() {
        for d in 2..=5 {
            let h = solve_h_empty(d, 30).unwrap();
            let rhs = RationalSeries::one(30).add(&h.pow(d as u32).shift(1));
            assert_eq!(h, rhs);
        }
    }

    #[test]
    fn weighted_values() {
        let h0 = weighted_h(2, 5, 1).unwrap();
        assert_eq!(h0.coeff(1), ratio(4, 1));
        let h00 = weighted_h(2, 5, 2).unwrap();
        assert_eq!(h00.coeff(0), ratio(1, 1));
        assert_eq!(h00.coeff(2), ratio(49 * 2, 1));
    }

    #[test]
    fn h1_constant_term() {
        let h1 = solve_h1(2, 8).unwrap();
        assert_eq!(h1.coeff(0), ratio(0, 1));
        assert!(h1.coeffs()[1..].iter().all(|c| *c > ratio(0, 1)));
    }

    #[test]
    fn tree_sums_match_series() {
        use crate::sampler::enumerate_simple_melons;
        use crate::walk_algebra::per_tree_h_derivatives;
        for d in [2, 3] {
            let h0 = weighted_h(d, 5, 1).unwrap();
            let h00 = weighted_h(d, 5, 2).unwrap();
            let h1 = solve_h1(d, 5).unwrap();
            for n in 0..=5 {
                // the bare line (N = 0) has h = 1 identically
                let bare = ratio(i64::from(n == 0), 1);
                let (mut s0, mut s00, mut s1) = (bare.clone(), bare, ratio(0, 1));
                for t in enumerate_simple_melons(d, n).unwrap() {
                    let der = per_tree_h_derivatives(&t, 1).unwrap();
                    s0 += &der[0];
                    s00 += &der[0] * &der[0];
                    s1 += &der[1];
                }
                assert_eq!(h0.coeff(n), s0);
                assert_eq!(h00.coeff(n), s00);
                assert_eq!(h1.coeff(n), s1, "D={d} N={n}");
            }
        }
    }

    #[test]
    fn fit_rejects_short_series() {
        let h = solve_h_empty(2, 20).unwrap();
        assert!(matches!(fit_singularity(&h, 2), Err(Error::InsufficientData(_))));
    }
}
