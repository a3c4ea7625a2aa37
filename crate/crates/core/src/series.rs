//! Truncated power series over an exact or floating coefficient field.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficient field: exact rationals or `f64`.
pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    /// Division; callers guarantee a nonzero divisor.
    fn div_ref(&self, other: &Self) -> Self;
    fn to_f64(&self) -> f64;
    fn from_rational(r: &BigRational) -> Self;

    fn neg_ref(&self) -> Self {
        Self::zero().sub_ref(self)
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn div_ref(&self, other: &Self) -> Self {
        self / other
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn div_ref(&self, other: &Self) -> Self {
        self / other
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
}

/// Values the walk recursions can be evaluated in: scalars or series.
pub trait Algebra: Clone + Debug {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Result<Self>;
    /// The integer `v` in the same algebra (and truncation order) as `self`.
    fn scalar(&self, v: i64) -> Self;

    fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }
}

impl<F: Field> Algebra for F {
    fn add(&self, other: &Self) -> Self {
        self.add_ref(other)
    }
    fn sub(&self, other: &Self) -> Self {
        self.sub_ref(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::NotInvertible)
        } else {
            Ok(F::one().div_ref(self))
        }
    }
    fn scalar(&self, v: i64) -> Self {
        F::from_i64(v)
    }
}

/// Power series `c_0 + c_1 x + ... + c_order x^order`, truncated.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<F> {
    coeffs: Vec<F>,
}

/// Exact rational scalar.
pub type Rational = BigRational;

pub type RationalSeries = TruncatedSeries<BigRational>;

impl<F: Field> TruncatedSeries<F> {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries { coeffs: vec![F::zero(); order + 1] }
    }

    pub fn constant(c: F, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(F::one(), order)
    }

    /// The series variable itself.
    pub fn var(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = F::one();
        }
        s
    }

    /// Pads with zeros or truncates to `order`.
    pub fn from_coeffs(mut coeffs: Vec<F>, order: usize) -> Self {
        coeffs.resize(order + 1, F::zero());
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(F::is_zero)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&F, &F) -> F) -> Self {
        let order = self.order().min(other.order());
        TruncatedSeries { coeffs: (0..=order).map(|k| f(&self.coeffs[k], &other.coeffs[k])).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, F::add_ref)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, F::sub_ref)
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(F::neg_ref).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|a| a.mul_ref(c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![F::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let order = self.order();
        let mut out: Vec<F> = Vec::with_capacity(order + 1);
        out.push(F::one().div_ref(a0));
        for k in 1..=order {
            let mut acc = F::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc = acc.add_ref(&self.coeffs[j].mul_ref(&out[k - j]));
                }
            }
            out.push(acc.neg_ref().div_ref(a0));
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// `self^m` via the power recurrence when the constant term is nonzero,
    /// repeated multiplication otherwise.
    pub fn pow(&self, m: u32) -> Self {
        let order = self.order();
        if m == 0 {
            return Self::one(order);
        }
        let a0 = self.coeffs[0].clone();
        if a0.is_zero() {
            let mut acc = self.clone();
            for _ in 1..m {
                acc = acc.mul(self);
            }
            return acc;
        }
        let mut p: Vec<F> = Vec::with_capacity(order + 1);
        let mut p0 = F::one();
        for _ in 0..m {
            p0 = p0.mul_ref(&a0);
        }
        p.push(p0);
        let m = i64::from(m);
        for k in 1..=order {
            let mut acc = F::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                let w = (m + 1) * j as i64 - k as i64;
                if w == 0 {
                    continue;
                }
                acc = acc.add_ref(&F::from_i64(w).mul_ref(&self.coeffs[j]).mul_ref(&p[k - j]));
            }
            p.push(acc.div_ref(&F::from_i64(k as i64).mul_ref(&a0)));
        }
        TruncatedSeries { coeffs: p }
    }

    /// Multiplies by `x^k`, dropping terms beyond the order.
    pub fn shift(&self, k: usize) -> Self {
        let order = self.order();
        let mut out = vec![F::zero(); order + 1];
        for i in 0..=order.saturating_sub(k) {
            if i + k <= order {
                out[i + k] = self.coeffs[i].clone();
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// Applies `a x d/dx + b` coefficientwise: `c_k -> (a k + b) c_k`.
    pub fn euler_op(&self, a: i64, b: i64) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().enumerate().map(|(k, c)| c.mul_ref(&F::from_i64(a * k as i64 + b))).collect(),
        }
    }

    /// Substitutes `x -> -x`.
    pub fn reflect(&self) -> Self {
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { c.neg_ref() } else { c.clone() })
                .collect(),
        }
    }

    /// Truncates to a lower order.
    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(F::to_f64).collect()
    }
}

impl<F: Field> Algebra for TruncatedSeries<F> {
    fn add(&self, other: &Self) -> Self {
        TruncatedSeries::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        TruncatedSeries::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        TruncatedSeries::mul(self, other)
    }
    fn inv(&self) -> Result<Self> {
        self.inverse()
    }
    fn scalar(&self, v: i64) -> Self {
        Self::constant(F::from_i64(v), self.order())
    }
}

/// Exact rational `p/q` helper.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}
