//! Exact tree counts.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::Result;
use crate::word::check_dim;

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Number of `k`-ary trees with `n` internal nodes: `binom(kn+1, n) / (kn+1)`.
pub fn fuss_catalan(k: u64, n: u64) -> BigUint {
    let m = k * n + 1;
    binomial(m, n) / m
}

/// Number of colored rooted (D+1)-ary trees with `n` nodes.
pub fn count_colored_trees(dim: usize, n: u64) -> Result<BigUint> {
    check_dim(dim)?;
    Ok(fuss_catalan(dim as u64 + 1, n))
}

/// Number of simple melons with `p` nodes.
pub fn count_simple_melons(dim: usize, p: u64) -> Result<BigUint> {
    check_dim(dim)?;
    Ok(fuss_catalan(dim as u64, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 2), u(21));
        assert_eq!(binomial(13, 4), u(715));
        assert_eq!(binomial(3, 5), u(0));
        assert_eq!(binomial(60, 30), u(118264581564861424));
    }

    #[test]
    fn colored_tree_counts() {
        let d2: Vec<_> = (0..6).map(|n| count_colored_trees(2, n).unwrap()).collect();
        assert_eq!(d2, [1, 1, 3, 12, 55, 273].map(u));
        assert_eq!(count_colored_trees(3, 2).unwrap(), u(4));
        assert_eq!(count_colored_trees(3, 6).unwrap(), u(7084));
        assert!(count_colored_trees(1, 3).is_err());
    }

    #[test]
    fn simple_melon_counts() {
        assert_eq!(count_simple_melons(2, 3).unwrap(), u(5));
        assert_eq!(count_simple_melons(3, 2).unwrap(), u(3));
        assert_eq!(count_simple_melons(5, 0).unwrap(), u(1));
        assert_eq!(count_simple_melons(2, 6).unwrap(), u(132));
    }
}
