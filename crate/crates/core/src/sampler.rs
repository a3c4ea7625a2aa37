//! Uniform and Galton–Watson sampling of colored trees, plus exhaustive
//! enumeration for small sizes.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use num_rational::BigRational;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::count::{binomial, count_colored_trees, count_simple_melons};
use crate::error::{Error, Result};
use crate::series::{ratio, Field};
use crate::tree::{MelonTree, NodeId};
use crate::word::{check_dim, Color, ColoredWord};

/// Largest enumeration accepted by [`enumerate_trees`].
pub const ENUMERATION_BUDGET: u64 = 1_000_000;

/// Generator for replicate `stream` of experiment `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform random tree with exactly `n` nodes.
pub fn sample_uniform_tree(dim: usize, n: usize, seed: u64) -> Result<MelonTree> {
    sample_uniform_tree_with(dim, n, &mut stream_rng(seed, 0))
}

pub fn sample_uniform_tree_with<R: Rng + ?Sized>(dim: usize, n: usize, rng: &mut R) -> Result<MelonTree> {
    check_dim(dim)?;
    cycle_lemma_tree(dim, dim + 1, n, rng, |_, s| s)
}

/// Uniform random simple melon with `p` nodes.
pub fn sample_simple_melon(dim: usize, p: usize, seed: u64) -> Result<MelonTree> {
    sample_simple_melon_with(dim, p, &mut stream_rng(seed, 0))
}

pub fn sample_simple_melon_with<R: Rng + ?Sized>(dim: usize, p: usize, rng: &mut R) -> Result<MelonTree> {
    check_dim(dim)?;
    // the D admissible slots of a node of color c, in increasing order
    cycle_lemma_tree(dim, dim, p, rng, |c, s| if s < c { s } else { s + 1 })
}

/// Draws a random arrangement of `n` internal marks among `k n + 1` positions,
/// rotates it into the unique valid Łukasiewicz path and decodes it in
/// preorder. `slot_of(color, s)` maps the `s`-th child position of a node to
/// its slot color.
fn cycle_lemma_tree<R, S>(dim: usize, k: usize, n: usize, rng: &mut R, slot_of: S) -> Result<MelonTree>
where
    R: Rng + ?Sized,
    S: Fn(usize, usize) -> usize,
{
    if n == 0 {
        return Err(Error::InvalidArgument("tree size must be at least 1".into()));
    }
    let m = k * n + 1;
    let mut internal = vec![false; m];
    for i in index::sample(rng, m, n) {
        internal[i] = true;
    }
    let up = k as i64 - 1;
    let (mut sum, mut best, mut start) = (0i64, 0i64, 0usize);
    for (i, &b) in internal.iter().enumerate() {
        sum += if b { up } else { -1 };
        if sum < best {
            best = sum;
            start = i + 1;
        }
    }
    let start = start % m;

    let mut tree = MelonTree::with_capacity(dim, n)?;
    let mut stack: Vec<(NodeId, usize)> = vec![(tree.root(), 0)];
    debug_assert!(internal[start]);
    for step in 1..m {
        while stack.last().is_some_and(|&(_, s)| s == k) {
            stack.pop();
        }
        let top = stack.last_mut().expect("valid path never empties early");
        let (node, s) = *top;
        top.1 += 1;
        if internal[(start + step) % m] {
            let slot = slot_of(tree.color(node).index(), s);
            let child = tree.grow_at(node, Color::from_raw(slot as u8))?;
            stack.push((child, 0));
        }
    }
    Ok(tree)
}

/// Result of a capped Galton–Watson draw.
#[derive(Clone, Debug)]
pub enum GwOutcome {
    Tree(MelonTree),
    /// The realization grew past the cap.
    Overflow {
        cap: usize,
    },
}

impl GwOutcome {
    pub fn tree(self) -> Option<MelonTree> {
        match self {
            GwOutcome::Tree(t) => Some(t),
            GwOutcome::Overflow { .. } => None,
        }
    }
}

/// Critical Galton–Watson tree: every slot holds an elementary vertex with
/// probability `1/(D+1)`. The root is always present.
pub fn sample_gw_tree(dim: usize, seed: u64, cap: usize) -> Result<GwOutcome> {
    sample_gw_tree_with(dim, cap, &mut stream_rng(seed, 0))
}

pub fn sample_gw_tree_with<R: Rng + ?Sized>(dim: usize, cap: usize, rng: &mut R) -> Result<GwOutcome> {
    check_dim(dim)?;
    if cap == 0 {
        return Err(Error::InvalidArgument("cap must be at least 1".into()));
    }
    let mut tree = MelonTree::elementary(dim)?;
    let mut queue = VecDeque::from([tree.root()]);
    while let Some(v) = queue.pop_front() {
        for s in 0..=dim {
            if rng.random_range(0..=dim) == 0 {
                if tree.len() == cap {
                    return Ok(GwOutcome::Overflow { cap });
                }
                let child = tree.grow_at(v, Color::from_raw(s as u8))?;
                queue.push_back(child);
            }
        }
    }
    Ok(GwOutcome::Tree(tree))
}

/// Offspring distribution on `{0, 1, ...}` with exact weights.
#[derive(Clone, Debug, PartialEq)]
pub struct OffspringLaw {
    weights: Vec<BigRational>,
}

impl OffspringLaw {
    /// `D + 1` children with probability `1/(D+1)`, none otherwise.
    pub fn critical(dim: usize) -> Result<OffspringLaw> {
        check_dim(dim)?;
        let d = dim as i64;
        let mut weights = vec![BigRational::zero(); dim + 2];
        weights[0] = ratio(d, d + 1);
        weights[dim + 1] = ratio(1, d + 1);
        Ok(OffspringLaw { weights })
    }

    /// Child counts of the tree with leaves removed: binomial with `D + 1`
    /// trials of success probability `1/(D+1)`.
    pub fn defoliated(dim: usize) -> Result<OffspringLaw> {
        check_dim(dim)?;
        let trials = dim as u64 + 1;
        let p = ratio(1, trials as i64);
        let q = ratio(dim as i64, trials as i64);
        let weights = (0..=trials)
            .map(|k| {
                let c = BigRational::from_integer(binomial(trials, k).into());
                let mut w = c;
                for _ in 0..k {
                    w *= &p;
                }
                for _ in k..trials {
                    w *= &q;
                }
                w
            })
            .collect();
        Ok(OffspringLaw { weights })
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn probability(&self, k: usize) -> BigRational {
        self.weights.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn mean(&self) -> BigRational {
        self.weights
            .iter()
            .enumerate()
            .fold(BigRational::zero(), |acc, (k, w)| acc + w * BigRational::from_i64(k as i64))
    }

    pub fn variance(&self) -> BigRational {
        let mean = self.mean();
        let second = self
            .weights
            .iter()
            .enumerate()
            .fold(BigRational::zero(), |acc, (k, w)| acc + w * BigRational::from_i64((k * k) as i64));
        second - &mean * &mean
    }

    /// Draws one offspring count by inversion.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (k, w) in self.weights.iter().enumerate() {
            acc += w.to_f64();
            if u < acc {
                return k;
            }
        }
        self.weights.len() - 1
    }
}

type Shape = Vec<Vec<u8>>;

fn check_budget(count: BigUint) -> Result<()> {
    if count > BigUint::from(ENUMERATION_BUDGET) {
        Err(Error::TooLarge { count: count.to_string(), budget: ENUMERATION_BUDGET })
    } else {
        Ok(())
    }
}

/// Every tree with `n` nodes exactly once, ordered by sorted word list.
pub fn enumerate_trees(dim: usize, n: usize) -> Result<Vec<MelonTree>> {
    check_budget(count_colored_trees(dim, n as u64)?)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut memo = HashMap::new();
    let shapes = shapes_for(dim, n, None, &mut memo);
    finish(dim, shapes)
}

/// Every simple melon with `p` nodes exactly once.
pub fn enumerate_simple_melons(dim: usize, p: usize) -> Result<Vec<MelonTree>> {
    check_budget(count_simple_melons(dim, p as u64)?)?;
    if p == 0 {
        return Ok(Vec::new());
    }
    let mut memo = HashMap::new();
    let shapes = shapes_for(dim, p, Some(0), &mut memo);
    finish(dim, shapes)
}

/// Trees of `n` nodes as lists of relative paths. With `simple = Some(c)` the
/// root has color `c` and no node may use the slot of its own color.
fn shapes_for(
    dim: usize,
    n: usize,
    simple: Option<usize>,
    memo: &mut HashMap<(usize, Option<usize>), Vec<Shape>>,
) -> Vec<Shape> {
    if let Some(s) = memo.get(&(n, simple)) {
        return s.clone();
    }
    let slots: Vec<usize> = (0..=dim).filter(|&s| Some(s) != simple).collect();
    // distribute n - 1 nodes over the admissible slots, one slot at a time
    let mut by_used: Vec<Vec<Shape>> = vec![Vec::new(); n];
    by_used[0] = vec![vec![Vec::new()]];
    for &slot in &slots {
        let mut next: Vec<Vec<Shape>> = vec![Vec::new(); n];
        for used in 0..n {
            for base in &by_used[used] {
                next[used].push(base.clone());
                for m in 1..n - used {
                    let subs = shapes_for(dim, m, simple.map(|_| slot), memo);
                    for sub in &subs {
                        let mut t = base.clone();
                        t.extend(sub.iter().map(|w| {
                            let mut p = vec![slot as u8];
                            p.extend_from_slice(w);
                            p
                        }));
                        next[used + m].push(t);
                    }
                }
            }
        }
        by_used = next;
    }
    let out = std::mem::take(&mut by_used[n - 1]);
    memo.insert((n, simple), out.clone());
    out
}

fn finish(dim: usize, shapes: Vec<Shape>) -> Result<Vec<MelonTree>> {
    let mut sorted: Vec<Shape> = shapes
        .into_iter()
        .map(|mut s| {
            s.sort();
            s
        })
        .collect();
    sorted.sort();
    sorted
        .iter()
        .map(|s| {
            let words: Vec<ColoredWord> =
                s.iter().map(|w| ColoredWord::rooted(w.iter().map(|&c| Color::from_raw(c)).collect())).collect();
            MelonTree::from_words(dim, &words)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_node_samples() {
        for d in 2..=5 {
            assert_eq!(sample_uniform_tree(d, 1, 7).unwrap().len(), 1);
            assert_eq!(sample_simple_melon(d, 1, 7).unwrap().len(), 1);
        }
        assert!(sample_uniform_tree(2, 0, 1).is_err());
    }

    #[test]
    fn sizes_and_simplicity() {
        for seed in 0..50 {
            let t = sample_uniform_tree(3, 40, seed).unwrap();
            assert_eq!(t.len(), 40);
            let s = sample_simple_melon(3, 40, seed).unwrap();
            assert_eq!(s.len(), 40);
            assert!(s.is_simple());
        }
    }

    #[test]
    fn deterministic_streams() {
        let a = sample_uniform_tree(2, 100, 42).unwrap();
        let b = sample_uniform_tree(2, 100, 42).unwrap();
        assert_eq!(a.to_line(), b.to_line());
        let c = sample_uniform_tree_with(2, 100, &mut stream_rng(42, 1)).unwrap();
        assert_ne!(a.to_line(), c.to_line());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_trees(3, 2).unwrap().len(), 4);
        assert_eq!(enumerate_trees(2, 1).unwrap().len(), 1);
        assert_eq!(enumerate_trees(2, 4).unwrap().len(), 55);
        assert_eq!(enumerate_simple_melons(2, 3).unwrap().len(), 5);
        assert_eq!(enumerate_simple_melons(3, 2).unwrap().len(), 3);
        assert!(matches!(enumerate_trees(3, 12), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn offspring_laws() {
        for d in 2..=6 {
            let crit = OffspringLaw::critical(d).unwrap();
            assert_eq!(crit.mean(), ratio(1, 1));
            let def = OffspringLaw::defoliated(d).unwrap();
            assert_eq!(def.weights().iter().sum::<BigRational>(), ratio(1, 1));
            assert_eq!(def.mean(), ratio(1, 1));
            assert_eq!(def.variance(), ratio(d as i64, d as i64 + 1));
        }
    }

    #[test]
    fn gw_overflow() {
        let mut overflowed = false;
        for seed in 0..200 {
            match sample_gw_tree(2, seed, 5).unwrap() {
                GwOutcome::Tree(t) => assert!(t.len() <= 5),
                GwOutcome::Overflow { cap } => {
                    assert_eq!(cap, 5);
                    overflowed = true;
                }
            }
        }
        assert!(overflowed);
    }
}
