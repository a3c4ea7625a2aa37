//! Word-based depth in the melonic ball, with a BFS oracle.

use std::fmt;

use crate::ball::BallSkeleton;
use crate::error::{Error, Result};
use crate::tree::{MelonTree, NodeId};
use crate::word::{check_dim, Color, ColoredWord};

/// Depths of the `D + 1` cell vertices around the last inserted vertex,
/// indexed by color.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DistanceArray {
    entries: Vec<u32>,
}

impl DistanceArray {
    /// `0` at the root letter, `1` at every other color.
    pub fn initial(dim: usize, root: Color) -> Result<DistanceArray> {
        check_dim(dim)?;
        root.check(dim)?;
        let mut entries = vec![1; dim + 1];
        entries[root.index()] = 0;
        Ok(DistanceArray { entries })
    }

    pub fn from_entries(entries: Vec<u32>) -> Result<DistanceArray> {
        check_dim(entries.len().saturating_sub(1))?;
        Ok(DistanceArray { entries })
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn get(&self, c: Color) -> u32 {
        self.entries[c.index()]
    }

    /// Replaces slot `j` by one plus the minimum of the other slots.
    pub fn update(&self, j: Color) -> Result<DistanceArray> {
        let mut next = self.clone();
        next.update_in_place(j)?;
        Ok(next)
    }

    pub fn update_in_place(&mut self, j: Color) -> Result<()> {
        j.check(self.dim())?;
        apply(&mut self.entries, j.index());
        Ok(())
    }
}

impl fmt::Display for DistanceArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[inline]
fn apply(entries: &mut [u32], j: usize) {
    let mut m = u32::MAX;
    for (k, &e) in entries.iter().enumerate() {
        if k != j && e < m {
            m = e;
        }
    }
    entries[j] = m + 1;
}

/// Depth of the vertex labelled by `word`, plus the array after every prefix
/// (the first entry is the initial array).
pub fn depth_via_array(word: &ColoredWord, dim: usize) -> Result<(usize, Vec<DistanceArray>)> {
    word.check(dim)?;
    let mut arr = DistanceArray::initial(dim, word.root_letter())?;
    let mut trace = Vec::with_capacity(word.len() + 1);
    trace.push(arr.clone());
    for &c in word.letters() {
        apply(&mut arr.entries, c.index());
        trace.push(arr.clone());
    }
    let depth = word.letters().last().map_or(0, |&c| arr.get(c)) as usize;
    Ok((depth, trace))
}

/// Depth from a root letter and letter slice, without the trace.
pub fn lambda(dim: usize, root: Color, letters: &[Color]) -> Result<usize> {
    check_dim(dim)?;
    root.check(dim)?;
    let mut entries = [1u32; crate::word::MAX_DIM + 1];
    let entries = &mut entries[..=dim];
    entries[root.index()] = 0;
    for &c in letters {
        c.check(dim)?;
        apply(entries, c.index());
    }
    Ok(letters.last().map_or(0, |&c| entries[c.index()]) as usize)
}

/// Depth after every prefix of the word (length `len + 1`).
pub fn depth_profile(word: &ColoredWord, dim: usize) -> Result<Vec<usize>> {
    let (_, trace) = depth_via_array(word, dim)?;
    let mut out = vec![0];
    for (arr, &c) in trace[1..].iter().zip(word.letters()) {
        out.push(arr.get(c) as usize);
    }
    Ok(out)
}

/// Partition of `root letter + letters` into adjacent blocks `τ_0 τ_1 ...`.
/// `starts[r]` is the position where block `r` begins in the full sequence
/// (the root letter sits at position 0); `len` is the full sequence length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubwordDivision {
    starts: Vec<usize>,
    len: usize,
}

impl SubwordDivision {
    pub fn starts(&self) -> &[usize] {
        &self.starts
    }

    pub fn block_count(&self) -> usize {
        self.starts.len()
    }

    /// Blocks as position ranges into the full sequence.
    pub fn ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::with_capacity(self.starts.len());
        for (i, &s) in self.starts.iter().enumerate() {
            let e = self.starts.get(i + 1).copied().unwrap_or(self.len);
            out.push(s..e);
        }
        out
    }

    /// Renders the division as `(0)(1)(013)...`.
    pub fn render(&self, word: &ColoredWord) -> String {
        let mut full = vec![word.root_letter()];
        full.extend_from_slice(word.letters());
        let mut s = String::new();
        for r in self.ranges() {
            s.push('(');
            for c in &full[r] {
                s.push_str(&c.to_string());
            }
            s.push(')');
        }
        s
    }
}

/// Shared block scanner. With `lagged` false a block closes just before the
/// letter that would complete the alphabet; with `lagged` true the completing
/// letter stays inside and the next block opens one letter later.
fn scan_blocks(word: &ColoredWord, dim: usize, lagged: bool) -> Result<SubwordDivision> {
    check_dim(dim)?;
    word.check(dim)?;
    let letters = word.letters();
    let len = letters.len() + 1;
    let mut starts = vec![0];
    if letters.is_empty() {
        return Ok(SubwordDivision { starts, len });
    }
    starts.push(1);
    let root = word.root_letter();
    let mut i = match letters.iter().position(|&c| c == root) {
        Some(p) => p,
        None => return Ok(SubwordDivision { starts, len }),
    };
    // letters[i] opens block 2
    starts.push(i + 1);
    let full = (1u32 << (dim + 1)) - 1;
    let mut seen = 0u32;
    while i < letters.len() {
        let bit = 1u32 << letters[i].index();
        if lagged {
            if seen == full {
                starts.push(i + 1);
                seen = 0;
            }
            seen |= bit;
        } else {
            if seen | bit == full {
                starts.push(i + 1);
                seen = 0;
            }
            seen |= bit;
        }
        i += 1;
    }
    Ok(SubwordDivision { starts, len })
}

/// Depth as the number of sub-word blocks after the root letter.
pub fn depth_via_subwords(word: &ColoredWord, dim: usize) -> Result<(usize, SubwordDivision)> {
    let div = scan_blocks(word, dim, false)?;
    Ok((div.block_count() - 1, div))
}

/// Stack depth: the increment fires on the letter after a completed alphabet.
/// Only `D = 2` has reference values; other dimensions use the same rule.
pub fn stack_depth(word: &ColoredWord, dim: usize) -> Result<usize> {
    Ok(scan_blocks(word, dim, true)?.block_count() - 1)
}

/// Stack depth after every prefix (length `len + 1`).
pub fn stack_depth_profile(word: &ColoredWord, dim: usize) -> Result<Vec<usize>> {
    let div = scan_blocks(word, dim, true)?;
    let mut out = Vec::with_capacity(word.len() + 1);
    let mut r = 0;
    for pos in 0..=word.len() {
        while r + 1 < div.starts.len() && div.starts[r + 1] <= pos {
            r += 1;
        }
        out.push(r);
    }
    Ok(out)
}

/// Exact graph distances from the root vertex of the skeleton.
pub fn bfs_depths(skeleton: &BallSkeleton) -> Vec<u32> {
    skeleton.bfs_distances(skeleton.root_vertex())
}

/// Ball depth of every tree node via distance arrays, computed top-down.
pub fn ball_depths(tree: &MelonTree) -> Vec<u32> {
    let w = tree.dim() + 1;
    let n = tree.len();
    let mut arrays = vec![1u32; n * w];
    arrays[0] = 0;
    let mut depth = vec![0u32; n];
    for (i, d) in depth.iter_mut().enumerate().skip(1) {
        let v = NodeId(i as u32);
        let p = tree.parent(v).unwrap().index();
        let j = tree.color(v).index();
        let (before, after) = arrays.split_at_mut(i * w);
        let row = &mut after[..w];
        row.copy_from_slice(&before[p * w..p * w + w]);
        apply(row, j);
        *d = row[j];
    }
    depth
}

/// Distance estimate between two tree vertices and a bracket for the true
/// skeleton distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairBracket {
    pub estimate: usize,
    pub lower: usize,
    pub upper: usize,
    /// Set when one node is an ancestor of the other; the estimate is then
    /// the exact distance.
    pub exact: bool,
}

impl PairBracket {
    pub fn contains(&self, d: usize) -> bool {
        self.lower <= d && d <= self.upper
    }
}

pub fn pair_distance_bracket(tree: &MelonTree, a: NodeId, b: NodeId) -> Result<PairBracket> {
    for v in [a, b] {
        if !tree.contains(v) {
            return Err(Error::NoSuchNode(v.index()));
        }
    }
    if a == b {
        return Err(Error::ZeroDistance);
    }
    let dim = tree.dim();
    let mut pa = tree.path_letters(a);
    let mut pb = tree.path_letters(b);
    let common = pa.iter().zip(&pb).take_while(|(x, y)| x == y).count();
    // node at the end of the common prefix
    let mut lca = tree.root();
    for &c in &pa[..common] {
        lca = tree.child(lca, c).unwrap();
    }
    if common == pa.len() || common == pb.len() {
        let (anc, rest) = if common == pa.len() { (lca, &pb[common..]) } else { (lca, &pa[common..]) };
        let d = lambda(dim, tree.color(anc), rest)?;
        return Ok(PairBracket { estimate: d, lower: d, upper: d, exact: true });
    }
    let ua = pa.split_off(common);
    let ub = pb.split_off(common);
    let est = lambda(dim, ua[0], &ua[1..])? + lambda(dim, ub[0], &ub[1..])?;
    Ok(PairBracket { estimate: est, lower: est.saturating_sub(2).max(1), upper: est + 6, exact: false })
}
