//! Colored rooted (D+1)-ary trees.
//!
//! Nodes live in an arena. Each node has `D + 1` child slots indexed by
//! color; an empty slot stands for a leaf, so only internal nodes are stored.
//! A child placed in slot `c` carries color `c`. Node ids are assigned in
//! insertion order, which keeps every parent id below its children's ids.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::word::{check_dim, Color, ColoredWord};

const EMPTY: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    pub const ROOT: NodeId = NodeId(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MelonTree {
    dim: usize,
    colors: Vec<Color>,
    parents: Vec<u32>,
    slots: Vec<u32>,
}

impl MelonTree {
    /// The single elementary vertex of color 0 with all slots empty.
    pub fn elementary(dim: usize) -> Result<MelonTree> {
        check_dim(dim)?;
        Ok(MelonTree { dim, colors: vec![Color::ZERO], parents: vec![EMPTY], slots: vec![EMPTY; dim + 1] })
    }

    pub(crate) fn with_capacity(dim: usize, n: usize) -> Result<MelonTree> {
        let mut t = MelonTree::elementary(dim)?;
        t.colors.reserve(n.saturating_sub(1));
        t.parents.reserve(n.saturating_sub(1));
        t.slots.reserve((dim + 1) * n.saturating_sub(1));
        Ok(t)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of (internal) nodes.
    #[inline]
    pub fn len(&self) -> usize {
        self.colors.len()
    }

    /// Always false: a tree has at least its root.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn root(&self) -> NodeId {
        NodeId::ROOT
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> {
        (0..self.len() as u32).map(NodeId)
    }

    pub fn contains(&self, node: NodeId) -> bool {
        node.index() < self.len()
    }

    fn check_node(&self, node: NodeId) -> Result<()> {
        if self.contains(node) {
            Ok(())
        } else {
            Err(Error::NoSuchNode(node.index()))
        }
    }

    #[inline]
    pub fn color(&self, node: NodeId) -> Color {
        self.colors[node.index()]
    }

    #[inline]
    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        match self.parents[node.index()] {
            EMPTY => None,
            p => Some(NodeId(p)),
        }
    }

    #[inline]
    pub fn child(&self, node: NodeId, slot: Color) -> Option<NodeId> {
        match self.slots[node.index() * (self.dim + 1) + slot.index()] {
            EMPTY => None,
            c => Some(NodeId(c)),
        }
    }

    /// Children of `node` in slot order.
    pub fn children(&self, node: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let base = node.index() * (self.dim + 1);
        self.slots[base..base + self.dim + 1].iter().filter(|&&c| c != EMPTY).map(|&c| NodeId(c))
    }

    /// Raw slot row of `node`: `None` marks an empty slot (a leaf).
    pub fn slot_row(&self, node: NodeId) -> impl Iterator<Item = Option<NodeId>> + '_ {
        let base = node.index() * (self.dim + 1);
        self.slots[base..base + self.dim + 1].iter().map(|&c| if c == EMPTY { None } else { Some(NodeId(c)) })
    }

    /// Attaches a new elementary vertex in `slot` of `node` and returns its id.
    pub fn grow_at(&mut self, node: NodeId, slot: Color) -> Result<NodeId> {
        self.check_node(node)?;
        slot.check(self.dim)?;
        let idx = node.index() * (self.dim + 1) + slot.index();
        if self.slots[idx] != EMPTY {
            return Err(Error::SlotOccupied { node: node.index(), slot: slot.index() });
        }
        let id = self.len() as u32;
        self.slots[idx] = id;
        self.colors.push(slot);
        self.parents.push(node.0);
        self.slots.extend(std::iter::repeat_n(EMPTY, self.dim + 1));
        Ok(NodeId(id))
    }

    /// Distance from the root in the tree.
    pub fn tree_depth(&self, node: NodeId) -> usize {
        let mut d = 0;
        let mut cur = node;
        while let Some(p) = self.parent(cur) {
            d += 1;
            cur = p;
        }
        d
    }

    /// Tree depth of every node, indexed by node id.
    pub fn tree_depths(&self) -> Vec<u32> {
        let mut depth = vec![0u32; self.len()];
        for i in 1..self.len() {
            depth[i] = depth[self.parents[i] as usize] + 1;
        }
        depth
    }

    /// Slot colors along the path from the root down to `node`.
    pub fn path_letters(&self, node: NodeId) -> Vec<Color> {
        let mut letters = Vec::new();
        let mut cur = node;
        while let Some(p) = self.parent(cur) {
            letters.push(self.color(cur));
            cur = p;
        }
        letters.reverse();
        letters
    }

    pub fn word_of(&self, node: NodeId) -> Result<ColoredWord> {
        self.check_node(node)?;
        Ok(ColoredWord::rooted(self.path_letters(node)))
    }

    /// Follows the letters of `word` from the root.
    pub fn find(&self, word: &ColoredWord) -> Option<NodeId> {
        if word.root_letter() != Color::ZERO {
            return None;
        }
        let mut cur = self.root();
        for &c in word.letters() {
            if c.index() > self.dim {
                return None;
            }
            cur = self.child(cur, c)?;
        }
        Some(cur)
    }

    /// Nodes in dictionary order of their words (preorder, slots ascending).
    pub fn lex_order(&self) -> Vec<NodeId> {
        let mut order = Vec::with_capacity(self.len());
        let mut stack = vec![self.root()];
        while let Some(v) = stack.pop() {
            order.push(v);
            let base = v.index() * (self.dim + 1);
            for &c in self.slots[base..base + self.dim + 1].iter().rev() {
                if c != EMPTY {
                    stack.push(NodeId(c));
                }
            }
        }
        order
    }

    /// True when no node has a child in the slot of its own color.
    pub fn is_simple(&self) -> bool {
        self.nodes().all(|v| self.child(v, self.color(v)).is_none())
    }

    /// Contour walk of the tree with leaves removed.
    pub fn contour_walk(&self) -> ContourWalk {
        let mut values = Vec::with_capacity(2 * self.len() + 1);
        values.push(0);
        // (node, next slot to inspect)
        let mut stack: Vec<(NodeId, usize)> = vec![(self.root(), 0)];
        values.push(1);
        while let Some(top) = stack.last_mut() {
            let (v, next) = *top;
            let base = v.index() * (self.dim + 1);
            let found = (next..=self.dim).find(|&s| self.slots[base + s] != EMPTY);
            match found {
                Some(s) => {
                    top.1 = s + 1;
                    stack.push((NodeId(self.slots[base + s]), 0));
                    values.push(stack.len() as u32);
                }
                None => {
                    stack.pop();
                    values.push(stack.len() as u32);
                }
            }
        }
        ContourWalk { values }
    }

    /// One-line text form: `D n w1 ... wn` with words in lexicographic order.
    pub fn to_line(&self) -> String {
        let mut s = format!("{} {}", self.dim, self.len());
        for v in self.lex_order() {
            s.push(' ');
            s.push_str(&ColoredWord::rooted(self.path_letters(v)).compact());
        }
        s
    }

    /// Parses the output of [`MelonTree::to_line`].
    pub fn parse_line(line: &str) -> Result<MelonTree> {
        let mut it = line.split_whitespace();
        let mut next_num = |what: &str| -> Result<usize> {
            it.next()
                .ok_or_else(|| Error::Parse(format!("missing {what}")))?
                .parse()
                .map_err(|_| Error::Parse(format!("bad {what}")))
        };
        let dim = next_num("dimension")?;
        let n = next_num("node count")?;
        let words = it.map(ColoredWord::parse_compact).collect::<Result<Vec<_>>>()?;
        if words.len() != n {
            return Err(Error::Parse(format!("expected {n} words, found {}", words.len())));
        }
        MelonTree::from_words(dim, &words)
    }

    /// Builds a tree from node words; every proper prefix must appear earlier.
    pub fn from_words(dim: usize, words: &[ColoredWord]) -> Result<MelonTree> {
        let mut tree = MelonTree::with_capacity(dim, words.len())?;
        let mut ids: HashMap<&[Color], NodeId> = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            w.check(dim)?;
            if w.root_letter() != Color::ZERO {
                return Err(Error::Parse(format!("word {w} does not start with 0")));
            }
            if i == 0 {
                if !w.is_empty() {
                    return Err(Error::Parse("first word must be the root".into()));
                }
                ids.insert(w.letters(), tree.root());
                continue;
            }
            let (&last, head) = w.letters().split_last().ok_or_else(|| Error::Parse("duplicate root word".into()))?;
            let parent =
                *ids.get(head).ok_or_else(|| Error::Parse(format!("parent of {w} missing or out of order")))?;
            let id = tree.grow_at(parent, last).map_err(|_| Error::Parse(format!("duplicate word {w}")))?;
            ids.insert(w.letters(), id);
        }
        if words.is_empty() {
            return Err(Error::Parse("tree needs at least one word".into()));
        }
        Ok(tree)
    }
}

/// Excursion `0, f(v_1), ..., 0` of length `2n + 1` around the defoliated tree,
/// where each visited node contributes its tree depth plus one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContourWalk {
    values: Vec<u32>,
}

impl ContourWalk {
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn max(&self) -> u32 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// Checks the excursion shape: zero endpoints, ±1 steps, positive interior.
    pub fn is_excursion(&self) -> bool {
        let v = &self.values;
        v.len() >= 3
            && v.len() % 2 == 1
            && v[0] == 0
            && v[v.len() - 1] == 0
            && v.windows(2).all(|w| w[0].abs_diff(w[1]) == 1)
            && v[1..v.len() - 1].iter().all(|&x| x > 0)
    }

    /// Reconstructs the plane tree: parent of each node in preorder.
    pub fn decode(&self) -> Vec<Option<usize>> {
        let mut parents = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        for w in self.values.windows(2) {
            if w[1] > w[0] {
                parents.push(stack.last().copied());
                stack.push(parents.len() - 1);
            } else {
                stack.pop();
            }
        }
        parents
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: usize) -> Color {
        Color::new(v, 16).unwrap()
    }

    #[test]
    fn elementary_tree() {
        let t = MelonTree::elementary(3).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.slot_row(t.root()).filter(Option::is_none).count(), 4);
        assert_eq!(t.word_of(t.root()).unwrap().to_string(), "0;");
        assert!(MelonTree::elementary(1).is_err());
    }

    #[test]
    fn grow_and_words() {
        let mut t = MelonTree::elementary(3).unwrap();
        let a = t.grow_at(t.root(), c(2)).unwrap();
        assert_eq!(t.word_of(a).unwrap().to_string(), "0;2");
        assert_eq!(t.grow_at(t.root(), c(2)), Err(Error::SlotOccupied { node: 0, slot: 2 }));
        assert_eq!(t.grow_at(NodeId(9), c(0)), Err(Error::NoSuchNode(9)));
        assert!(t.grow_at(t.root(), c(4)).is_err());
        for s in [0, 1, 3] {
            t.grow_at(t.root(), c(s)).unwrap();
        }
        assert_eq!(t.len(), 5);
    }

    #[test]
    fn worked_branch() {
        let w: ColoredWord = "0;10132120312".parse().unwrap();
        let mut t = MelonTree::elementary(3).unwrap();
        let mut cur = t.root();
        for &l in w.letters() {
            cur = t.grow_at(cur, l).unwrap();
        }
        assert_eq!(t.len(), 12);
        assert_eq!(t.word_of(cur).unwrap(), w);
        assert_eq!(t.tree_depth(cur), 11);
        assert_eq!(t.find(&w), Some(cur));
    }

    #[test]
    fn lex_order_small() {
        let mut t = MelonTree::elementary(2).unwrap();
        let b = t.grow_at(t.root(), c(2)).unwrap();
        let a = t.grow_at(t.root(), c(0)).unwrap();
        assert_eq!(t.lex_order(), vec![t.root(), a, b]);
    }

    #[test]
    fn contour_small() {
        let mut t = MelonTree::elementary(2).unwrap();
        assert_eq!(t.contour_walk().values(), &[0, 1, 0]);
        t.grow_at(t.root(), c(1)).unwrap();
        let cw = t.contour_walk();
        assert_eq!(cw.values(), &[0, 1, 2, 1, 0]);
        assert!(cw.is_excursion());
        assert_eq!(cw.decode(), vec![None, Some(0)]);
    }

    #[test]
    fn line_round_trip() {
        let mut t = MelonTree::elementary(12).unwrap();
        let a = t.grow_at(t.root(), c(11)).unwrap();
        t.grow_at(a, c(2)).unwrap();
        t.grow_at(t.root(), c(0)).unwrap();
        let line = t.to_line();
        assert_eq!(line, "12 4 0 00 0[11] 0[11]2");
        let back = MelonTree::parse_line(&line).unwrap();
        assert_eq!(back.to_line(), line);
        assert!(MelonTree::parse_line("2 2 0 011").is_err());
        assert!(MelonTree::parse_line("2 3 0 01").is_err());
    }
}
