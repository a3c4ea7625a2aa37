//! Colored bipartite melonic graphs.
//!
//! Tree node `i` becomes a white vertex `2i` and a black vertex `2i + 1`.
//! In the open (2-point) form the external vertices are `I = 2n` and
//! `O = 2n + 1`, each of degree one. The closed form glues the two external
//! half-edges of the root into a single color-0 edge and is (D+1)-regular.

use std::fmt::Write as _;

use crate::tree::{MelonTree, NodeId};
use crate::word::Color;

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    White,
    Black,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: u32,
    pub v: u32,
    pub color: Color,
}

#[derive(Clone, Debug)]
pub struct MelonGraph {
    dim: usize,
    nodes: usize,
    closed: bool,
    edges: Vec<Edge>,
    /// `table[v * (D+1) + c]`: the neighbor of `v` along color `c`.
    table: Vec<u32>,
}

impl MelonGraph {
    pub fn build(tree: &MelonTree, closed: bool) -> MelonGraph {
        let dim = tree.dim();
        let n = tree.len();
        let (ext_in, ext_out) = (2 * n as u32, 2 * n as u32 + 1);
        let white = |i: usize| 2 * i as u32;
        let black = |i: usize| 2 * i as u32 + 1;

        let mut left = vec![NONE; n];
        let mut right = vec![NONE; n];
        if closed {
            right[0] = white(0);
        } else {
            left[0] = ext_in;
            right[0] = ext_out;
        }

        let mut edges = Vec::with_capacity((dim + 1) * n + 1);
        for i in 0..n {
            let v = NodeId(i as u32);
            let c = tree.color(v);
            if i > 0 {
                let p = tree.parent(v).unwrap().index();
                left[i] = black(p);
                right[i] = if c == tree.color(NodeId(p as u32)) { right[p] } else { white(p) };
            }
            if left[i] != NONE {
                edges.push(Edge { u: left[i], v: white(i), color: c });
            }
            for (j, slot) in tree.slot_row(v).enumerate() {
                if slot.is_some() {
                    continue;
                }
                let color = Color::from_raw(j as u8);
                if j == c.index() {
                    edges.push(Edge { u: black(i), v: right[i], color });
                } else {
                    edges.push(Edge { u: white(i), v: black(i), color });
                }
            }
        }

        let nv = if closed { 2 * n } else { 2 * n + 2 };
        let mut table = vec![NONE; nv * (dim + 1)];
        for e in &edges {
            table[e.u as usize * (dim + 1) + e.color.index()] = e.v;
            table[e.v as usize * (dim + 1) + e.color.index()] = e.u;
        }
        MelonGraph { dim, nodes: n, closed, edges, table }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn vertex_count(&self) -> usize {
        if self.closed {
            2 * self.nodes
        } else {
            2 * self.nodes + 2
        }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// External vertices `(I, O)` of the open form.
    pub fn externals(&self) -> Option<(usize, usize)> {
        (!self.closed).then_some((2 * self.nodes, 2 * self.nodes + 1))
    }

    pub fn parity(&self, v: usize) -> Parity {
        let black = if v >= 2 * self.nodes { v == 2 * self.nodes } else { v % 2 == 1 };
        if black {
            Parity::Black
        } else {
            Parity::White
        }
    }

    /// Neighbor of `v` along color `c`, if that edge exists.
    #[inline]
    pub fn neighbor(&self, v: usize, c: Color) -> Option<usize> {
        match self.table[v * (self.dim + 1) + c.index()] {
            NONE => None,
            u => Some(u as usize),
        }
    }

    /// Flat color table; every entry is valid on a closed graph.
    pub fn color_table(&self) -> &[u32] {
        &self.table
    }

    pub fn degree(&self, v: usize) -> usize {
        let w = self.dim + 1;
        self.table[v * w..v * w + w].iter().filter(|&&u| u != NONE).count()
    }

    /// Edge-list export: header `closed D` or `open D`, then `u v color` lines.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        let kind = if self.closed { "closed" } else { "open" };
        let _ = writeln!(s, "{kind} {}", self.dim);
        for e in &self.edges {
            let _ = writeln!(s, "{} {} {}", e.u, e.v, e.color.index());
        }
        s
    }
}
