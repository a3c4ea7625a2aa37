//! 1-skeleton of the melonic D-ball grown from a tree.
//!
//! Vertex `i < n` is the vertex inserted for tree node `i` (the root vertex is
//! 0). The `D` boundary vertices of the initial cell follow: color `c` lives
//! at `n + c - 1`. Each tree node records a frame, the `D + 1` vertices of its
//! cell ordered by color.

use std::collections::VecDeque;

use crate::tree::{MelonTree, NodeId};
use crate::word::Color;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexKind {
    Internal,
    Boundary,
}

#[derive(Clone, Debug)]
pub struct BallSkeleton {
    dim: usize,
    nodes: usize,
    colors: Vec<Color>,
    offsets: Vec<u32>,
    targets: Vec<u32>,
    frames: Vec<u32>,
}

impl BallSkeleton {
    pub fn build(tree: &MelonTree) -> BallSkeleton {
        let dim = tree.dim();
        let n = tree.len();
        let nv = n + dim;
        let w = dim + 1;

        let mut colors = Vec::with_capacity(nv);
        colors.extend(tree.nodes().map(|v| tree.color(v)));
        colors.extend((1..=dim).map(|c| Color::from_raw(c as u8)));

        let mut frames = vec![0u32; n * w];
        for (c, f) in frames[1..w].iter_mut().enumerate() {
            *f = (n + c) as u32;
        }

        let mut edges: Vec<(u32, u32)> = Vec::with_capacity(dim * (dim + 1) / 2 + dim * (n - 1));
        for a in 0..w {
            for b in a + 1..w {
                edges.push((frames[a], frames[b]));
            }
        }
        for i in 1..n {
            let v = NodeId(i as u32);
            let p = tree.parent(v).expect("non-root node has a parent").index();
            let j = tree.color(v).index();
            let (before, after) = frames.split_at_mut(i * w);
            let parent_frame = &before[p * w..p * w + w];
            let frame = &mut after[..w];
            frame.copy_from_slice(parent_frame);
            frame[j] = i as u32;
            for (k, &u) in parent_frame.iter().enumerate() {
                if k != j {
                    edges.push((u, i as u32));
                }
            }
        }

        let mut degree = vec![0u32; nv + 1];
        for &(a, b) in &edges {
            degree[a as usize + 1] += 1;
            degree[b as usize + 1] += 1;
        }
        for i in 0..nv {
            degree[i + 1] += degree[i];
        }
        let offsets = degree;
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; 2 * edges.len()];
        for &(a, b) in &edges {
            targets[fill[a as usize] as usize] = b;
            fill[a as usize] += 1;
            targets[fill[b as usize] as usize] = a;
            fill[b as usize] += 1;
        }

        BallSkeleton { dim, nodes: n, colors, offsets, targets, frames }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn root_vertex(&self) -> usize {
        0
    }

    /// Skeleton vertex created for a tree node.
    pub fn vertex_of(&self, node: NodeId) -> usize {
        node.index()
    }

    pub fn color(&self, v: usize) -> Color {
        self.colors[v]
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        if v < self.nodes {
            VertexKind::Internal
        } else {
            VertexKind::Boundary
        }
    }

    pub fn boundary_vertices(&self) -> std::ops::Range<usize> {
        self.nodes..self.vertex_count()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    /// Cell vertices of a tree node, indexed by color.
    pub fn frame(&self, node: NodeId) -> &[u32] {
        let w = self.dim + 1;
        &self.frames[node.index() * w..node.index() * w + w]
    }

    /// Breadth-first distances from `source` to every vertex.
    pub fn bfs_distances(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            for &u in self.neighbors(v) {
                if dist[u as usize] == u32::MAX {
                    dist[u as usize] = dist[v] + 1;
                    queue.push_back(u as usize);
                }
            }
        }
        dist
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_cell_is_complete() {
        let t = MelonTree::elementary(3).unwrap();
        let s = BallSkeleton::build(&t);
        assert_eq!(s.vertex_count(), 4);
        assert_eq!(s.edge_count(), 6);
        for v in 0..4 {
            assert_eq!(s.neighbors(v).len(), 3);
        }
        assert_eq!(s.boundary_vertices().count(), 3);
    }

    #[test]
    fn insertion_adds_d_edges() {
        let mut t = MelonTree::elementary(2).unwrap();
        let a = t.grow_at(t.root(), Color::from_raw(0)).unwrap();
        let s = BallSkeleton::build(&t);
        assert_eq!(s.vertex_count(), 4);
        assert_eq!(s.edge_count(), 3 + 2);
        // slot 0 of the root frame is replaced: the new vertex sees both boundary vertices
        let mut nb = s.neighbors(s.vertex_of(a)).to_vec();
        nb.sort();
        assert_eq!(nb, vec![2, 3]);
        assert_eq!(s.frame(a), &[1, 2, 3]);
        assert_eq!(s.bfs_distances(0), vec![0, 2, 1, 1]);
    }
}
