//! Graph access shared by the flow auditor and the oracles.

use alloc::vec;
use alloc::vec::Vec;

use crate::hanoi::HanoiGraph;
use crate::{Error, Result, Vertex};

/// Read-only adjacency.
pub trait Topology {
    fn vertex_count(&self) -> usize;

    fn for_each_neighbor(&self, v: Vertex, visit: &mut dyn FnMut(Vertex));

    fn is_edge(&self, u: Vertex, v: Vertex) -> bool {
        if u >= self.vertex_count() {
            return false;
        }
        let mut found = false;
        self.for_each_neighbor(u, &mut |w| found |= w == v);
        found
    }
}

impl Topology for HanoiGraph {
    fn vertex_count(&self) -> usize {
        HanoiGraph::vertex_count(self)
    }

    fn for_each_neighbor(&self, v: Vertex, visit: &mut dyn FnMut(Vertex)) {
        HanoiGraph::for_each_neighbor(self, v, visit)
    }

    fn is_edge(&self, u: Vertex, v: Vertex) -> bool {
        HanoiGraph::is_edge(self, u, v)
    }
}

/// Simple undirected graph on at most 64 vertices, one bitmask per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallGraph {
    adj: Vec<u64>,
}

impl SmallGraph {
    pub const MAX_VERTICES: usize = 64;

    pub fn new(vertex_count: usize) -> Self {
        assert!(vertex_count <= Self::MAX_VERTICES, "SmallGraph holds at most 64 vertices");
        SmallGraph { adj: vec![0; vertex_count] }
    }

    pub fn from_edges(vertex_count: usize, edges: &[(Vertex, Vertex)]) -> Self {
        let mut g = Self::new(vertex_count);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn complete(k: usize) -> Self {
        let mut g = Self::new(k);
        for u in 0..k {
            for v in u + 1..k {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// `K_{1,leaves}` with the center at index 0.
    pub fn star(leaves: usize) -> Self {
        let mut g = Self::new(leaves + 1);
        for v in 1..=leaves {
            g.add_edge(0, v);
        }
        g
    }

    pub fn path(k: usize) -> Self {
        let mut g = Self::new(k);
        for v in 1..k {
            g.add_edge(v - 1, v);
        }
        g
    }

    pub fn from_hanoi(g: &HanoiGraph) -> Result<Self> {
        let count = g.vertex_count();
        if count > Self::MAX_VERTICES {
            return Err(Error::BudgetExceeded {
                what: "bitmask graph",
                vertices: count,
                budget: Self::MAX_VERTICES,
            });
        }
        let mut out = Self::new(count);
        for v in 0..count {
            g.for_each_neighbor(v, |u| out.adj[v] |= 1 << u);
        }
        Ok(out)
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        assert!(u != v, "self-loops are not allowed");
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors_mask(&self, v: Vertex) -> u64 {
        self.adj[v]
    }

    /// Union of the neighborhoods of every vertex in `set`.
    pub fn neighborhood(&self, mut set: u64) -> u64 {
        let mut out = 0;
        while set != 0 {
            let v = set.trailing_zeros() as usize;
            set &= set - 1;
            out |= self.adj[v];
        }
        out
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn max_degree(&self) -> usize {
        (0..self.len()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.len()).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for u in 0..self.len() {
            let mut higher = self.adj[u] & !((2u64 << u) - 1);
            while higher != 0 {
                let v = higher.trailing_zeros() as usize;
                higher &= higher - 1;
                out.push((u, v));
            }
        }
        out
    }

    pub fn full_mask(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let mut reached = 1u64;
        loop {
            let next = reached | self.neighborhood(reached);
            if next == reached {
                return reached == self.full_mask();
            }
            reached = next;
        }
    }

    /// Number of edges with exactly one endpoint in `set`.
    pub fn cut_size(&self, set: u64) -> usize {
        let mut rest = set;
        let mut cut = 0;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            cut += (self.adj[v] & !set).count_ones() as usize;
        }
        cut
    }

    /// Vertices outside `set` with a neighbor inside it.
    pub fn outer_boundary(&self, set: u64) -> u64 {
        self.neighborhood(set) & !set
    }
}

impl Topology for SmallGraph {
    fn vertex_count(&self) -> usize {
        self.len()
    }

    fn for_each_neighbor(&self, v: Vertex, visit: &mut dyn FnMut(Vertex)) {
        let mut rest = self.adj[v];
        while rest != 0 {
            visit(rest.trailing_zeros() as usize);
            rest &= rest - 1;
        }
    }

    fn is_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.len() && v < self.len() && self.adj[u] >> v & 1 == 1
    }
}

/// Iterates the set bits of a mask as vertex indices, ascending.
pub fn mask_vertices(mut mask: u64) -> impl Iterator<Item = Vertex> {
    core::iter::from_fn(move || {
        (mask != 0).then(|| {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            v
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn hanoi_conversion_keeps_edges() {
        let h = HanoiGraph::new(3, 3).unwrap();
        let g = SmallGraph::from_hanoi(&h).unwrap();
        assert_eq!(g.edge_count(), h.edge_count());
        assert!(g.is_connected());
        assert_eq!(g.max_degree(), 3);
        assert!(SmallGraph::from_hanoi(&HanoiGraph::new(3, 4).unwrap()).is_err());
    }

    #[test]
    fn cut_and_boundary() {
        let g = SmallGraph::star(4);
        assert_eq!(g.cut_size(0b00110), 2);
        assert_eq!(g.outer_boundary(0b00110), 0b00001);
        assert_eq!(mask_vertices(0b10110).collect::<Vec<_>>(), vec![1, 2, 4]);
        assert!(!SmallGraph::new(2).is_connected());
    }
}
