//! Configurations, legal moves and the recursive structure of `H_p^n`.
//!
//! A subgraph in the recursive partition is a [`SubgraphHandle`]: the largest
//! `n - m` discs are pinned, the smallest `m` discs are free. Under the
//! little-endian codec the pinned discs are the high digits, so a handle's
//! vertex set is the contiguous range `offset..offset + p^m`.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::{Error, Result, Vertex};

/// Default vertex budget for materialized adjacency lists.
pub const DEFAULT_CACHE_BUDGET: usize = 1_000_000;

/// Disc-to-peg assignment. Entry `k` (0-based) is the peg label in `1..=p`
/// holding disc `k + 1`; disc 1 is the smallest.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pegs: Vec<usize>,
}

impl Configuration {
    pub fn new(pegs: Vec<usize>) -> Self {
        Configuration { pegs }
    }

    pub fn pegs(&self) -> &[usize] {
        &self.pegs
    }

    pub fn disc_count(&self) -> usize {
        self.pegs.len()
    }

    pub fn from_index(index: Vertex, p: usize, n: usize) -> Result<Self> {
        let count = checked_pow(p, n).ok_or(Error::TooLarge { p, n })?;
        if index >= count {
            return Err(Error::IndexOutOfRange { index, vertex_count: count });
        }
        let mut rest = index;
        let pegs = (0..n)
            .map(|_| {
                let digit = rest % p;
                rest /= p;
                digit + 1
            })
            .collect();
        Ok(Configuration { pegs })
    }
}

/// `index = sum_k (peg_k - 1) * p^(k-1)`; disc 1 is the least significant digit.
pub fn config_to_index(config: &Configuration, p: usize) -> Result<Vertex> {
    let mut index: usize = 0;
    let mut weight: usize = 1;
    for (k, &peg) in config.pegs.iter().enumerate() {
        if peg == 0 || peg > p {
            return Err(Error::InvalidConfiguration { disc: k + 1, peg, p });
        }
        index = (peg - 1)
            .checked_mul(weight)
            .and_then(|d| index.checked_add(d))
            .ok_or(Error::TooLarge { p, n: config.pegs.len() })?;
        if k + 1 < config.pegs.len() {
            weight = weight
                .checked_mul(p)
                .ok_or(Error::TooLarge { p, n: config.pegs.len() })?;
        }
    }
    Ok(index)
}

pub fn index_to_config(index: Vertex, p: usize, n: usize) -> Result<Configuration> {
    Configuration::from_index(index, p, n)
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub(crate) fn pow(base: usize, exp: usize) -> usize {
    checked_pow(base, exp).expect("power overflows usize")
}

fn binomial2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// Calls `visit` with every neighbor of `v` in `H_p^n`, in increasing
/// (source peg, target peg) order.
///
/// The top disc of a peg is the smallest disc on it; a move takes the top
/// disc of one peg onto a peg that is empty or whose top disc is larger.
pub(crate) fn for_each_neighbor(p: usize, n: usize, v: Vertex, mut visit: impl FnMut(Vertex)) {
    // top[peg] = (disc, weight) of the smallest disc on that peg
    let mut top = [(usize::MAX, 0usize); 64];
    let top = &mut top[..p.min(64)];
    debug_assert!(p <= 64);
    let mut rest = v;
    let mut weight = 1;
    for disc in 0..n {
        let peg = rest % p;
        rest /= p;
        if top[peg].0 == usize::MAX {
            top[peg] = (disc, weight);
        }
        weight = weight.wrapping_mul(p);
    }
    for (from, &(disc, weight)) in top.iter().enumerate() {
        if disc == usize::MAX {
            continue;
        }
        for (to, &(other, _)) in top.iter().enumerate() {
            if to == from || other < disc {
                continue;
            }
            visit(if to > from {
                v + (to - from) * weight
            } else {
                v - (from - to) * weight
            });
        }
    }
}

/// The Hanoi graph `H_p^n` with on-demand (or optionally cached) adjacency.
#[derive(Debug, Clone)]
pub struct HanoiGraph {
    p: usize,
    n: usize,
    vertex_count: usize,
    cache: Option<Vec<Vec<Vertex>>>,
}

impl HanoiGraph {
    pub fn new(p: usize, n: usize) -> Result<Self> {
        if p < 3 || n < 1 || p > 64 {
            return Err(Error::InvalidParameters { p, n });
        }
        let vertex_count = checked_pow(p, n).ok_or(Error::TooLarge { p, n })?;
        Ok(HanoiGraph { p, n, vertex_count, cache: None })
    }

    /// Materializes adjacency lists, refusing graphs above `budget` vertices.
    pub fn with_cached_adjacency(mut self, budget: usize) -> Result<Self> {
        if self.vertex_count > budget {
            return Err(Error::BudgetExceeded {
                what: "adjacency cache",
                vertices: self.vertex_count,
                budget,
            });
        }
        let lists = (0..self.vertex_count).map(|v| self.compute_neighbors(v)).collect();
        self.cache = Some(lists);
        Ok(self)
    }

    pub fn is_cached(&self) -> bool {
        self.cache.is_some()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn config(&self, v: Vertex) -> Result<Configuration> {
        Configuration::from_index(v, self.p, self.n)
    }

    pub fn index(&self, config: &Configuration) -> Result<Vertex> {
        if config.disc_count() != self.n {
            return Err(Error::InvalidParameters { p: self.p, n: config.disc_count() });
        }
        config_to_index(config, self.p)
    }

    fn compute_neighbors(&self, v: Vertex) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(binomial2(self.p));
        for_each_neighbor(self.p, self.n, v, |u| out.push(u));
        out.sort_unstable();
        out
    }

    /// Neighbor indices of `v`, sorted ascending.
    pub fn neighbor_indices(&self, v: Vertex) -> Vec<Vertex> {
        match &self.cache {
            Some(lists) => lists[v].clone(),
            None => self.compute_neighbors(v),
        }
    }

    pub fn for_each_neighbor(&self, v: Vertex, visit: impl FnMut(Vertex)) {
        match &self.cache {
            Some(lists) => lists[v].iter().copied().for_each(visit),
            None => for_each_neighbor(self.p, self.n, v, visit),
        }
    }

    /// Configurations one legal move away from `v`.
    pub fn neighbors(&self, v: &Configuration) -> Result<Vec<Configuration>> {
        let index = self.index(v)?;
        self.neighbor_indices(index)
            .into_iter()
            .map(|u| self.config(u))
            .collect()
    }

    pub fn is_edge(&self, u: Vertex, v: Vertex) -> bool {
        if u >= self.vertex_count || v >= self.vertex_count || u == v {
            return false;
        }
        let mut found = false;
        self.for_each_neighbor(u, |w| found |= w == v);
        found
    }

    pub fn degree(&self, v: Vertex) -> usize {
        let mut d = 0;
        self.for_each_neighbor(v, |_| d += 1);
        d
    }

    pub fn empty_pegs(&self, v: Vertex) -> usize {
        let mut used = 0u64;
        let mut rest = v;
        for _ in 0..self.n {
            used |= 1 << (rest % self.p);
            rest /= self.p;
        }
        self.p - used.count_ones() as usize
    }

    /// `C(p,2) - C(e,2)` where `e` counts empty pegs: every unordered peg pair
    /// with a nonempty peg admits exactly one move.
    pub fn degree_formula(&self, v: Vertex) -> usize {
        binomial2(self.p) - binomial2(self.empty_pegs(v))
    }

    pub fn max_degree(&self) -> usize {
        binomial2(self.p)
    }

    /// `E_n = p E_{n-1} + C(p,2) (p-2)^{n-1}`, `E_0 = 0`.
    pub fn edge_count(&self) -> usize {
        let mut edges = 0usize;
        for level in 1..=self.n {
            edges = self.p * edges + binomial2(self.p) * pow(self.p - 2, level - 1);
        }
        edges
    }

    /// Edge count by enumerating every vertex's neighbors.
    pub fn edge_count_brute_force(&self) -> usize {
        (0..self.vertex_count).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            self.for_each_neighbor(v, |u| {
                if !seen[u] {
                    seen[u] = true;
                    reached += 1;
                    queue.push_back(u);
                }
            });
        }
        reached == self.vertex_count
    }

    /// Handle covering the whole graph.
    pub fn root(&self) -> SubgraphHandle {
        SubgraphHandle { p: self.p, n: self.n, m: self.n, offset: 0 }
    }
}

/// An induced copy of `H_p^m` inside `H_p^n`, pinned by a suffix of the
/// largest discs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubgraphHandle {
    p: usize,
    n: usize,
    m: usize,
    offset: Vertex,
}

impl SubgraphHandle {
    pub fn p(&self) -> usize {
        self.p
    }

    /// Disc count of the parent graph.
    pub fn parent_discs(&self) -> usize {
        self.n
    }

    /// Number of free discs; the handle induces a copy of `H_p^m`.
    pub fn free_discs(&self) -> usize {
        self.m
    }

    pub fn offset(&self) -> Vertex {
        self.offset
    }

    pub fn vertex_count(&self) -> usize {
        pow(self.p, self.m)
    }

    pub fn vertices(&self) -> Range<Vertex> {
        self.offset..self.offset + self.vertex_count()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices().contains(&v)
    }

    /// `(disc, peg)` pairs (1-based) pinned by this handle, largest disc last.
    pub fn fixed_suffix(&self) -> Vec<(usize, usize)> {
        let mut rest = self.offset / pow(self.p, self.m);
        (self.m..self.n)
            .map(|disc| {
                let peg = rest % self.p;
                rest /= self.p;
                (disc + 1, peg + 1)
            })
            .collect()
    }

    /// Peg (1-based) of the smallest pinned disc: the index of this handle
    /// among its siblings. `None` for the root.
    pub fn peg(&self) -> Option<usize> {
        (self.m < self.n).then(|| (self.offset / pow(self.p, self.m)) % self.p + 1)
    }

    fn parent_offset(&self) -> Option<Vertex> {
        let peg = self.peg()?;
        Some(self.offset - (peg - 1) * pow(self.p, self.m))
    }

    pub fn is_sibling_of(&self, other: &SubgraphHandle) -> bool {
        self.p == other.p
            && self.n == other.n
            && self.m == other.m
            && self.offset != other.offset
            && self.parent_offset().is_some()
            && self.parent_offset() == other.parent_offset()
    }

    /// The standalone graph this handle is isomorphic to.
    pub fn isomorphic_graph(&self) -> Result<HanoiGraph> {
        HanoiGraph::new(self.p, self.m)
    }

    /// Child whose largest free disc sits on `peg` (1-based).
    pub fn child(&self, peg: usize) -> Result<SubgraphHandle> {
        if self.m == 0 {
            return Err(Error::CannotPartition);
        }
        if peg == 0 || peg > self.p {
            return Err(Error::InvalidConfiguration { disc: self.m, peg, p: self.p });
        }
        let m = self.m - 1;
        Ok(SubgraphHandle {
            p: self.p,
            n: self.n,
            m,
            offset: self.offset + (peg - 1) * pow(self.p, m),
        })
    }

    /// The `p` children obtained by pinning the largest free disc, in peg order.
    pub fn partition_by_largest(&self) -> Result<Vec<SubgraphHandle>> {
        (1..=self.p).map(|peg| self.child(peg)).collect()
    }

    /// Vertices whose free discs avoid pegs `i` and `j`.
    pub fn facet(&self, i: usize, j: usize) -> Result<Facet> {
        if i == j || i == 0 || j == 0 || i > self.p || j > self.p {
            return Err(Error::InvalidFacet { i, j, p: self.p });
        }
        let allowed: Vec<usize> = (0..self.p).filter(|&d| d != i - 1 && d != j - 1).collect();
        let radix = allowed.len();
        let count = pow(radix, self.m);
        let mut vertices = Vec::with_capacity(count);
        for code in 0..count {
            let mut rest = code;
            let mut weight = 1;
            let mut local = 0;
            for _ in 0..self.m {
                local += allowed[rest % radix] * weight;
                rest /= radix;
                weight *= self.p;
            }
            vertices.push(self.offset + local);
        }
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Ok(Facet { owner: *self, pegs: (i.min(j), i.max(j)), vertices })
    }

    /// Vertex of `other` matched to `v` across the sibling boundary: the
    /// largest free disc of the parent moves between the two pegs.
    pub fn matched_vertex(&self, other: &SubgraphHandle, v: Vertex) -> Vertex {
        v - self.offset + other.offset
    }

    /// Boundary between two siblings, found by scanning every vertex of
    /// `self` for neighbors in `other`.
    pub fn boundary(&self, other: &SubgraphHandle) -> Result<Boundary> {
        if !self.is_sibling_of(other) {
            return Err(Error::NotSiblings);
        }
        let mut edges = Vec::new();
        for u in self.vertices() {
            for_each_neighbor(self.p, self.n, u, |v| {
                if other.contains(v) {
                    edges.push((u, v));
                }
            });
        }
        edges.sort_unstable();
        let mut near: Vec<Vertex> = edges.iter().map(|e| e.0).collect();
        near.dedup();
        let mut far: Vec<Vertex> = edges.iter().map(|e| e.1).collect();
        far.sort_unstable();
        far.dedup();
        Ok(Boundary { near, far, edges })
    }
}

/// `F_ij(H)`: configurations of the owner with no free disc on peg `i` or `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    owner: SubgraphHandle,
    pegs: (usize, usize),
    vertices: Vec<Vertex>,
}

impl Facet {
    pub fn owner(&self) -> &SubgraphHandle {
        &self.owner
    }

    /// Excluded pegs, smaller first.
    pub fn excluded_pegs(&self) -> (usize, usize) {
        self.pegs
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Restriction to a child of the owner; `None` when the child's peg is
    /// one of the excluded pegs (the restriction is empty).
    pub fn restrict(&self, child: &SubgraphHandle) -> Result<Option<Facet>> {
        if child.m + 1 != self.owner.m || child.parent_offset() != Some(self.owner.offset) {
            return Err(Error::FacetOwnerMismatch);
        }
        let peg = child.peg().ok_or(Error::FacetOwnerMismatch)?;
        if peg == self.pegs.0 || peg == self.pegs.1 {
            return Ok(None);
        }
        child.facet(self.pegs.0, self.pegs.1).map(Some)
    }
}

/// Edges between two sibling subgraphs and their endpoints on each side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Boundary {
    /// Endpoints inside the first handle, sorted.
    pub near: Vec<Vertex>,
    /// Endpoints inside the second handle, sorted.
    pub far: Vec<Vertex>,
    /// `(near, far)` pairs sorted by the near endpoint.
    pub edges: Vec<(Vertex, Vertex)>,
}

impl Boundary {
    /// No vertex is incident to two boundary edges.
    pub fn is_matching(&self) -> bool {
        self.near.len() == self.edges.len() && self.far.len() == self.edges.len()
    }
}
