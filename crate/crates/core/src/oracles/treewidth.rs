use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{mask_vertices, SmallGraph};
use crate::{Error, Result, Vertex};

pub const DEFAULT_TREEWIDTH_BUDGET: usize = 20;

/// Exact treewidth with a certifying elimination order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreewidthCertificate {
    pub width: usize,
    /// Eliminating in this order never creates a vertex of degree above `width`.
    pub elimination_order: Vec<Vertex>,
    /// Every vertex subset was examined, so no order achieves `width - 1`.
    pub exhaustive: bool,
}

/// Vertices outside `prefix ∪ {v}` reachable from `v` through `prefix`:
/// the neighborhood of `v` when it is eliminated right after `prefix`.
fn elimination_neighbors(g: &SmallGraph, prefix: u64, v: Vertex) -> u64 {
    let start = 1u64 << v;
    let mut reached = start;
    let mut frontier = start;
    let mut outside = 0u64;
    while frontier != 0 {
        let nbr = g.neighborhood(frontier);
        outside |= nbr & !prefix & !start;
        frontier = nbr & prefix & !reached;
        reached |= frontier;
    }
    outside
}

/// Treewidth by dynamic programming over eliminated vertex sets:
/// `TW(S) = min_{v ∈ S} max(TW(S \ v), |Q(S \ v, v)|)`.
///
/// Uses `2^|V|` table entries; `budget` caps `|V|`.
pub fn exact_treewidth(g: &SmallGraph, budget: usize) -> Result<TreewidthCertificate> {
    let n = g.len();
    if n > budget || n > 32 {
        return Err(Error::BudgetExceeded { what: "exact treewidth", vertices: n, budget: budget.min(32) });
    }
    if n == 0 {
        return Ok(TreewidthCertificate { width: 0, elimination_order: Vec::new(), exhaustive: true });
    }
    let states = 1usize << n;
    let mut width = vec![0u8; states];
    let mut last = vec![0u8; states];
    for set in 1..states {
        let s = set as u64;
        let mut best = u8::MAX;
        let mut arg = 0u8;
        for v in mask_vertices(s) {
            let prefix = s & !(1 << v);
            let q = elimination_neighbors(g, prefix, v).count_ones() as u8;
            let candidate = width[prefix as usize].max(q);
            if candidate < best {
                best = candidate;
                arg = v as u8;
            }
        }
        width[set] = best;
        last[set] = arg;
    }
    let mut order = Vec::with_capacity(n);
    let mut set = states - 1;
    while set != 0 {
        let v = last[set] as usize;
        order.push(v);
        set &= !(1 << v);
    }
    order.reverse();
    Ok(TreewidthCertificate { width: width[states - 1] as usize, elimination_order: order, exhaustive: true })
}

/// Width of the tree decomposition induced by eliminating vertices in
/// `order`, by explicit fill-in.
pub fn elimination_width(g: &SmallGraph, order: &[Vertex]) -> usize {
    let mut adj: Vec<u64> = (0..g.len()).map(|v| g.neighbors_mask(v)).collect();
    let mut alive = g.full_mask();
    let mut width = 0;
    for &v in order {
        alive &= !(1 << v);
        let nbrs = adj[v] & alive;
        width = width.max(nbrs.count_ones() as usize);
        for u in mask_vertices(nbrs) {
            adj[u] |= nbrs & !(1 << u);
        }
    }
    width
}
