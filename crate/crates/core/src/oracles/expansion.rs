use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::amount::{Amount, Exact};
use crate::graph::{mask_vertices, SmallGraph};
use crate::hanoi::{pow, HanoiGraph};
use crate::{Error, Result, Vertex};

pub const DEFAULT_EXPANSION_BUDGET: usize = 30;

/// A vertex set `S` with `|S| <= |V|/2` and its boundary size. The boundary
/// is `|∂S|` (edges) or `|∂_v S|` (outside neighbors) depending on the oracle
/// that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutWitness {
    /// Sorted ascending.
    pub set: Vec<Vertex>,
    pub boundary: usize,
}

impl CutWitness {
    pub fn size(&self) -> usize {
        self.set.len()
    }

    pub fn ratio(&self) -> Exact {
        Exact::from_frac(self.boundary as i64, self.set.len() as i64)
    }

    fn from_mask(mask: u64, boundary: usize) -> Self {
        CutWitness { set: mask_vertices(mask).collect(), boundary }
    }

    fn mask(&self) -> u64 {
        self.set.iter().fold(0, |m, &v| m | 1 << v)
    }

    /// Smaller ratio, or equal ratio and lexicographically smaller set.
    pub fn better_than(&self, other: &CutWitness) -> bool {
        let me = Best { boundary: self.boundary, size: self.size(), mask: self.mask() };
        me.beats(&Some(Best { boundary: other.boundary, size: other.size(), mask: other.mask() }))
    }
}

/// Running minimum. Ties go to the lexicographically smallest sorted vertex list.
#[derive(Debug, Clone, Copy)]
struct Best {
    boundary: usize,
    size: usize,
    mask: u64,
}

impl Best {
    fn cmp_ratio(boundary: usize, size: usize, other: &Best) -> Ordering {
        (boundary * other.size).cmp(&(other.boundary * size))
    }

    fn beats(&self, other: &Option<Best>) -> bool {
        match other {
            None => true,
            Some(o) => match Self::cmp_ratio(self.boundary, self.size, o) {
                Ordering::Less => true,
                Ordering::Equal => lex_less(self.mask, o.mask),
                Ordering::Greater => false,
            },
        }
    }

    fn offer(slot: &mut Option<Best>, boundary: usize, size: usize, mask: u64) {
        let candidate = Best { boundary, size, mask };
        if candidate.beats(slot) {
            *slot = Some(candidate);
        }
    }
}

/// Lexicographic order on the sorted vertex lists of two sets.
fn lex_less(a: u64, b: u64) -> bool {
    if a == b {
        return false;
    }
    let d = (a ^ b).trailing_zeros();
    let at_or_above = !((1u64 << d) - 1);
    if a >> d & 1 == 1 {
        // b continues past the shared prefix with an element larger than d
        b & at_or_above != 0
    } else {
        a & at_or_above == 0
    }
}

/// Budget, size and connectivity checks shared by every expansion oracle.
pub fn check_input(g: &SmallGraph, budget: usize) -> Result<()> {
    if g.len() > budget {
        return Err(Error::BudgetExceeded { what: "exact expansion", vertices: g.len(), budget });
    }
    if g.len() < 2 || !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Measure {
    Edge,
    Vertex,
}

/// Enumerates connected sets whose minimum vertex is `root`, each exactly
/// once, by include/exclude branching on an extension set.
struct ConnectedSearch<'g> {
    g: &'g SmallGraph,
    measure: Measure,
    max_size: usize,
    prune: bool,
    best: Option<Best>,
}

impl ConnectedSearch<'_> {
    fn numerator(&self, set: u64, nbr: u64, cut: usize) -> usize {
        match self.measure {
            Measure::Edge => cut,
            Measure::Vertex => (nbr & !set).count_ones() as usize,
        }
    }

    /// Boundary that no extension inside this branch can remove: everything
    /// between `set` and vertices that may never join it.
    fn fixed_boundary(&self, set: u64, nbr: u64, forbidden: u64) -> usize {
        match self.measure {
            Measure::Edge => mask_vertices(set)
                .map(|v| (self.g.neighbors_mask(v) & forbidden).count_ones() as usize)
                .sum(),
            Measure::Vertex => (nbr & forbidden).count_ones() as usize,
        }
    }

    fn grow(&mut self, set: u64, size: usize, nbr: u64, cut: usize, mut ext: u64, mut forbidden: u64) {
        let value = self.numerator(set, nbr, cut);
        Best::offer(&mut self.best, value, size, set);
        if size == self.max_size {
            return;
        }
        while ext != 0 {
            if self.prune {
                if let Some(best) = &self.best {
                    let fixed = self.fixed_boundary(set, nbr, forbidden);
                    if Best::cmp_ratio(fixed, self.max_size, best) == Ordering::Greater {
                        return;
                    }
                }
            }
            let w = ext.trailing_zeros() as usize;
            let bit = 1u64 << w;
            ext &= !bit;
            let adj = self.g.neighbors_mask(w);
            let inside = (adj & set).count_ones() as usize;
            let next_cut = cut + adj.count_ones() as usize - 2 * inside;
            let fresh = adj & !(set | ext | forbidden | bit);
            self.grow(set | bit, size + 1, nbr | adj, next_cut, ext | fresh, forbidden);
            forbidden |= bit;
        }
    }

    fn run_root(&mut self, root: Vertex) {
        let bit = 1u64 << root;
        let below = bit - 1;
        let adj = self.g.neighbors_mask(root);
        self.grow(bit, 1, adj, adj.count_ones() as usize, adj & !below, below);
    }
}

fn connected_search(g: &SmallGraph, measure: Measure, prune: bool) -> CutWitness {
    let mut search = ConnectedSearch { g, measure, max_size: g.len() / 2, prune, best: None };
    for root in 0..g.len() {
        search.run_root(root);
    }
    let best = search.best.expect("a connected graph with two vertices has a singleton cut");
    CutWitness::from_mask(best.mask, best.boundary)
}

/// Exact edge expansion `min |∂S| / |S|` over `|S| <= |V|/2`.
///
/// Only connected sets are enumerated: the components of any `S` split its
/// boundary, so the best component does at least as well as `S`. The witness
/// is the lexicographically smallest connected minimizer; a disconnected set
/// with the same ratio may precede it.
pub fn exact_edge_expansion(g: &SmallGraph, budget: usize) -> Result<CutWitness> {
    check_input(g, budget)?;
    Ok(connected_search(g, Measure::Edge, true))
}

/// Best connected set with minimum vertex `root`, or `None` when nothing in
/// that branch beats `incumbent`. Lets callers split the search by root.
pub fn edge_expansion_from_root(g: &SmallGraph, root: Vertex, incumbent: Option<&CutWitness>) -> Option<CutWitness> {
    let start = incumbent.map(|w| Best { boundary: w.boundary, size: w.size(), mask: w.mask() });
    let mut search = ConnectedSearch { g, measure: Measure::Edge, max_size: g.len() / 2, prune: true, best: start };
    search.run_root(root);
    let best = search.best?;
    match start {
        Some(s) if s.mask == best.mask => None,
        _ => Some(CutWitness::from_mask(best.mask, best.boundary)),
    }
}

/// Vertex expansion restricted to connected sets.
///
/// This is only an upper bound on `h_v`: components of a set can share
/// outside neighbors (two leaves of a star), so disconnected sets may do
/// strictly better.
pub fn connected_vertex_expansion(g: &SmallGraph, budget: usize) -> Result<CutWitness> {
    check_input(g, budget)?;
    Ok(connected_search(g, Measure::Vertex, true))
}

/// Exact vertex expansion `min |∂_v S| / |S|` over all `|S| <= |V|/2`.
///
/// Sets are visited depth-first in lexicographic order with the neighborhood
/// maintained incrementally, so the first minimizer found is the
/// lexicographically smallest.
pub fn exact_vertex_expansion(g: &SmallGraph, budget: usize) -> Result<CutWitness> {
    check_input(g, budget)?;
    fn visit(g: &SmallGraph, next: usize, set: u64, size: usize, nbr: u64, best: &mut Option<Best>) {
        if size > 0 {
            Best::offer(best, (nbr & !set).count_ones() as usize, size, set);
        }
        if size == g.len() / 2 {
            return;
        }
        for v in next..g.len() {
            visit(g, v + 1, set | 1 << v, size + 1, nbr | g.neighbors_mask(v), best);
        }
    }
    let mut best = None;
    visit(g, 0, 0, 0, 0, &mut best);
    let best = best.expect("graph has at least two vertices");
    Ok(CutWitness::from_mask(best.mask, best.boundary))
}

fn brute_force(g: &SmallGraph, measure: Measure) -> Result<CutWitness> {
    check_input(g, 24)?;
    let half = g.len() / 2;
    let mut best: Option<Best> = None;
    for mask in 1..=g.full_mask() {
        let size = mask.count_ones() as usize;
        if size > half {
            continue;
        }
        let boundary = match measure {
            Measure::Edge => g.cut_size(mask),
            Measure::Vertex => g.outer_boundary(mask).count_ones() as usize,
        };
        Best::offer(&mut best, boundary, size, mask);
    }
    let best = best.expect("graph has at least two vertices");
    Ok(CutWitness::from_mask(best.mask, best.boundary))
}

/// Edge expansion over every subset, connected or not. At most 24 vertices.
pub fn brute_force_edge_expansion(g: &SmallGraph) -> Result<CutWitness> {
    brute_force(g, Measure::Edge)
}

/// Vertex expansion over every subset by direct recount. At most 24 vertices.
pub fn brute_force_vertex_expansion(g: &SmallGraph) -> Result<CutWitness> {
    brute_force(g, Measure::Vertex)
}

/// `(p-1)(p-2)^(n-1) / p^(n-1)`: the ratio of one top-level child subgraph,
/// whose `p - 1` boundary matchings each have `(p-2)^(n-1)` edges.
pub fn witness_cut_bound(p: usize, n: usize) -> Exact {
    let m = n.saturating_sub(1);
    Exact::from_frac(((p - 1) * pow(p - 2, m)) as i64, pow(p, m) as i64)
}

/// The child subgraph `{τ : τ_n = 1}` as an explicit cut, with its edge
/// boundary counted on the graph.
pub fn hanoi_witness_cut(g: &HanoiGraph) -> Result<CutWitness> {
    let child = g.root().child(1)?;
    let mut boundary = 0;
    for v in child.vertices() {
        g.for_each_neighbor(v, |u| boundary += usize::from(!child.contains(u)));
    }
    Ok(CutWitness { set: child.vertices().collect(), boundary })
}
