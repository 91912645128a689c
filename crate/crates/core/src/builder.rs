//! Recursive construction of a uniform multicommodity flow on `H_p^n`.
//!
//! Level `m` reuses the level `m - 1` flow inside each of the `p` children:
//! once for the commodities internal to the child and once more per target
//! sibling as the shuffle stage. Traffic from child `a` to child `b` then
//! runs through three stages that are the same for every source in `a`:
//!
//! * concentration onto the boundary facet `F_ab(a)`,
//! * transmission across the boundary matching,
//! * distribution from `F_ab(b)` over all of `b`.
//!
//! Concentration is distribution with every arc reversed. Distribution and
//! facet-to-facet routing recurse on the facet structure down to single
//! vertices; no stage has an explicit clique base case.

use alloc::vec;
use alloc::vec::Vec;

use crate::amount::Amount;
use crate::hanoi::{pow, Facet, HanoiGraph, SubgraphHandle};
use crate::msf::{congestion, ArcFlow, CongestionReport, MsfProblem};
use crate::{Error, Result, Vertex};

/// Vertex budget for building one flow per source vertex.
pub const DEFAULT_PER_SOURCE_BUDGET: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuildMode {
    /// Only the commodity-summed flow.
    Aggregate,
    /// Also one flow per source vertex, refused above `budget` vertices.
    PerSource { budget: usize },
}

/// A uniform multicommodity flow on a standalone `H_p^n`: one unit between
/// every ordered pair of distinct vertices.
#[derive(Debug, Clone)]
pub struct UniformMcf<A> {
    pub p: usize,
    pub n: usize,
    /// Sum over all commodities.
    pub aggregate: ArcFlow<A>,
    /// `per_source[s]` carries every commodity leaving `s`; it solves
    /// `({s}, V \ {s}, |V| - 1, 1)`.
    pub per_source: Option<Vec<ArcFlow<A>>>,
}

impl<A: Amount> UniformMcf<A> {
    /// `H_p^0`: a single vertex and no commodities.
    fn trivial(p: usize, per_source: bool) -> Self {
        UniformMcf {
            p,
            n: 0,
            aggregate: ArcFlow::new(),
            per_source: per_source.then(|| vec![ArcFlow::new()]),
        }
    }

    pub fn vertex_count(&self) -> usize {
        pow(self.p, self.n)
    }

    /// The problem solved by `per_source[s]`.
    pub fn source_problem(&self, s: Vertex) -> MsfProblem<A> {
        let count = self.vertex_count();
        MsfProblem::uniform(
            [s],
            A::from_count(count - 1),
            (0..count).filter(|&t| t != s),
            A::from_count(1),
        )
    }
}

/// Per-level congestion accounting, all values normalized by the level's
/// vertex count.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelTerms {
    pub level: usize,
    /// Reused level `m - 1` flow (internal commodities plus shuffles).
    pub shuffle: f64,
    pub transmission: f64,
    pub concentration_distribution: f64,
    pub rho: f64,
    /// `rho(m) - rho(m - 1)`.
    pub increment: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceLedger {
    pub p: usize,
    pub levels: Vec<LevelTerms>,
    /// Smallest `C` with `increment(m) <= C (p/(p-2))^m` at every level
    /// `m >= 2`. Level 1 is the base clique routing, not an increment.
    pub fitted_constant: f64,
}

impl RecurrenceLedger {
    pub fn growth_ratio(&self) -> f64 {
        self.p as f64 / (self.p - 2) as f64
    }

    pub fn rho(&self) -> f64 {
        self.levels.last().map_or(0.0, |l| l.rho)
    }

    fn fit(p: usize, levels: Vec<LevelTerms>) -> Self {
        let ratio = p as f64 / (p - 2) as f64;
        let fitted_constant = levels
            .iter()
            .filter(|l| l.level >= 2)
            .map(|l| l.increment / powf(ratio, l.level))
            .fold(0.0, f64::max);
        RecurrenceLedger { p, levels, fitted_constant }
    }
}

fn powf(base: f64, exp: usize) -> f64 {
    (0..exp).fold(1.0, |acc, _| acc * base)
}

#[derive(Debug, Clone)]
pub struct BuildOutput<A> {
    pub mcf: UniformMcf<A>,
    pub report: CongestionReport<A>,
    pub ledger: RecurrenceLedger,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageKind {
    Shuffle,
    Concentration,
    Transmission,
    Distribution,
    Routing,
    DistSub,
}

/// Surplus and demand of one stage of the `a -> b` traffic, per vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StagePlan<A> {
    pub kind: StageKind,
    pub owner: SubgraphHandle,
    pub surplus: A,
    pub demand: A,
}

/// The four stage problems moving traffic of source `s` in `from` to every
/// vertex of `to`, in application order.
pub fn stage_problems<A: Amount>(
    s: Vertex,
    from: &SubgraphHandle,
    to: &SubgraphHandle,
) -> Result<[(StagePlan<A>, MsfProblem<A>); 4]> {
    if !from.is_sibling_of(to) || !from.contains(s) {
        return Err(Error::NotSiblings);
    }
    let (a, b) = pegs_of(from, to);
    let near = from.facet(a, b)?;
    let far = to.facet(a, b)?;
    let size = from.vertex_count();
    let per_boundary = A::from_frac(size as i64, near.len() as i64);
    let one = A::from_count(1);
    let plan = |kind, owner, surplus, demand| StagePlan { kind, owner, surplus, demand };
    Ok([
        (
            plan(StageKind::Shuffle, *from, A::from_count(to.vertex_count()), one),
            MsfProblem::uniform([s], A::from_count(to.vertex_count()), from.vertices(), one),
        ),
        (
            plan(StageKind::Concentration, *from, one, per_boundary),
            MsfProblem::uniform(from.vertices(), one, near.vertices().iter().copied(), per_boundary),
        ),
        (
            plan(StageKind::Transmission, *from, per_boundary, per_boundary),
            MsfProblem::uniform(
                near.vertices().iter().copied(),
                per_boundary,
                far.vertices().iter().copied(),
                per_boundary,
            ),
        ),
        (
            plan(StageKind::Distribution, *to, per_boundary, one),
            MsfProblem::uniform(far.vertices().iter().copied(), per_boundary, to.vertices(), one),
        ),
    ])
}

/// `pi_s = ({s}, V(to), |V(to)|, 1)`.
pub fn target_problem<A: Amount>(s: Vertex, to: &SubgraphHandle) -> MsfProblem<A> {
    MsfProblem::uniform([s], A::from_count(to.vertex_count()), to.vertices(), A::from_count(1))
}

fn pegs_of(from: &SubgraphHandle, to: &SubgraphHandle) -> (usize, usize) {
    (
        from.peg().expect("sibling handles are pinned"),
        to.peg().expect("sibling handles are pinned"),
    )
}

fn add_transmission<A: Amount>(out: &mut ArcFlow<A>, from: &SubgraphHandle, to: &SubgraphHandle, per_edge: A) {
    let (a, b) = pegs_of(from, to);
    let near = from.facet(a, b).expect("sibling pegs are distinct");
    for &v in near.vertices() {
        out.add(v, from.matched_vertex(to, v), per_edge);
    }
}

/// Spreads `sigma` per vertex of `F_ij(h)` so that every vertex of `h` ends
/// with `sigma ((p-2)/p)^m`.
fn add_distribution<A: Amount>(out: &mut ArcFlow<A>, h: &SubgraphHandle, excluded: (usize, usize), sigma: A) {
    if h.free_discs() == 0 || sigma.is_zero() {
        return;
    }
    let p = h.p();
    let (i, j) = excluded;
    let keep = sigma * A::from_frac(p as i64 - 2, p as i64);
    let share = sigma / A::from_count(p);
    for k in (1..=p).filter(|&k| k != i && k != j) {
        let child = h.child(k).expect("h has free discs");
        add_distribution(out, &child, excluded, keep);
        for t in [i, j] {
            let target = h.child(t).expect("h has free discs");
            add_routing(out, &child, excluded, (k, t), share);
            add_transmission(out, &child, &target, share);
            add_distribution(out, &target, (t, k), share);
        }
    }
}

/// Moves `amount` per vertex from facet `source` of `h` to facet `sink` of `h`.
fn add_routing<A: Amount>(
    out: &mut ArcFlow<A>,
    h: &SubgraphHandle,
    source: (usize, usize),
    sink: (usize, usize),
    amount: A,
) {
    let same = |x: (usize, usize), y: (usize, usize)| x == y || x == (y.1, y.0);
    if h.free_discs() == 0 || same(source, sink) || amount.is_zero() {
        return;
    }
    let p = h.p();
    let in_facet = |q: usize, f: (usize, usize)| q != f.0 && q != f.1;
    let mut source_only = Vec::new();
    let mut sink_only = Vec::new();
    for q in 1..=p {
        match (in_facet(q, source), in_facet(q, sink)) {
            (true, true) => add_routing(out, &h.child(q).expect("h has free discs"), source, sink, amount),
            (true, false) => source_only.push(q),
            (false, true) => sink_only.push(q),
            (false, false) => {}
        }
    }
    debug_assert_eq!(source_only.len(), sink_only.len());
    for (a, b) in source_only.into_iter().zip(sink_only) {
        let from = h.child(a).expect("h has free discs");
        let to = h.child(b).expect("h has free discs");
        add_routing(out, &from, source, (a, b), amount);
        add_transmission(out, &from, &to, amount);
        add_routing(out, &to, (a, b), sink, amount);
    }
}

/// Sends `per_edge` across every edge of the boundary matching from `from` to `to`.
pub fn solve_transmission<A: Amount>(from: &SubgraphHandle, to: &SubgraphHandle, per_edge: A) -> Result<ArcFlow<A>> {
    if !from.is_sibling_of(to) {
        return Err(Error::NotSiblings);
    }
    let mut out = ArcFlow::new();
    add_transmission(&mut out, from, to, per_edge);
    Ok(out)
}

/// Solves `(facet, V(h), sigma, sigma ((p-2)/p)^m)`; with
/// `sigma = |V(h)| / |facet|` every vertex receives exactly one unit.
pub fn solve_distribution<A: Amount>(h: &SubgraphHandle, facet: &Facet, sigma: A) -> Result<ArcFlow<A>> {
    if facet.owner() != h {
        return Err(Error::FacetOwnerMismatch);
    }
    let mut out = ArcFlow::new();
    add_distribution(&mut out, h, facet.excluded_pegs(), sigma);
    Ok(out)
}

/// Mirror image of [`solve_distribution`]: every vertex of `h` sends to the
/// facet, which collects `delta` per vertex.
pub fn solve_concentration<A: Amount>(h: &SubgraphHandle, facet: &Facet, delta: A) -> Result<ArcFlow<A>> {
    solve_distribution(h, facet, delta).map(|f| f.reversed())
}

/// Facet-to-facet routing inside `h` with uniform `amount` per vertex.
pub fn solve_routing<A: Amount>(h: &SubgraphHandle, source: &Facet, sink: &Facet, amount: A) -> Result<ArcFlow<A>> {
    if source.owner() != h || sink.owner() != h {
        return Err(Error::FacetOwnerMismatch);
    }
    if source.len() != sink.len() {
        return Err(Error::FacetSizeMismatch { source: source.len(), sink: sink.len() });
    }
    let mut out = ArcFlow::new();
    add_routing(&mut out, h, source.excluded_pegs(), sink.excluded_pegs(), amount);
    Ok(out)
}

/// Shuffle for source `s` in `h`: `s` sends one unit to every vertex of `h`
/// along the commodities of `recursive`, a uniform flow on a copy of `h`.
pub fn solve_shuffle<A: Amount>(s: Vertex, h: &SubgraphHandle, recursive: &UniformMcf<A>) -> Result<ArcFlow<A>> {
    if recursive.p != h.p() || recursive.n != h.free_discs() {
        return Err(Error::FacetOwnerMismatch);
    }
    if !h.contains(s) {
        return Err(Error::IndexOutOfRange { index: s, vertex_count: h.vertex_count() });
    }
    let flows = recursive.per_source.as_ref().ok_or(Error::MissingPerSourceFlows)?;
    let mut out = ArcFlow::new();
    out.add_shifted(&flows[s - h.offset()], h.offset(), A::from_count(1));
    Ok(out)
}

/// Concentration, transmission and distribution for traffic from child `a`
/// to child `b` of `root`, for a single source. Solves
/// `(V(a), V(b), 1, 1)`.
pub fn pair_flow<A: Amount>(from: &SubgraphHandle, to: &SubgraphHandle) -> Result<ArcFlow<A>> {
    if !from.is_sibling_of(to) {
        return Err(Error::NotSiblings);
    }
    let (a, b) = pegs_of(from, to);
    let sigma = A::from_frac(from.vertex_count() as i64, pow(from.p() - 2, from.free_discs()) as i64);
    let mut dist = ArcFlow::new();
    add_distribution(&mut dist, from, (a, b), sigma);
    let mut out = dist.reversed();
    add_transmission(&mut out, from, to, sigma);
    add_distribution(&mut out, to, (a, b), sigma);
    Ok(out)
}

struct Level<A> {
    mcf: UniformMcf<A>,
    terms: LevelTerms,
}

fn next_level<A: Amount>(prev: &UniformMcf<A>, prev_rho: f64) -> Result<Level<A>> {
    let p = prev.p;
    let m = prev.n + 1;
    let graph = HanoiGraph::new(p, m)?;
    let root = graph.root();
    let children = root.partition_by_largest()?;
    let child_size = children[0].vertex_count();
    let pf = A::from_count(p);

    let mut reused = ArcFlow::new();
    for child in &children {
        reused.add_shifted(&prev.aggregate, child.offset(), pf);
    }

    let sigma = A::from_frac(child_size as i64, pow(p - 2, m - 1) as i64);
    let weight = A::from_count(child_size);
    let mut transmission = ArcFlow::new();
    let mut interior = ArcFlow::new();
    let mut pair_flows = Vec::with_capacity(p * (p - 1));
    for from in &children {
        for to in &children {
            if from == to {
                continue;
            }
            let (a, b) = pegs_of(from, to);
            let mut conc_dist = ArcFlow::new();
            add_distribution(&mut conc_dist, from, (a, b), sigma);
            conc_dist = conc_dist.reversed();
            add_distribution(&mut conc_dist, to, (a, b), sigma);
            let mut tran = ArcFlow::new();
            add_transmission(&mut tran, from, to, sigma);
            interior.add_scaled(&conc_dist, weight);
            transmission.add_scaled(&tran, weight);
            if prev.per_source.is_some() {
                pair_flows.push((*from, conc_dist.plus(&tran)));
            }
        }
    }

    let mut aggregate = reused.clone();
    aggregate.add_scaled(&interior, A::from_count(1));
    aggregate.add_scaled(&transmission, A::from_count(1));

    let per_source = prev.per_source.as_ref().map(|flows| {
        let mut out = Vec::with_capacity(graph.vertex_count());
        for child in &children {
            for local in &flows[..child_size] {
                let mut f = ArcFlow::new();
                f.add_shifted(local, child.offset(), pf);
                for (from, pair) in &pair_flows {
                    if from == child {
                        f.add_scaled(pair, A::from_count(1));
                    }
                }
                out.push(f);
            }
        }
        out
    });

    let count = graph.vertex_count();
    let norm = |f: &ArcFlow<A>| congestion(f, count).normalized_congestion.to_f64();
    let rho = norm(&aggregate);
    let terms = LevelTerms {
        level: m,
        shuffle: norm(&reused),
        transmission: norm(&transmission),
        concentration_distribution: norm(&interior),
        rho,
        increment: rho - prev_rho,
    };
    Ok(Level { mcf: UniformMcf { p, n: m, aggregate, per_source }, terms })
}

/// Builds the uniform multicommodity flow on `H_p^n` level by level and
/// records the congestion added at each level.
pub fn build_uniform_mcf<A: Amount>(p: usize, n: usize, mode: BuildMode) -> Result<BuildOutput<A>> {
    let graph = HanoiGraph::new(p, n)?;
    let per_source = match mode {
        BuildMode::Aggregate => false,
        BuildMode::PerSource { budget } => {
            if graph.vertex_count() > budget {
                return Err(Error::BudgetExceeded {
                    what: "per-commodity flow",
                    vertices: graph.vertex_count(),
                    budget,
                });
            }
            true
        }
    };
    let mut mcf = UniformMcf::trivial(p, per_source);
    let mut levels = Vec::with_capacity(n);
    let mut per_level_terms = Vec::with_capacity(n);
    let mut prev_rho = 0.0;
    let mut prev_exact_rho = A::zero();
    for _ in 0..n {
        let level = next_level(&mcf, prev_rho)?;
        mcf = level.mcf;
        let exact_rho = congestion(&mcf.aggregate, mcf.vertex_count()).normalized_congestion;
        per_level_terms.push((level.terms.level, exact_rho - prev_exact_rho));
        prev_exact_rho = exact_rho;
        prev_rho = level.terms.rho;
        levels.push(level.terms);
    }
    let mut report = congestion(&mcf.aggregate, mcf.vertex_count());
    report.per_level_terms = per_level_terms;
    Ok(BuildOutput { mcf, report, ledger: RecurrenceLedger::fit(p, levels) })
}

/// Ledger of the floating-point aggregate construction for levels `1..=n`.
pub fn recurrence_ledger(p: usize, n: usize) -> Result<RecurrenceLedger> {
    build_uniform_mcf::<f64>(p, n, BuildMode::Aggregate).map(|out| out.ledger)
}
