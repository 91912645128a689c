//! Report builders behind the CLI subcommands.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::str::FromStr;

use hanoiflow_core::builder::{
    build_uniform_mcf, solve_concentration, solve_distribution, solve_shuffle, solve_transmission,
    stage_problems, target_problem, BuildMode, BuildOutput,
};
use hanoiflow_core::msf::{compose, expansion_lower_bound, validate_msf, DEFAULT_TOLERANCE};
use hanoiflow_core::oracles::{
    exact_treewidth, exact_vertex_expansion, treewidth_lower_bound, witness_cut_bound, CutWitness,
};
use hanoiflow_core::{Amount, Exact, HanoiGraph, MsfProblem, SmallGraph};

use crate::error::{Error, Result};
use crate::random;
use crate::records::{
    ExpansionRecord, FlowRecord, GraphRecord, LevelRecord, PairSize, TreewidthRecord, ValidationRecord,
};
use crate::search::parallel_edge_expansion;

/// Vertex budget for the structural report.
pub const DEFAULT_GRAPH_BUDGET: usize = hanoiflow_core::hanoi::DEFAULT_CACHE_BUDGET;
/// Vertex budget for the aggregate flow construction.
pub const DEFAULT_FLOW_BUDGET: usize = 200_000;
/// Largest graph for which the all-subsets vertex expansion oracle runs.
pub const VERTEX_EXPANSION_LIMIT: usize = 24;

/// Disc counts: a single `n` or an inclusive range `a..b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscRange(pub RangeInclusive<usize>);

impl FromStr for DiscRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Range(s.to_string());
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => {
                let n = s.trim().parse().map_err(|_| bad())?;
                (n, n)
            }
        };
        if lo == 0 || lo > hi {
            return Err(bad());
        }
        Ok(DiscRange(lo..=hi))
    }
}

fn vertex_count(p: usize, n: usize) -> Result<usize> {
    Ok(HanoiGraph::new(p, n)?.vertex_count())
}

pub fn graph_report(p: usize, n: usize, budget: usize) -> Result<GraphRecord> {
    let g = HanoiGraph::new(p, n)?;
    if g.vertex_count() > budget {
        return Err(hanoiflow_core::Error::BudgetExceeded {
            what: "structural report",
            vertices: g.vertex_count(),
            budget,
        }
        .into());
    }
    let mut histogram = BTreeMap::new();
    for v in 0..g.vertex_count() {
        *histogram.entry(g.degree(v)).or_insert(0) += 1;
    }
    let root = g.root();
    let children = root.partition_by_largest()?;
    let mut matchings = Vec::new();
    let mut facets = Vec::new();
    for a in 1..=p {
        for b in a + 1..=p {
            let boundary = children[a - 1].boundary(&children[b - 1])?;
            matchings.push(PairSize { a, b, size: boundary.edges.len() });
            facets.push(PairSize { a, b, size: root.facet(a, b)?.len() });
        }
    }
    Ok(GraphRecord {
        p,
        n,
        vertices: g.vertex_count(),
        edges: g.edge_count_brute_force(),
        max_degree: g.max_degree(),
        connected: g.is_connected(),
        degree_histogram: histogram.into_iter().collect(),
        matchings,
        facets,
    })
}

pub fn render_graph_text(r: &GraphRecord) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "H_{}^{}: {} vertices, {} edges, max degree {}", r.p, r.n, r.vertices, r.edges, r.max_degree);
    let _ = writeln!(s, "connected: {}", r.connected);
    let hist: Vec<String> = r.degree_histogram.iter().map(|(d, c)| format!("{d}:{c}")).collect();
    let _ = writeln!(s, "degree histogram: {}", hist.join(" "));
    let sizes: Vec<String> = r.matchings.iter().map(|m| format!("{}-{}:{}", m.a, m.b, m.size)).collect();
    let _ = writeln!(s, "{} sibling matchings: {}", r.matchings.len(), sizes.join(" "));
    let sizes: Vec<String> = r.facets.iter().map(|f| format!("F{}{}:{}", f.a, f.b, f.size)).collect();
    let _ = writeln!(s, "facets: {}", sizes.join(" "));
    s
}

/// Options for [`flow_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlowOptions {
    pub exact: bool,
    pub per_commodity: bool,
    /// Vertex budget for the aggregate construction.
    pub budget: usize,
    /// Vertex budget for per-commodity tracking.
    pub per_commodity_budget: usize,
    /// Exact edge expansion is attached when the graph fits this budget.
    pub expansion_budget: usize,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            exact: false,
            per_commodity: false,
            budget: DEFAULT_FLOW_BUDGET,
            per_commodity_budget: hanoiflow_core::builder::DEFAULT_PER_SOURCE_BUDGET,
            expansion_budget: hanoiflow_core::oracles::DEFAULT_EXPANSION_BUDGET,
        }
    }
}

pub fn flow_report(p: usize, n: usize, opts: FlowOptions) -> Result<FlowRecord> {
    let count = vertex_count(p, n)?;
    if count > opts.budget {
        return Err(hanoiflow_core::Error::BudgetExceeded { what: "flow construction", vertices: count, budget: opts.budget }
            .into());
    }
    if opts.exact {
        flow_report_in::<Exact>(p, n, opts)
    } else {
        flow_report_in::<f64>(p, n, opts)
    }
}

fn flow_report_in<A: Amount>(p: usize, n: usize, opts: FlowOptions) -> Result<FlowRecord> {
    let mode = if opts.per_commodity {
        BuildMode::PerSource { budget: opts.per_commodity_budget }
    } else {
        BuildMode::Aggregate
    };
    let out: BuildOutput<A> = build_uniform_mcf(p, n, mode)?;
    let validation = validate_uniform(&out, opts)?;
    let g = HanoiGraph::new(p, n)?;
    let exact_h = if g.vertex_count() <= opts.expansion_budget {
        Some(parallel_edge_expansion(&SmallGraph::from_hanoi(&g)?, opts.expansion_budget)?.ratio())
    } else {
        None
    };
    let rho = out.report.normalized_congestion;
    Ok(FlowRecord {
        p,
        n,
        levels: out
            .ledger
            .levels
            .iter()
            .map(|l| LevelRecord {
                level: l.level,
                shuffle: l.shuffle,
                transmission: l.transmission,
                concentration_distribution: l.concentration_distribution,
                rho: l.rho,
                increment: l.increment,
            })
            .collect(),
        rho: rho.to_string(),
        max_arc_load: out.report.max_arc_load.to_string(),
        argmax_arc: out.report.argmax_arc,
        lower_bound: expansion_lower_bound(rho)?.to_string(),
        witness_upper_bound: witness_cut_bound(p, n).to_string(),
        fitted_constant: out.ledger.fitted_constant,
        exact_h: exact_h.map(|h| h.to_string()),
        theta_ratio: exact_h.map(|h| (h * growth(p, n)).to_string()),
        validation,
    })
}

/// `(p/(p-2))^n` as an exact rational.
pub fn growth(p: usize, n: usize) -> Exact {
    let base = Exact::new(p as i128, p as i128 - 2);
    (0..n).fold(Exact::from_count(1), |acc, _| acc * base)
}

/// Checks that the aggregate routes one unit between every ordered pair: zero
/// net flow at every vertex. In per-commodity mode also checks every source
/// flow and every top-level stage chain.
fn validate_uniform<A: Amount>(out: &BuildOutput<A>, opts: FlowOptions) -> Result<ValidationRecord> {
    let (p, n) = (out.mcf.p, out.mcf.n);
    let g = HanoiGraph::new(p, n)?;
    let count = g.vertex_count();
    let all = A::from_count(count - 1);
    let problem = MsfProblem::uniform(0..count, all, 0..count, all);
    let mut checked = 1;
    let mut failures = usize::from(validate_msf(&out.mcf.aggregate, &problem, &g, DEFAULT_TOLERANCE).is_err());
    if let Some(flows) = &out.mcf.per_source {
        for (s, f) in flows.iter().enumerate() {
            checked += 1;
            failures += usize::from(validate_msf(f, &out.mcf.source_problem(s), &g, DEFAULT_TOLERANCE).is_err());
        }
        let (c, f) = validate_stage_chains::<A>(p, n, opts.per_commodity_budget)?;
        checked += c;
        failures += f;
    }
    Ok(ValidationRecord {
        arithmetic: if A::EXACT { "exact" } else { "float" },
        per_commodity: out.mcf.per_source.is_some(),
        problems_checked: checked,
        failures,
        passed: failures == 0,
    })
}

/// For every source `s` and every top-level sibling `to` of the child holding
/// `s`: the shuffle, concentration, transmission and distribution stages each
/// solve their problem, and they compose to `pi_s = ({s}, V(to), |V(to)|, 1)`.
/// Returns `(chains checked, chains failed)`.
pub fn validate_stage_chains<A: Amount>(p: usize, n: usize, budget: usize) -> Result<(usize, usize)> {
    if n < 2 {
        return Ok((0, 0));
    }
    let g = HanoiGraph::new(p, n)?;
    let recursive = build_uniform_mcf::<A>(p, n - 1, BuildMode::PerSource { budget })?.mcf;
    let children = g.root().partition_by_largest()?;
    let tol = DEFAULT_TOLERANCE;
    let (mut checked, mut failed) = (0, 0);
    for from in &children {
        for to in &children {
            if from == to {
                continue;
            }
            let (a, b) = (from.peg().expect("child"), to.peg().expect("child"));
            let near = from.facet(a, b)?;
            let far = to.facet(a, b)?;
            let sigma = A::from_frac(from.vertex_count() as i64, near.len() as i64);
            let conc = solve_concentration(from, &near, sigma)?;
            let tran = solve_transmission(from, to, sigma)?;
            let dist = solve_distribution(to, &far, sigma)?;
            for s in from.vertices() {
                checked += 1;
                let stages = stage_problems::<A>(s, from, to)?;
                let flows = [solve_shuffle(s, from, &recursive)?, conc.clone(), tran.clone(), dist.clone()];
                let mut ok = flows
                    .iter()
                    .zip(&stages)
                    .all(|(f, (_, problem))| validate_msf(f, problem, &g, tol).is_ok());
                let mut acc = (flows[0].clone(), stages[0].1.clone());
                for (f, (_, problem)) in flows.iter().zip(&stages).skip(1) {
                    match compose(&acc.0, &acc.1, f, problem, tol) {
                        Ok(next) => acc = next,
                        Err(_) => {
                            ok = false;
                            break;
                        }
                    }
                }
                ok = ok && acc.1 == target_problem(s, to) && validate_msf(&acc.0, &acc.1, &g, tol).is_ok();
                failed += usize::from(!ok);
            }
        }
    }
    Ok((checked, failed))
}

pub fn render_flow_text(records: &[FlowRecord]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>3} {:>3} {:>14} {:>14} {:>10} {:>10} {:>10}  validation",
        "p", "n", "rho", "1/(2rho)", "exact_h", "witness", "h*growth"
    );
    for r in records {
        let v = &r.validation;
        let _ = writeln!(
            s,
            "{:>3} {:>3} {:>14} {:>14} {:>10} {:>10} {:>10}  {} ({} {} problems, {} failed)",
            r.p,
            r.n,
            short(&r.rho),
            short(&r.lower_bound),
            r.exact_h.as_deref().unwrap_or("-"),
            r.witness_upper_bound,
            r.theta_ratio.as_deref().unwrap_or("-"),
            if v.passed { "pass" } else { "FAIL" },
            v.problems_checked,
            v.arithmetic,
            v.failures,
        );
    }
    if let Some(last) = records.iter().max_by_key(|r| r.n) {
        let _ = writeln!(s, "\nper-level congestion, p={} n={}:", last.p, last.n);
        let _ = writeln!(
            s,
            "{:>5} {:>12} {:>12} {:>12} {:>12} {:>12}",
            "level", "reused", "transmit", "conc+dist", "rho", "increment"
        );
        for l in &last.levels {
            let _ = writeln!(
                s,
                "{:>5} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
                l.level, l.shuffle, l.transmission, l.concentration_distribution, l.rho, l.increment
            );
        }
        let _ = writeln!(s, "fitted C (increment <= C (p/(p-2))^level): {:.6}", last.fitted_constant);
    }
    s
}

fn short(x: &str) -> String {
    match x.parse::<f64>() {
        Ok(v) if x.contains('.') => format!("{v:.6}"),
        _ => x.to_string(),
    }
}

/// Graph selection for the oracle subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Hanoi { p: usize, n: usize },
    Random { vertices: usize, seed: u64 },
}

impl Target {
    fn build(self) -> Result<(String, SmallGraph, Option<HanoiGraph>)> {
        match self {
            Target::Hanoi { p, n } => {
                let h = HanoiGraph::new(p, n)?;
                Ok((format!("H_{p}^{n}"), SmallGraph::from_hanoi(&h)?, Some(h)))
            }
            Target::Random { vertices, seed } => {
                if vertices > SmallGraph::MAX_VERTICES {
                    return Err(Error::Refused(format!(
                        "random graphs hold at most {} vertices",
                        SmallGraph::MAX_VERTICES
                    )));
                }
                let mut rng = random::rng(seed);
                let g = random::random_connected_graph(&mut rng, vertices, 0.2);
                Ok((format!("random(k={vertices}, seed={seed})"), g, None))
            }
        }
    }

    fn check_budget(self, budget: usize) -> Result<()> {
        if let Target::Hanoi { p, n } = self {
            let vertices = vertex_count(p, n)?;
            if vertices > budget {
                return Err(Error::ExactBudget { p, n, vertices, budget });
            }
        }
        Ok(())
    }
}

fn flow_lower_bound(p: usize, n: usize) -> Result<Exact> {
    let out = build_uniform_mcf::<Exact>(p, n, BuildMode::Aggregate)?;
    Ok(expansion_lower_bound(out.report.normalized_congestion)?)
}

pub fn expansion_report(target: Target, budget: usize) -> Result<ExpansionRecord> {
    target.check_budget(budget)?;
    let (name, g, hanoi) = target.build()?;
    let edge: CutWitness = parallel_edge_expansion(&g, budget)?;
    let vertex = if g.len() <= VERTEX_EXPANSION_LIMIT { Some(exact_vertex_expansion(&g, budget)?) } else { None };
    let (witness, lower) = match hanoi {
        Some(h) => (
            Some(witness_cut_bound(h.p(), h.n()).to_string()),
            Some(flow_lower_bound(h.p(), h.n())?.to_string()),
        ),
        None => (None, None),
    };
    Ok(ExpansionRecord {
        graph: name,
        vertices: g.len(),
        edge_expansion: edge.ratio().to_string(),
        edge_boundary: edge.boundary,
        edge_witness: edge.set,
        vertex_expansion: vertex.as_ref().map(|w| w.ratio().to_string()),
        vertex_witness: vertex.map(|w| w.set),
        witness_upper_bound: witness,
        flow_lower_bound: lower,
    })
}

pub fn treewidth_report(target: Target, budget: usize) -> Result<TreewidthRecord> {
    target.check_budget(budget)?;
    let (name, g, hanoi) = target.build()?;
    let cert = exact_treewidth(&g, budget)?;
    let flow_lower_bound = match hanoi {
        Some(h) => Some(treewidth_lower_bound(flow_lower_bound(h.p(), h.n())?, g.max_degree(), g.len()).to_string()),
        None => None,
    };
    Ok(TreewidthRecord {
        graph: name,
        vertices: g.len(),
        treewidth: cert.width,
        elimination_order: cert.elimination_order,
        flow_lower_bound,
    })
}

pub fn render_expansion_text(r: &ExpansionRecord) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}: {} vertices", r.graph, r.vertices);
    let _ = writeln!(s, "edge expansion {} (boundary {}, set {:?})", r.edge_expansion, r.edge_boundary, r.edge_witness);
    match (&r.vertex_expansion, &r.vertex_witness) {
        (Some(h), Some(set)) => {
            let _ = writeln!(s, "vertex expansion {h} (set {set:?})");
        }
        _ => {
            let _ = writeln!(s, "vertex expansion skipped above {VERTEX_EXPANSION_LIMIT} vertices");
        }
    }
    if let (Some(lo), Some(hi)) = (&r.flow_lower_bound, &r.witness_upper_bound) {
        let _ = writeln!(s, "flow lower bound {lo} <= h <= witness bound {hi}");
    }
    s
}

pub fn render_treewidth_text(r: &TreewidthRecord) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}: {} vertices, treewidth {}", r.graph, r.vertices, r.treewidth);
    let _ = writeln!(s, "elimination order {:?}", r.elimination_order);
    if let Some(lb) = &r.flow_lower_bound {
        let _ = writeln!(s, "treewidth lower bound from flow: {lb}");
    }
    s
}
