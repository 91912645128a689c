//! The acceptance checks, runnable from the CLI and from tests.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use hanoiflow_core::builder::{build_uniform_mcf, BuildMode};
use hanoiflow_core::hanoi::{config_to_index, index_to_config};
use hanoiflow_core::msf::expansion_lower_bound;
use hanoiflow_core::oracles::{
    brute_force_edge_expansion, brute_force_vertex_expansion, check_relations, connected_vertex_expansion,
    exact_edge_expansion, exact_treewidth, exact_vertex_expansion, hanoi_witness_cut, treewidth_lower_bound,
    witness_cut_bound, RelationInputs,
};
use hanoiflow_core::{Amount, Exact, HanoiGraph, SmallGraph, SubgraphHandle};
use serde::Serialize;

use crate::commands::{flow_report, growth, FlowOptions};
use crate::error::{Error, Result};
use crate::random;
use crate::search::parallel_edge_expansion;

pub const STRUCTURE_TIME_LIMIT: Duration = Duration::from_secs(10);
pub const FLOW_TIME_LIMIT: Duration = Duration::from_secs(60);
pub const EXPANSION_TIME_LIMIT: Duration = Duration::from_secs(300);

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {} {}: {} ({:.2?})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed
        )
    }
}

fn timed(id: u8, name: &'static str, check: impl FnOnce() -> Result<(bool, String)>) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult { id, name, passed, detail, elapsed: start.elapsed() }
}

fn q(n: i64, d: i64) -> Exact {
    Exact::from_frac(n, d)
}

fn ipow(b: usize, e: usize) -> usize {
    b.pow(e as u32)
}

/// Every handle of `H_p^n` with at least one free disc, parents first.
fn partition_handles(g: &HanoiGraph) -> Result<Vec<SubgraphHandle>> {
    let mut out = vec![g.root()];
    let mut i = 0;
    while i < out.len() {
        let h = out[i];
        if h.free_discs() >= 2 {
            out.extend(h.partition_by_largest()?);
        }
        i += 1;
    }
    Ok(out)
}

/// Codec, boundary matchings at every level of the partition, facet sizes
/// and facet decomposition on `H_p^n`. Returns the number of checks that failed
/// and a count of checks made.
fn structure_checks(p: usize, n: usize) -> Result<(usize, usize)> {
    let g = HanoiGraph::new(p, n)?;
    let (mut checks, mut failures) = (0usize, 0usize);
    let mut expect = |ok: bool| {
        checks += 1;
        failures += usize::from(!ok);
    };
    for v in 0..g.vertex_count() {
        let c = index_to_config(v, p, n)?;
        expect(config_to_index(&c, p)? == v);
    }
    for parent in partition_handles(&g)? {
        let children = parent.partition_by_largest()?;
        let m = parent.free_discs() - 1;
        for a in 1..=p {
            for b in a + 1..=p {
                let (x, y) = (&children[a - 1], &children[b - 1]);
                let boundary = x.boundary(y)?;
                expect(boundary.is_matching());
                expect(boundary.edges.len() == ipow(p - 2, m));
                expect(boundary.near == x.facet(a, b)?.vertices());
                expect(boundary.far == y.facet(a, b)?.vertices());
                let facet = parent.facet(a, b)?;
                expect(facet.len() == ipow(p - 2, m + 1));
                let mut union = Vec::with_capacity(facet.len());
                let mut parts = 0;
                for child in &children {
                    if let Some(part) = facet.restrict(child)? {
                        parts += 1;
                        expect(part.len() == ipow(p - 2, m));
                        union.extend_from_slice(part.vertices());
                    }
                }
                expect(parts == p - 2);
                union.sort_unstable();
                expect(union == facet.vertices());
            }
        }
    }
    Ok((failures, checks))
}

pub fn criterion_structure() -> CriterionResult {
    let start = Instant::now();
    let mut r = timed(1, "structure", || {
        let (mut failures, mut checks) = (0, 0);
        for p in 3..=5 {
            for n in 2..=6 {
                let (f, c) = structure_checks(p, n)?;
                failures += f;
                checks += c;
            }
        }
        Ok((
            failures == 0,
            format!("p in 3..=5, n in 2..=6: {checks} exact checks, {failures} failed"),
        ))
    });
    if start.elapsed() > STRUCTURE_TIME_LIMIT {
        r.passed = false;
        r.detail.push_str(&format!("; over the {STRUCTURE_TIME_LIMIT:?} limit"));
    }
    r
}

pub fn criterion_flow_validity() -> CriterionResult {
    timed(2, "flow validity", || {
        let mut parts = Vec::new();
        let mut ok = true;
        for (p, n) in [(3, 2), (3, 3), (4, 2)] {
            let start = Instant::now();
            let opts = FlowOptions { exact: true, per_commodity: true, ..Default::default() };
            let r = flow_report(p, n, opts)?;
            let elapsed = start.elapsed();
            let within = elapsed <= FLOW_TIME_LIMIT;
            ok &= r.validation.passed && within;
            parts.push(format!(
                "H_{p}^{n} {} problems, {} failed, {elapsed:.2?}{}",
                r.validation.problems_checked,
                r.validation.failures,
                if within { "" } else { " (over time limit)" }
            ));
        }
        Ok((ok, format!("exact per-commodity: {}", parts.join("; "))))
    })
}

/// `2(p-1)(p-2)/p^2`: with per-edge distribution load at most the facet
/// surplus, a level adds at most this times `(p/(p-2))^m` to the congestion.
pub fn increment_bound_constant(p: usize) -> Exact {
    let p = p as i64;
    q(2 * (p - 1) * (p - 2), p * p)
}

/// Measured `max_{m in 2..=n} (rho(m) - rho(m-1)) / (p/(p-2))^m`, exactly,
/// and the per-level increments.
pub fn fitted_increment_constant(p: usize, n: usize) -> Result<(Exact, Vec<(usize, Exact)>)> {
    let out = build_uniform_mcf::<Exact>(p, n, BuildMode::Aggregate)?;
    let terms = out.report.per_level_terms;
    let c = terms
        .iter()
        .filter(|(m, _)| *m >= 2)
        .map(|&(m, inc)| inc / growth(p, m))
        .fold(Exact::zero(), Amount::max);
    Ok((c, terms))
}

pub fn criterion_recurrence() -> CriterionResult {
    timed(3, "congestion recurrence", || {
        let mut ok = true;
        let mut parts = Vec::new();
        for p in [3, 4] {
            let (c, terms) = fitted_increment_constant(p, 5)?;
            let (again, _) = fitted_increment_constant(p, 5)?;
            let float = hanoiflow_core::recurrence_ledger(p, 5)?;
            let float_again = hanoiflow_core::recurrence_ledger(p, 5)?;
            let stable = c == again && float.fitted_constant.to_bits() == float_again.fitted_constant.to_bits();
            let within = terms.iter().filter(|(m, _)| *m >= 2).all(|&(m, inc)| inc <= c * growth(p, m));
            let bound = increment_bound_constant(p);
            ok &= stable && within && c <= bound;
            parts.push(format!(
                "p={p}: C={c} ({:.6}), analytic bound {bound}, stable={stable}",
                c.to_f64()
            ));
        }
        Ok((ok, parts.join("; ")))
    })
}

pub fn criterion_sandwich() -> CriterionResult {
    timed(4, "expansion sandwich", || {
        let mut ok = true;
        let mut parts = Vec::new();
        for (p, n) in [(3, 1), (3, 2), (3, 3), (4, 1), (4, 2)] {
            let h = HanoiGraph::new(p, n)?;
            let rho = build_uniform_mcf::<Exact>(p, n, BuildMode::Aggregate)?.report.normalized_congestion;
            let lower = expansion_lower_bound(rho)?;
            let start = Instant::now();
            let exact = parallel_edge_expansion(&SmallGraph::from_hanoi(&h)?, 64)?.ratio();
            let fast = start.elapsed() <= EXPANSION_TIME_LIMIT;
            let upper = witness_cut_bound(p, n);
            let witness_ok = hanoi_witness_cut(&h)?.ratio() == upper;
            ok &= lower <= exact && exact <= upper && witness_ok && fast;
            parts.push(format!("H_{p}^{n}: {lower} <= {exact} <= {upper}"));
        }
        Ok((ok, parts.join("; ")))
    })
}

/// `1 / (2 (rho_1/r + C r/(r-1)))` with `r = p/(p-2)`, `rho_1 = 1/p` and the
/// analytic increment constant: a floor for `(1/(2 rho)) r^n` at every `n`.
pub fn flow_bound_floor(p: usize) -> Exact {
    let r = q(p as i64, p as i64 - 2);
    let rho1 = q(1, p as i64);
    let one = q(1, 1);
    one / (q(2, 1) * (rho1 / r + increment_bound_constant(p) * r / (r - one)))
}

pub fn criterion_trend() -> CriterionResult {
    timed(5, "expansion trend", || {
        let mut ok = true;
        let mut scaled = Vec::new();
        for n in 1..=3 {
            let g = SmallGraph::from_hanoi(&HanoiGraph::new(3, n)?)?;
            scaled.push(parallel_edge_expansion(&g, 64)?.ratio() * growth(3, n));
        }
        let lo = scaled.iter().copied().fold(scaled[0], |a, b| if b < a { b } else { a });
        let hi = scaled.iter().copied().fold(scaled[0], Amount::max);
        // Witness cut times growth is exactly (p-1) p/(p-2) at every n.
        let ceiling = q(6, 1);
        let floor = flow_bound_floor(3);
        ok &= floor <= lo && hi <= ceiling;
        let mut detail = format!("h(H_3^n) 3^n in [{lo}, {hi}] for n=1..=3 (allowed [{floor}, {ceiling}])");
        for p in [3, 4] {
            let floor = flow_bound_floor(p);
            let mut band = Vec::new();
            for n in 1..=5 {
                let rho = build_uniform_mcf::<Exact>(p, n, BuildMode::Aggregate)?.report.normalized_congestion;
                band.push(expansion_lower_bound(rho)? * growth(p, n));
            }
            let min = band.iter().copied().fold(band[0], |a, b| if b < a { b } else { a });
            let max = band.iter().copied().fold(band[0], Amount::max);
            ok &= min >= floor;
            let _ = write!(
                detail,
                "; p={p}: (1/(2rho)) (p/(p-2))^n in [{min}, {max}] for n=1..=5 (floor {floor})"
            );
        }
        Ok((ok, detail))
    })
}

pub fn criterion_chain() -> CriterionResult {
    timed(6, "inequality chain", || {
        let graphs = [
            ("K_3".to_string(), SmallGraph::complete(3), None),
            ("K_4".to_string(), SmallGraph::complete(4), None),
            ("H_3^2".to_string(), SmallGraph::from_hanoi(&HanoiGraph::new(3, 2)?)?, Some((3, 2))),
            ("H_4^2".to_string(), SmallGraph::from_hanoi(&HanoiGraph::new(4, 2)?)?, Some((4, 2))),
        ];
        let mut ok = true;
        let mut parts = Vec::new();
        for (name, g, hanoi) in graphs {
            let inputs = RelationInputs {
                edge_expansion: exact_edge_expansion(&g, 64)?.ratio(),
                vertex_expansion: exact_vertex_expansion(&g, 64)?.ratio(),
                max_degree: g.max_degree(),
                treewidth: exact_treewidth(&g, 20)?.width,
                vertex_count: g.len(),
            };
            let holds = check_relations(&inputs).is_ok();
            ok &= holds;
            let mut part = format!(
                "{name}: h_v={} h={} D={} tw={}",
                inputs.vertex_expansion, inputs.edge_expansion, inputs.max_degree, inputs.treewidth
            );
            if let Some((p, n)) = hanoi {
                let rho = build_uniform_mcf::<Exact>(p, n, BuildMode::Aggregate)?.report.normalized_congestion;
                let from_flow = treewidth_lower_bound(expansion_lower_bound(rho)?, g.max_degree(), g.len());
                let from_h = treewidth_lower_bound(inputs.edge_expansion, g.max_degree(), g.len());
                let tw = Exact::from_count(inputs.treewidth);
                ok &= from_flow <= tw && from_h <= tw;
                let _ = write!(part, " (tw >= {from_h} from h, >= {from_flow} from flow)");
            }
            parts.push(part);
        }
        Ok((ok, parts.join("; ")))
    })
}

pub fn criterion_oracles(seed: u64) -> CriterionResult {
    timed(7, "oracle soundness", || {
        let family = random::graph_family(seed, 10, 12);
        let mut edge_ok = 0;
        let mut vertex_ok = 0;
        let mut connected_vertex_ok = 0;
        for g in &family {
            let brute = brute_force_edge_expansion(g)?;
            let found = exact_edge_expansion(g, 64)?;
            let mask = found.set.iter().fold(0u64, |m, &v| m | 1 << v);
            let witness_ok = g.cut_size(mask) == found.boundary && found.size() <= g.len() / 2;
            edge_ok += usize::from(found.ratio() == brute.ratio() && witness_ok);
            let brute = brute_force_vertex_expansion(g)?;
            vertex_ok += usize::from(exact_vertex_expansion(g, 64)? == brute);
            connected_vertex_ok += usize::from(connected_vertex_expansion(g, 64)?.ratio() == brute.ratio());
        }
        let cliques_ok = (1..=8).all(|k| exact_treewidth(&SmallGraph::complete(k), 20).map(|c| c.width) == Ok(k - 1));
        let mut rng = random::rng(seed);
        let mut trees_ok = true;
        for k in 2..12 {
            let t = random::random_tree(&mut rng, k);
            trees_ok &= exact_treewidth(&t, 20)?.width == 1;
        }
        let ok = edge_ok == family.len() && vertex_ok == family.len() && cliques_ok && trees_ok;
        Ok((
            ok,
            format!(
                "seed {seed}: edge connected=unrestricted {edge_ok}/{n}; vertex oracle=unrestricted {vertex_ok}/{n} \
                 (connected-only vertex sets agree on {connected_vertex_ok}/{n}); treewidth K_1..K_8 {}; \
                 random trees {}",
                if cliques_ok { "ok" } else { "wrong" },
                if trees_ok { "ok" } else { "wrong" },
                n = family.len(),
            ),
        ))
    })
}

pub fn criterion_framework_failure() -> CriterionResult {
    timed(8, "framework failure", || {
        let p = 3;
        let mut ok = true;
        let mut parts = Vec::new();
        for n in 3..=8 {
            let g = HanoiGraph::new(p, n)?;
            let children = g.root().partition_by_largest()?;
            let measured = children[0].boundary(&children[1])?.edges.len();
            // |V_1| |V_2| / |V| for two top-level children.
            let required = ipow(p, n - 1) * ipow(p, n - 1) / ipow(p, n);
            ok &= measured == ipow(p - 2, n - 1) && measured < required;
            parts.push(format!("n={n}: {measured} < {required}"));
        }
        Ok((ok, format!("sibling edges vs |V1||V2|/|V| on H_3^n: {}", parts.join(", "))))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Structural invariants only.
    Quick,
    /// Every criterion, including the exact oracles.
    Full,
}

pub fn run_suite(level: Level, seed: u64) -> Vec<CriterionResult> {
    match level {
        Level::Quick => vec![criterion_structure(), criterion_framework_failure()],
        Level::Full => vec![
            criterion_structure(),
            criterion_flow_validity(),
            criterion_recurrence(),
            criterion_sandwich(),
            criterion_trend(),
            criterion_chain(),
            criterion_oracles(seed),
            criterion_framework_failure(),
        ],
    }
}

/// Checks one instance with exact oracles, refusing graphs above `budget` vertices.
pub fn verify_instance(p: usize, n: usize, budget: usize) -> Result<Vec<CriterionResult>> {
    let h = HanoiGraph::new(p, n)?;
    if h.vertex_count() > budget {
        return Err(Error::ExactBudget { p, n, vertices: h.vertex_count(), budget });
    }
    let mut out = vec![timed(1, "structure", || {
        let (failures, checks) = structure_checks(p, n)?;
        Ok((failures == 0, format!("H_{p}^{n}: {checks} exact checks, {failures} failed")))
    })];
    out.push(timed(2, "flow validity", || {
        let per_commodity = h.vertex_count() <= hanoiflow_core::builder::DEFAULT_PER_SOURCE_BUDGET;
        let r = flow_report(p, n, FlowOptions { exact: true, per_commodity, ..Default::default() })?;
        Ok((
            r.validation.passed,
            format!("{} problems, {} failed", r.validation.problems_checked, r.validation.failures),
        ))
    }));
    out.push(timed(4, "expansion sandwich", || {
        let rho = build_uniform_mcf::<Exact>(p, n, BuildMode::Aggregate)?.report.normalized_congestion;
        let lower = expansion_lower_bound(rho)?;
        let exact = parallel_edge_expansion(&SmallGraph::from_hanoi(&h)?, budget)?.ratio();
        let upper = witness_cut_bound(p, n);
        Ok((lower <= exact && exact <= upper, format!("{lower} <= {exact} <= {upper}")))
    }));
    if h.vertex_count() <= 20 {
        out.push(timed(6, "inequality chain", || {
            let g = SmallGraph::from_hanoi(&h)?;
            let inputs = RelationInputs {
                edge_expansion: exact_edge_expansion(&g, budget)?.ratio(),
                vertex_expansion: exact_vertex_expansion(&g, budget)?.ratio(),
                max_degree: g.max_degree(),
                treewidth: exact_treewidth(&g, 20)?.width,
                vertex_count: g.len(),
            };
            Ok((
                check_relations(&inputs).is_ok(),
                format!(
                    "h_v={} h={} D={} tw={}",
                    inputs.vertex_expansion, inputs.edge_expansion, inputs.max_degree, inputs.treewidth
                ),
            ))
        }));
    }
    Ok(out)
}

pub fn render_text(results: &[CriterionResult]) -> String {
    let mut s = String::new();
    for r in results {
        let _ = writeln!(s, "{}", r.line());
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let _ = writeln!(s, "{passed}/{} criteria passed", results.len());
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_constants() {
        assert_eq!(increment_bound_constant(3), q(4, 9));
        assert_eq!(increment_bound_constant(4), q(3, 4));
        assert_eq!(flow_bound_floor(3), q(9, 14));
        assert_eq!(flow_bound_floor(4), q(4, 13));
    }

    #[test]
    fn handles_cover_every_level() {
        let g = HanoiGraph::new(3, 3).unwrap();
        // every handle with at least one free disc
        assert_eq!(partition_handles(&g).unwrap().len(), 1 + 3 + 9);
    }

    #[test]
    fn instance_refusal() {
        assert!(matches!(verify_instance(3, 9, 30), Err(Error::ExactBudget { vertices: 19683, .. })));
        let results = verify_instance(3, 2, 30).unwrap();
        assert!(results.iter().all(|r| r.passed), "{}", render_text(&results));
    }
}
