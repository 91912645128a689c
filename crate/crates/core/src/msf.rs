//! Multi-way single-commodity flows (MSFs).
//!
//! An MSF problem is a tuple `(S, T, sigma, delta)`. A flow solves it when
//! every vertex's net outflow equals `sigma(v) - delta(v)`, with both
//! functions extended by zero outside their domains. That single rule covers
//! pure sources, pure sinks, vertices in both sets, and transit vertices.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::amount::Amount;
use crate::graph::Topology;
use crate::{Error, Result, Vertex};

/// Relative tolerance for floating-point conservation checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A directed arc `(tail, head)`.
pub type Arc = (Vertex, Vertex);

#[derive(Debug, Clone, PartialEq)]
pub struct MsfProblem<A> {
    surplus: BTreeMap<Vertex, A>,
    demand: BTreeMap<Vertex, A>,
}

impl<A: Amount> MsfProblem<A> {
    pub fn new(surplus: BTreeMap<Vertex, A>, demand: BTreeMap<Vertex, A>) -> Self {
        MsfProblem { surplus, demand }
    }

    /// Constant surplus on every source and constant demand on every sink.
    pub fn uniform(
        sources: impl IntoIterator<Item = Vertex>,
        surplus: A,
        sinks: impl IntoIterator<Item = Vertex>,
        demand: A,
    ) -> Self {
        MsfProblem {
            surplus: sources.into_iter().map(|v| (v, surplus)).collect(),
            demand: sinks.into_iter().map(|v| (v, demand)).collect(),
        }
    }

    pub fn surplus(&self) -> &BTreeMap<Vertex, A> {
        &self.surplus
    }

    pub fn demand(&self) -> &BTreeMap<Vertex, A> {
        &self.demand
    }

    pub fn sources(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.surplus.keys().copied()
    }

    pub fn sinks(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.demand.keys().copied()
    }

    /// The shared surplus value, if `sigma` is constant.
    pub fn constant_surplus(&self) -> Option<A> {
        constant_value(&self.surplus)
    }

    pub fn constant_demand(&self) -> Option<A> {
        constant_value(&self.demand)
    }

    pub fn total_surplus(&self) -> A {
        self.surplus.values().fold(A::zero(), |acc, &x| acc + x)
    }

    pub fn total_demand(&self) -> A {
        self.demand.values().fold(A::zero(), |acc, &x| acc + x)
    }

    pub fn is_balanced(&self, tol: f64) -> bool {
        let (s, d) = (self.total_surplus(), self.total_demand());
        s.close_to(d, tol, s.abs().to_f64().max(1.0))
    }

    /// Expected net outflow at `v`.
    pub fn net(&self, v: Vertex) -> A {
        let s = self.surplus.get(&v).copied().unwrap_or_else(A::zero);
        let d = self.demand.get(&v).copied().unwrap_or_else(A::zero);
        s - d
    }

    fn support(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.surplus.keys().chain(self.demand.keys()).copied()
    }
}

fn constant_value<A: Amount>(map: &BTreeMap<Vertex, A>) -> Option<A> {
    let mut values = map.values();
    let first = *values.next()?;
    values.all(|&x| x == first).then_some(first)
}

/// Sparse nonnegative amounts on directed arcs, kept sorted by `(tail, head)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcFlow<A> {
    amounts: BTreeMap<Arc, A>,
}

impl<A: Amount> Default for ArcFlow<A> {
    fn default() -> Self {
        ArcFlow { amounts: BTreeMap::new() }
    }
}

impl<A: Amount> ArcFlow<A> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_arcs(arcs: impl IntoIterator<Item = (Arc, A)>) -> Self {
        let mut flow = Self::new();
        for (arc, amount) in arcs {
            flow.add(arc.0, arc.1, amount);
        }
        flow
    }

    /// Adds `amount` to arc `(tail, head)`. Zero amounts are not stored.
    pub fn add(&mut self, tail: Vertex, head: Vertex, amount: A) {
        if amount.is_zero() {
            return;
        }
        *self.amounts.entry((tail, head)).or_insert_with(A::zero) += amount;
    }

    pub fn get(&self, tail: Vertex, head: Vertex) -> A {
        self.amounts.get(&(tail, head)).copied().unwrap_or_else(A::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Arc, A)> + '_ {
        self.amounts.iter().map(|(&arc, &x)| (arc, x))
    }

    pub fn len(&self) -> usize {
        self.amounts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amounts.is_empty()
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &ArcFlow<A>, factor: A) {
        for (&(u, v), &x) in &other.amounts {
            self.add(u, v, x * factor);
        }
    }

    /// `self += other` with both endpoints of every arc shifted by `offset`.
    pub fn add_shifted(&mut self, other: &ArcFlow<A>, offset: Vertex, factor: A) {
        for (&(u, v), &x) in &other.amounts {
            self.add(u + offset, v + offset, x * factor);
        }
    }

    pub fn scaled(&self, factor: A) -> Self {
        let mut out = Self::new();
        out.add_scaled(self, factor);
        out
    }

    /// Every arc reversed. Negates every divergence.
    pub fn reversed(&self) -> Self {
        ArcFlow {
            amounts: self.amounts.iter().map(|(&(u, v), &x)| ((v, u), x)).collect(),
        }
    }

    /// Pointwise sum.
    pub fn plus(&self, other: &ArcFlow<A>) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, A::from_count(1));
        out
    }

    /// Net outflow (out minus in) per vertex, for a graph of `vertex_count` vertices.
    pub fn divergence(&self, vertex_count: usize) -> Vec<A> {
        let mut div = vec![A::zero(); vertex_count];
        for (&(u, v), &x) in &self.amounts {
            div[u] += x;
            div[v] = div[v] - x;
        }
        div
    }

    /// Total amount through each vertex (in plus out), used to scale tolerances.
    fn throughput(&self, vertex_count: usize) -> Vec<f64> {
        let mut through = vec![0.0; vertex_count];
        for (&(u, v), &x) in &self.amounts {
            let x = x.to_f64();
            through[u] += x;
            through[v] += x;
        }
        through
    }

    pub fn max_load(&self) -> Option<(Arc, A)> {
        let mut best: Option<(Arc, A)> = None;
        for (&arc, &x) in &self.amounts {
            if best.is_none_or(|(_, b)| x > b) {
                best = Some((arc, x));
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation<A> {
    Conservation { vertex: Vertex, expected: A, actual: A },
    NotAnArc { tail: Vertex, head: Vertex },
    Negative { tail: Vertex, head: Vertex, amount: A },
}

/// Checks that `flow` solves `problem` on `graph`.
///
/// Exact amounts are compared exactly and `tol` is ignored; floating amounts
/// may deviate by `tol` relative to the larger of 1 and the vertex's throughput.
pub fn validate_msf<A: Amount>(
    flow: &ArcFlow<A>,
    problem: &MsfProblem<A>,
    graph: &dyn Topology,
    tol: f64,
) -> core::result::Result<(), Vec<Violation<A>>> {
    let count = graph.vertex_count();
    let mut violations = Vec::new();
    for ((tail, head), amount) in flow.iter() {
        if tail >= count || head >= count || !graph.is_edge(tail, head) {
            violations.push(Violation::NotAnArc { tail, head });
        }
        if amount < A::zero() {
            violations.push(Violation::Negative { tail, head, amount });
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }
    if let Some(v) = problem.support().find(|&v| v >= count) {
        violations.push(Violation::Conservation { vertex: v, expected: problem.net(v), actual: A::zero() });
        return Err(violations);
    }
    let div = flow.divergence(count);
    let through = flow.throughput(count);
    for (v, &actual) in div.iter().enumerate() {
        let expected = problem.net(v);
        let scale = 1f64.max(expected.abs().to_f64()).max(through[v]);
        if !actual.close_to(expected, tol, scale) {
            violations.push(Violation::Conservation { vertex: v, expected, actual });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// `f2 ∘ f1`: the pointwise sum, solving `(S1, T2, sigma1, delta2)`.
///
/// Requires the second problem's sources to be the first problem's sinks
/// with `sigma2 = delta1` there, so the intermediate divergences cancel.
pub fn compose<A: Amount>(
    first: &ArcFlow<A>,
    first_problem: &MsfProblem<A>,
    second: &ArcFlow<A>,
    second_problem: &MsfProblem<A>,
    tol: f64,
) -> Result<(ArcFlow<A>, MsfProblem<A>)> {
    if !first_problem.demand.keys().eq(second_problem.surplus.keys()) {
        return Err(Error::Composition("second sources differ from first sinks"));
    }
    let matches = first_problem
        .demand
        .values()
        .zip(second_problem.surplus.values())
        .all(|(&d, &s)| d.close_to(s, tol, d.abs().to_f64().max(1.0)));
    if !matches {
        return Err(Error::Composition("second surplus differs from first demand"));
    }
    let problem = MsfProblem {
        surplus: first_problem.surplus.clone(),
        demand: second_problem.demand.clone(),
    };
    Ok((first.plus(second), problem))
}

/// Pointwise sum of two flows; sources, sinks, surplus and demand are
/// unioned with zero extension.
pub fn sum<A: Amount>(
    first: &ArcFlow<A>,
    first_problem: &MsfProblem<A>,
    second: &ArcFlow<A>,
    second_problem: &MsfProblem<A>,
) -> (ArcFlow<A>, MsfProblem<A>) {
    let mut problem = first_problem.clone();
    for (&v, &s) in &second_problem.surplus {
        *problem.surplus.entry(v).or_insert_with(A::zero) += s;
    }
    for (&v, &d) in &second_problem.demand {
        *problem.demand.entry(v).or_insert_with(A::zero) += d;
    }
    (first.plus(second), problem)
}

/// Maximum arc load of a commodity-summed flow and its normalization by `|V|`.
#[derive(Debug, Clone, PartialEq)]
pub struct CongestionReport<A> {
    pub vertex_count: usize,
    pub max_arc_load: A,
    /// First arc (in `(tail, head)` order) attaining the maximum.
    pub argmax_arc: Option<Arc>,
    pub normalized_congestion: A,
    /// `(level, congestion added at that level)`, filled by the flow builder.
    pub per_level_terms: Vec<(usize, A)>,
}

pub fn congestion<A: Amount>(aggregate: &ArcFlow<A>, vertex_count: usize) -> CongestionReport<A> {
    let (argmax_arc, max_arc_load) = match aggregate.max_load() {
        Some((arc, x)) => (Some(arc), x),
        None => (None, A::zero()),
    };
    CongestionReport {
        vertex_count,
        max_arc_load,
        argmax_arc,
        normalized_congestion: max_arc_load / A::from_count(vertex_count.max(1)),
        per_level_terms: Vec::new(),
    }
}

/// `h(G) >= 1 / (2 rho)` for a uniform multicommodity flow of congestion `rho`.
pub fn expansion_lower_bound<A: Amount>(rho: A) -> Result<A> {
    if rho <= A::zero() {
        return Err(Error::UndefinedBound);
    }
    Ok(A::from_count(1) / (A::from_count(2) * rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::amount::Exact;
    use crate::graph::SmallGraph;

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_frac(n, d)
    }

    #[test]
    fn zero_flow_solves_zero_problem() {
        let g = SmallGraph::path(3);
        let p = MsfProblem::uniform([0], q(0, 1), [2], q(0, 1));
        assert!(validate_msf(&ArcFlow::new(), &p, &g, 0.0).is_ok());
    }

    #[test]
    fn single_edge_unit_flow() {
        let g = SmallGraph::path(2);
        let f = ArcFlow::from_arcs([((0, 1), q(1, 1))]);
        let p = MsfProblem::uniform([0], q(1, 1), [1], q(1, 1));
        assert!(validate_msf(&f, &p, &g, 0.0).is_ok());

        let p2 = MsfProblem::uniform([0], q(2, 1), [1], q(2, 1));
        let err = validate_msf(&f, &p2, &g, 0.0).unwrap_err();
        assert!(err.contains(&Violation::Conservation { vertex: 0, expected: q(2, 1), actual: q(1, 1) }));
    }

    #[test]
    fn rejects_non_arcs() {
        let g = SmallGraph::path(3);
        let f = ArcFlow::from_arcs([((0, 2), 1.0)]);
        let p = MsfProblem::uniform([0], 1.0, [2], 1.0);
        assert_eq!(
            validate_msf(&f, &p, &g, DEFAULT_TOLERANCE),
            Err(vec![Violation::NotAnArc { tail: 0, head: 2 }])
        );
    }

    #[test]
    fn compose_two_hop_path() {
        let g = SmallGraph::path(3);
        let f1 = ArcFlow::from_arcs([((0, 1), q(1, 1))]);
        let p1 = MsfProblem::uniform([0], q(1, 1), [1], q(1, 1));
        let f2 = ArcFlow::from_arcs([((1, 2), q(1, 1))]);
        let p2 = MsfProblem::uniform([1], q(1, 1), [2], q(1, 1));
        let (f, p) = compose(&f1, &p1, &f2, &p2, 0.0).unwrap();
        assert_eq!(p, MsfProblem::uniform([0], q(1, 1), [2], q(1, 1)));
        assert_eq!(f.get(0, 1), q(1, 1));
        assert_eq!(f.get(1, 2), q(1, 1));
        assert!(validate_msf(&f, &p, &g, 0.0).is_ok());
    }

    #[test]
    fn compose_with_identity() {
        let f1 = ArcFlow::from_arcs([((0, 1), q(1, 1))]);
        let p1 = MsfProblem::uniform([0], q(1, 1), [1], q(1, 1));
        let id = MsfProblem::uniform([1], q(1, 1), [1], q(1, 1));
        let (f, p) = compose(&f1, &p1, &ArcFlow::new(), &id, 0.0).unwrap();
        assert_eq!(f, f1);
        assert_eq!(p, p1);
    }

    #[test]
    fn compose_rejects_mismatched_interface() {
        let f = ArcFlow::<f64>::new();
        let p1 = MsfProblem::uniform([0], 1.0, [1], 1.0);
        let p2 = MsfProblem::uniform([2], 1.0, [3], 1.0);
        assert!(compose(&f, &p1, &f, &p2, DEFAULT_TOLERANCE).is_err());
        let p3 = MsfProblem::uniform([1], 2.0, [3], 2.0);
        assert!(compose(&f, &p1, &f, &p3, DEFAULT_TOLERANCE).is_err());
    }

    #[test]
    fn sum_examples() {
        let f = ArcFlow::from_arcs([((0, 1), q(1, 1))]);
        let p = MsfProblem::uniform([0], q(1, 1), [1], q(1, 1));
        let (s, sp) = sum(&f, &p, &ArcFlow::new(), &MsfProblem::new(BTreeMap::new(), BTreeMap::new()));
        assert_eq!((s, sp), (f.clone(), p.clone()));

        let g = SmallGraph::path(4);
        let f2 = ArcFlow::from_arcs([((2, 3), q(1, 1))]);
        let p2 = MsfProblem::uniform([2], q(1, 1), [3], q(1, 1));
        let (s, sp) = sum(&f, &p, &f2, &p2);
        assert_eq!(s.len(), 2);
        assert_eq!(sp.total_surplus(), q(2, 1));
        assert!(validate_msf(&s, &sp, &g, 0.0).is_ok());
    }

    #[test]
    fn clique_direct_routing_congestion() {
        for k in 3..7 {
            let mut agg = ArcFlow::new();
            for u in 0..k {
                for v in 0..k {
                    if u != v {
                        agg.add(u, v, q(1, 1));
                    }
                }
            }
            let report = congestion(&agg, k);
            assert_eq!(report.max_arc_load, q(1, 1));
            assert_eq!(report.normalized_congestion, q(1, k as i64));
            assert_eq!(report.argmax_arc, Some((0, 1)));
            assert_eq!(expansion_lower_bound(report.normalized_congestion).unwrap(), q(k as i64, 2));
        }
    }

    #[test]
    fn empty_congestion_and_zero_bound() {
        let report = congestion(&ArcFlow::<f64>::new(), 5);
        assert_eq!(report.max_arc_load, 0.0);
        assert_eq!(report.argmax_arc, None);
        assert_eq!(expansion_lower_bound(0.0f64), Err(Error::UndefinedBound));
    }

    #[test]
    fn reversal_negates_divergence() {
        let f = ArcFlow::from_arcs([((0, 1), q(3, 2)), ((1, 2), q(1, 2))]);
        let d = f.divergence(3);
        let r = f.reversed().divergence(3);
        for v in 0..3 {
            assert_eq!(d[v], q(0, 1) - r[v]);
        }
    }
}
