//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;

use hanoiflow::verify::{self, CriterionResult};
use hanoiflow_core::oracles::{brute_force_edge_expansion, witness_cut_bound};
use hanoiflow_core::{Exact, HanoiGraph, SmallGraph};

/// Anchors fixed independently of the suite: brute-force expansion over every
/// subset, and exact values solved by hand.
fn anchors() -> CriterionResult {
    let start = std::time::Instant::now();
    let mut failures = Vec::new();
    for (p, n, h) in [(3, 1, Exact::new(2, 1)), (3, 2, Exact::new(2, 3)), (4, 1, Exact::new(2, 1)), (4, 2, Exact::new(1, 1))]
    {
        let g = SmallGraph::from_hanoi(&HanoiGraph::new(p, n).unwrap()).unwrap();
        let brute = brute_force_edge_expansion(&g).unwrap().ratio();
        if brute != h {
            failures.push(format!("h(H_{p}^{n}) = {brute}, expected {h}"));
        }
    }
    if witness_cut_bound(3, 3) != Exact::new(2, 9) {
        failures.push("witness bound on H_3^3".to_string());
    }
    CriterionResult {
        id: 0,
        name: "anchors",
        passed: failures.is_empty(),
        detail: if failures.is_empty() { "brute-force anchors agree".to_string() } else { failures.join("; ") },
        elapsed: start.elapsed(),
    }
}

fn main() -> ExitCode {
    let seed = 0;
    let results = [
        anchors(),
        verify::criterion_structure(),
        verify::criterion_flow_validity(),
        verify::criterion_recurrence(),
        verify::criterion_sandwich(),
        verify::criterion_trend(),
        verify::criterion_chain(),
        verify::criterion_oracles(seed),
        verify::criterion_framework_failure(),
    ];
    print!("{}", verify::render_text(&results));
    if results.iter().all(|r| r.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
