//! Parallel driver for the exact edge-expansion oracle.

use std::sync::Mutex;

use hanoiflow_core::oracles::{check_input, edge_expansion_from_root, CutWitness};
use hanoiflow_core::SmallGraph;
use rayon::prelude::*;

use crate::error::Result;

/// Exact edge expansion with one task per root vertex (the minimum vertex of
/// the connected sets it enumerates). Every task starts from the best witness
/// found so far. Ties resolve exactly as in the sequential search, so the
/// result does not depend on scheduling.
pub fn parallel_edge_expansion(g: &SmallGraph, budget: usize) -> Result<CutWitness> {
    check_input(g, budget)?;
    // The lowest-index vertex of minimum degree is a valid starting incumbent.
    let v = (0..g.len()).min_by_key(|&v| g.degree(v)).expect("graph is nonempty");
    let incumbent = Mutex::new(CutWitness { set: vec![v], boundary: g.degree(v) });
    (0..g.len()).into_par_iter().for_each(|root| {
        let start = incumbent.lock().expect("no task panics while holding the lock").clone();
        if let Some(found) = edge_expansion_from_root(g, root, Some(&start)) {
            let mut best = incumbent.lock().expect("no task panics while holding the lock");
            if found.better_than(&best) {
                *best = found;
            }
        }
    });
    Ok(incumbent.into_inner().expect("no task panicked"))
}

/// Runs `job` on a pool capped at `workers` threads, or the global pool when `None`.
pub fn with_workers<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| crate::error::Error::Refused(format!("cannot start {w} workers: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::graph_family;
    use hanoiflow_core::oracles::exact_edge_expansion;
    use hanoiflow_core::HanoiGraph;

    #[test]
    fn matches_sequential_search() {
        for g in graph_family(11, 12, 14) {
            assert_eq!(parallel_edge_expansion(&g, 30).unwrap(), exact_edge_expansion(&g, 30).unwrap());
        }
        let h = SmallGraph::from_hanoi(&HanoiGraph::new(3, 3).unwrap()).unwrap();
        let w = with_workers(Some(2), || parallel_edge_expansion(&h, 30)).unwrap().unwrap();
        assert_eq!(w, exact_edge_expansion(&h, 30).unwrap());
    }

    #[test]
    fn refuses_over_budget_and_disconnected() {
        let h = SmallGraph::from_hanoi(&HanoiGraph::new(3, 3).unwrap()).unwrap();
        assert!(parallel_edge_expansion(&h, 20).is_err());
        assert!(parallel_edge_expansion(&SmallGraph::new(3), 20).is_err());
    }
}
