use hanoiflow_core::hanoi::{config_to_index, index_to_config};
use hanoiflow_core::{HanoiGraph, SubgraphHandle};
use proptest::prelude::*;

fn descend(g: &HanoiGraph, pegs: &[usize]) -> SubgraphHandle {
    pegs.iter().fold(g.root(), |h, &peg| h.child(peg).unwrap())
}

fn ipow(b: usize, e: usize) -> usize {
    b.pow(e as u32)
}

fn binom2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// `(p, n, pinned pegs above the parent, sibling pegs a != b)`.
fn sibling_case() -> impl Strategy<Value = (usize, usize, Vec<usize>, usize, usize)> {
    (3usize..=5, 2usize..=6).prop_flat_map(|(p, n)| {
        (Just(p), Just(n), prop::collection::vec(1..=p, 0..n), 1..=p, 1..p).prop_map(
            |(p, n, pinned, a, shift)| {
                let b = (a - 1 + shift) % p + 1;
                (p, n, pinned, a, b)
            },
        )
    })
}

proptest! {
    #[test]
    fn codec_round_trip(p in 3usize..=6, n in 1usize..=7, seed in any::<u64>()) {
        let count = ipow(p, n);
        let v = (seed % count as u64) as usize;
        let c = index_to_config(v, p, n).unwrap();
        prop_assert!(c.pegs().iter().all(|&q| (1..=p).contains(&q)));
        prop_assert_eq!(config_to_index(&c, p).unwrap(), v);
    }

    #[test]
    fn degree_matches_empty_peg_formula(p in 3usize..=6, n in 1usize..=6, seed in any::<u64>()) {
        let g = HanoiGraph::new(p, n).unwrap();
        let v = (seed % g.vertex_count() as u64) as usize;
        let c = g.config(v).unwrap();
        let empty = (1..=p).filter(|q| !c.pegs().contains(q)).count();
        prop_assert_eq!(g.degree(v), binom2(p) - binom2(empty));
        for u in g.neighbor_indices(v) {
            prop_assert!(g.neighbor_indices(u).contains(&v));
            let cu = g.config(u).unwrap();
            let moved: Vec<usize> = (0..n).filter(|&k| cu.pegs()[k] != c.pegs()[k]).collect();
            prop_assert_eq!(moved.len(), 1);
        }
    }

    #[test]
    fn sibling_boundary_is_matching_between_facets((p, n, pinned, a, b) in sibling_case()) {
        let g = HanoiGraph::new(p, n).unwrap();
        let parent = descend(&g, &pinned[..pinned.len().min(n - 1)]);
        let m = parent.free_discs() - 1;
        let (x, y) = (parent.child(a).unwrap(), parent.child(b).unwrap());
        let boundary = x.boundary(&y).unwrap();
        prop_assert!(boundary.is_matching());
        prop_assert_eq!(boundary.edges.len(), ipow(p - 2, m));
        let (near, far) = (x.facet(a, b).unwrap(), y.facet(a, b).unwrap());
        prop_assert_eq!(&boundary.near[..], near.vertices());
        prop_assert_eq!(&boundary.far[..], far.vertices());
        for &(u, w) in &boundary.edges {
            prop_assert_eq!(x.matched_vertex(&y, u), w);
        }
    }

    #[test]
    fn facet_splits_into_equal_child_facets((p, n, pinned, i, j) in sibling_case()) {
        let g = HanoiGraph::new(p, n).unwrap();
        let h = descend(&g, &pinned[..pinned.len().min(n - 1)]);
        let m = h.free_discs();
        let facet = h.facet(i, j).unwrap();
        prop_assert_eq!(facet.len(), ipow(p - 2, m));
        let mut parts = Vec::new();
        for child in h.partition_by_largest().unwrap() {
            if let Some(part) = facet.restrict(&child).unwrap() {
                prop_assert_eq!(part.len(), ipow(p - 2, m - 1));
                parts.extend_from_slice(part.vertices());
            }
        }
        prop_assert_eq!(parts.len(), facet.len());
        parts.sort_unstable();
        prop_assert_eq!(&parts[..], facet.vertices());
    }

    #[test]
    fn prior_framework_condition_fails(n in 3u32..=40) {
        let p = 3u128;
        prop_assert!((p - 2).pow(n - 1) < p.pow(n - 2));
    }
}

#[test]
fn matching_size_for_every_top_level_pair() {
    for p in 3..=5 {
        for n in 2..=6 {
            let g = HanoiGraph::new(p, n).unwrap();
            let parts = g.root().partition_by_largest().unwrap();
            for x in &parts {
                for y in &parts {
                    if x == y {
                        continue;
                    }
                    let b = x.boundary(y).unwrap();
                    assert!(b.is_matching());
                    assert_eq!(b.edges.len(), ipow(p - 2, n - 1), "p={p} n={n}");
                }
            }
        }
    }
}

#[test]
fn facet_membership_matches_configuration() {
    let g = HanoiGraph::new(4, 4).unwrap();
    let h = g.root().child(3).unwrap();
    let facet = h.facet(1, 2).unwrap();
    for v in h.vertices() {
        let c = g.config(v).unwrap();
        let avoids = c.pegs()[..3].iter().all(|&q| q != 1 && q != 2);
        assert_eq!(facet.contains(v), avoids);
    }
}

#[test]
fn edge_recurrence_matches_enumeration() {
    for p in 3..=6 {
        for n in 1..=5 {
            let g = HanoiGraph::new(p, n).unwrap();
            assert_eq!(g.edge_count(), g.edge_count_brute_force());
            assert!(g.is_connected());
        }
    }
}
