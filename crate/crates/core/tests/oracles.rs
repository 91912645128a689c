use hanoiflow_core::oracles::{
    brute_force_edge_expansion, brute_force_vertex_expansion, check_relations, connected_vertex_expansion,
    edge_expansion_from_root, elimination_width, exact_edge_expansion, exact_treewidth, exact_vertex_expansion,
    hanoi_witness_cut, witness_cut_bound, RelationInputs,
};
use hanoiflow_core::{Exact, HanoiGraph, SmallGraph};
use proptest::prelude::*;

fn connected_graph(max: usize) -> impl Strategy<Value = SmallGraph> {
    (2usize..=max).prop_flat_map(|k| {
        let parents: Vec<_> = (1..k).map(|v| 0..v).collect();
        (parents, prop::collection::vec((0..k, 0..k), 0..2 * k)).prop_map(move |(parents, extra)| {
            let mut g = SmallGraph::new(k);
            for (v, &u) in parents.iter().enumerate() {
                g.add_edge(u, v + 1);
            }
            for (u, v) in extra {
                if u != v {
                    g.add_edge(u, v);
                }
            }
            g
        })
    })
}

fn induces_connected(g: &SmallGraph, mask: u64) -> bool {
    let mut reached = mask & mask.wrapping_neg();
    loop {
        let next = reached | (g.neighborhood(reached) & mask);
        if next == reached {
            return reached == mask;
        }
        reached = next;
    }
}

/// Minimum elimination width over every vertex order.
fn treewidth_by_permutations(g: &SmallGraph) -> usize {
    fn go(g: &SmallGraph, order: &mut Vec<usize>, used: u64, best: &mut usize) {
        if order.len() == g.len() {
            *best = (*best).min(elimination_width(g, order));
            return;
        }
        for v in 0..g.len() {
            if used >> v & 1 == 0 {
                order.push(v);
                go(g, order, used | 1 << v, best);
                order.pop();
            }
        }
    }
    let mut best = usize::MAX;
    go(g, &mut Vec::new(), 0, &mut best);
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn connected_edge_search_matches_brute_force(g in connected_graph(14)) {
        let fast = exact_edge_expansion(&g, 30).unwrap();
        let slow = brute_force_edge_expansion(&g).unwrap();
        prop_assert_eq!(fast.ratio(), slow.ratio());
        // Ties may resolve differently: the brute force can return a
        // disconnected set, so check the witness on its own.
        let mask = fast.set.iter().fold(0u64, |m, &v| m | 1 << v);
        prop_assert_eq!(g.cut_size(mask), fast.boundary);
        prop_assert!(fast.size() <= g.len() / 2);
        prop_assert!(induces_connected(&g, mask));
    }

    #[test]
    fn vertex_search_matches_brute_force(g in connected_graph(14)) {
        let fast = exact_vertex_expansion(&g, 30).unwrap();
        let slow = brute_force_vertex_expansion(&g).unwrap();
        prop_assert_eq!(fast.ratio(), slow.ratio());
        prop_assert_eq!(&fast.set, &slow.set);
        prop_assert!(connected_vertex_expansion(&g, 30).unwrap().ratio() >= fast.ratio());
    }

    #[test]
    fn root_split_search_agrees(g in connected_graph(12)) {
        let mut best: Option<_> = None;
        for root in 0..g.len() {
            if let Some(w) = edge_expansion_from_root(&g, root, best.as_ref()) {
                best = Some(w);
            }
        }
        prop_assert_eq!(best.unwrap(), exact_edge_expansion(&g, 30).unwrap());
    }

    #[test]
    fn treewidth_matches_all_orders(g in connected_graph(7)) {
        let cert = exact_treewidth(&g, 20).unwrap();
        prop_assert_eq!(cert.width, treewidth_by_permutations(&g));
        prop_assert_eq!(elimination_width(&g, &cert.elimination_order), cert.width);
    }

    #[test]
    fn relation_chain_holds(g in connected_graph(10)) {
        let inputs = RelationInputs {
            edge_expansion: exact_edge_expansion(&g, 30).unwrap().ratio(),
            vertex_expansion: exact_vertex_expansion(&g, 30).unwrap().ratio(),
            max_degree: g.max_degree(),
            treewidth: exact_treewidth(&g, 20).unwrap().width,
            vertex_count: g.len(),
        };
        prop_assert_eq!(check_relations(&inputs), Ok(()));
    }
}

#[test]
fn star_needs_disconnected_sets_for_vertex_expansion() {
    let g = SmallGraph::star(4);
    assert_eq!(exact_vertex_expansion(&g, 30).unwrap().ratio(), Exact::new(1, 2));
    assert_eq!(connected_vertex_expansion(&g, 30).unwrap().ratio(), Exact::new(1, 1));
}

#[test]
fn hanoi_witness_matches_formula() {
    for p in 3..=5 {
        for n in 1..=4 {
            let g = HanoiGraph::new(p, n).unwrap();
            assert_eq!(hanoi_witness_cut(&g).unwrap().ratio(), witness_cut_bound(p, n));
        }
    }
}

#[test]
fn hanoi_expansion_anchors() {
    let cases = [(3, 1, Exact::new(2, 1)), (3, 2, Exact::new(2, 3)), (4, 1, Exact::new(2, 1)), (4, 2, Exact::new(1, 1))];
    for (p, n, h) in cases {
        let g = SmallGraph::from_hanoi(&HanoiGraph::new(p, n).unwrap()).unwrap();
        assert_eq!(exact_edge_expansion(&g, 30).unwrap().ratio(), h);
        assert_eq!(brute_force_edge_expansion(&g).unwrap().ratio(), h);
    }
}
