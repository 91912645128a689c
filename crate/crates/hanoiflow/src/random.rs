//! Seeded random graphs for oracle cross-checks.

use hanoiflow_core::SmallGraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly random labelled recursive tree: vertex `v` attaches to a
/// uniform earlier vertex, then labels are shuffled.
pub fn random_tree<R: Rng>(rng: &mut R, vertices: usize) -> SmallGraph {
    let mut labels: Vec<usize> = (0..vertices).collect();
    labels.shuffle(rng);
    let mut g = SmallGraph::new(vertices);
    for v in 1..vertices {
        let u = rng.gen_range(0..v);
        g.add_edge(labels[u], labels[v]);
    }
    g
}

/// A random tree plus each remaining pair independently with probability `extra`.
pub fn random_connected_graph<R: Rng>(rng: &mut R, vertices: usize, extra: f64) -> SmallGraph {
    let mut g = random_tree(rng, vertices);
    for u in 0..vertices {
        for v in u + 1..vertices {
            if g.neighbors_mask(u) >> v & 1 == 0 && rng.gen_bool(extra) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// `count` connected graphs with 4 to `max_vertices` vertices, reproducible from `seed`.
pub fn graph_family(seed: u64, count: usize, max_vertices: usize) -> Vec<SmallGraph> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(4..=max_vertices);
            let extra = rng.gen_range(0.05..0.5);
            random_connected_graph(&mut rng, k, extra)
        })
        .collect()
}
