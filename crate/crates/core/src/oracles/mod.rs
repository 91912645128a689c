//! Independent ground truth on small graphs.

mod expansion;
mod relations;
mod treewidth;

pub use expansion::{
    brute_force_edge_expansion, brute_force_vertex_expansion, check_input, connected_vertex_expansion,
    edge_expansion_from_root, exact_edge_expansion, exact_vertex_expansion, hanoi_witness_cut,
    witness_cut_bound, CutWitness, DEFAULT_EXPANSION_BUDGET,
};
pub use relations::{check_relations, treewidth_lower_bound, Relation, RelationInputs};
pub use treewidth::{elimination_width, exact_treewidth, TreewidthCertificate, DEFAULT_TREEWIDTH_BUDGET};
