use alloc::vec::Vec;

use crate::amount::{Amount, Exact};

/// Exact oracle outputs for one graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationInputs {
    pub edge_expansion: Exact,
    pub vertex_expansion: Exact,
    pub max_degree: usize,
    pub treewidth: usize,
    pub vertex_count: usize,
}

/// One link of `h_v <= h <= Δ h_v <= 3Δ(t+1)/|V|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    VertexBelowEdge,
    EdgeBelowScaledVertex,
    ScaledVertexBelowTreewidthBound,
}

/// Checks the chain `h_v <= h <= Δ h_v <= 3Δ(t+1)/|V|` and returns the
/// links that fail.
pub fn check_relations(inputs: &RelationInputs) -> Result<(), Vec<Relation>> {
    let degree = Exact::from_count(inputs.max_degree);
    let scaled = degree * inputs.vertex_expansion;
    let tw_bound = Exact::from_count(3 * inputs.max_degree * (inputs.treewidth + 1))
        / Exact::from_count(inputs.vertex_count);
    let mut failed = Vec::new();
    if inputs.vertex_expansion > inputs.edge_expansion {
        failed.push(Relation::VertexBelowEdge);
    }
    if inputs.edge_expansion > scaled {
        failed.push(Relation::EdgeBelowScaledVertex);
    }
    if scaled > tw_bound {
        failed.push(Relation::ScaledVertexBelowTreewidthBound);
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(failed)
    }
}

/// Treewidth implied by an edge expansion lower bound: `t >= |V| h / (3Δ) - 1`.
pub fn treewidth_lower_bound(edge_expansion: Exact, max_degree: usize, vertex_count: usize) -> Exact {
    Exact::from_count(vertex_count) * edge_expansion / Exact::from_count(3 * max_degree) - Exact::from_count(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn triangle_chain() {
        let inputs = RelationInputs {
            edge_expansion: Exact::from_count(2),
            vertex_expansion: Exact::from_count(2),
            max_degree: 2,
            treewidth: 2,
            vertex_count: 3,
        };
        assert_eq!(check_relations(&inputs), Ok(()));
    }

    #[test]
    fn reports_broken_links() {
        let inputs = RelationInputs {
            edge_expansion: Exact::from_count(1),
            vertex_expansion: Exact::from_count(2),
            max_degree: 1,
            treewidth: 0,
            vertex_count: 100,
        };
        assert_eq!(
            check_relations(&inputs),
            Err(vec![
                Relation::VertexBelowEdge,
                Relation::ScaledVertexBelowTreewidthBound
            ])
        );
    }
}
