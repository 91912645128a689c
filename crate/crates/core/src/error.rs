use core::fmt;

use crate::Vertex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Peg count below 3 or disc count below 1.
    InvalidParameters { p: usize, n: usize },
    InvalidConfiguration { disc: usize, peg: usize, p: usize },
    IndexOutOfRange { index: usize, vertex_count: usize },
    CannotPartition,
    InvalidFacet { i: usize, j: usize, p: usize },
    NotSiblings,
    FacetOwnerMismatch,
    FacetSizeMismatch { source: usize, sink: usize },
    /// `p^n` does not fit the index type.
    TooLarge { p: usize, n: usize },
    BudgetExceeded { what: &'static str, vertices: usize, budget: usize },
    Composition(&'static str),
    UndefinedBound,
    Disconnected,
    NotAnEdge { tail: Vertex, head: Vertex },
    MissingPerSourceFlows,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameters { p, n } => {
                write!(f, "invalid parameters p={p}, n={n}: need p >= 3 and n >= 1")
            }
            Error::InvalidConfiguration { disc, peg, p } => {
                write!(f, "disc {disc} is on peg {peg}, outside 1..={p}")
            }
            Error::IndexOutOfRange { index, vertex_count } => {
                write!(f, "index {index} out of range for {vertex_count} vertices")
            }
            Error::CannotPartition => write!(f, "a subgraph with no free discs cannot be partitioned"),
            Error::InvalidFacet { i, j, p } => {
                write!(f, "facet pegs ({i}, {j}) must be distinct and within 1..={p}")
            }
            Error::NotSiblings => write!(f, "handles are not siblings of one partition"),
            Error::FacetOwnerMismatch => write!(f, "facet does not belong to the given subgraph"),
            Error::FacetSizeMismatch { source, sink } => {
                write!(f, "source facet has {source} vertices but sink facet has {sink}")
            }
            Error::TooLarge { p, n } => write!(f, "H_{p}^{n} has too many vertices to index"),
            Error::BudgetExceeded { what, vertices, budget } => write!(
                f,
                "{what} refused: {vertices} vertices exceeds the budget of {budget}; use bounds-only mode"
            ),
            Error::Composition(why) => write!(f, "cannot compose flows: {why}"),
            Error::UndefinedBound => write!(f, "expansion bound is undefined for zero congestion"),
            Error::Disconnected => write!(f, "graph is disconnected"),
            Error::NotAnEdge { tail, head } => write!(f, "({tail}, {head}) is not an arc of the graph"),
            Error::MissingPerSourceFlows => {
                write!(f, "per-source flows are required but were not built")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
