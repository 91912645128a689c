//! Hanoi graphs `H_p^n`, the recursive uniform multicommodity flow that
//! certifies their edge expansion, and exhaustive oracles (exact edge and
//! vertex expansion, exact treewidth) to check the resulting bounds on small
//! instances.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line and parallel drivers live in the `hanoiflow` crate.
//!
//! Vertex identity everywhere is the little-endian base-`p` index of a
//! configuration: disc 1 (the smallest) is the least significant digit and
//! peg labels `1..=p` map to digits `0..p`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod amount;
pub mod builder;
pub mod error;
pub mod graph;
pub mod hanoi;
pub mod msf;
pub mod oracles;

pub use amount::{Amount, Exact};
pub use builder::{build_uniform_mcf, recurrence_ledger, BuildMode, BuildOutput, RecurrenceLedger};
pub use error::Error;
pub use graph::{SmallGraph, Topology};
pub use hanoi::{Configuration, Facet, HanoiGraph, SubgraphHandle};
pub use msf::{ArcFlow, CongestionReport, MsfProblem};

/// A vertex of any graph handled by this crate, as a dense index.
pub type Vertex = usize;

pub type Result<T, E = Error> = core::result::Result<T, E>;
