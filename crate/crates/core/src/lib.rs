//! Global identifiability of dynamical networks from their topology.
//!
//! A network `w = G(z) w + r` on a directed graph is identifiable at node `i`
//! from measured nodes `C` when the column of `G` leaving `i` is determined by
//! the transfer matrix rows `C` for every admissible `G`. The [`identify`]
//! module decides this with the graph simplification process in
//! [`simplification`]; the [`oracle`] module cross-checks verdicts with exact
//! rank computations over rational functions from [`ratfunc`].

pub mod error;
pub mod generate;
pub mod graph;
pub mod identify;
pub mod oracle;
pub mod ratfunc;
pub mod simplification;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
