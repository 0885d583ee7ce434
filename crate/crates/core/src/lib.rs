//! Adaptive weights community detection (AWCD) on undirected graphs.
//!
//! Detection lives in [`awcd`]; block model sampling in [`sbm`]. The `awcd`
//! binary is a thin layer over [`experiments`].

pub mod awcd;
pub mod bitset;
pub mod eval;
pub mod experiments;
pub mod graph;
pub mod sbm;
pub mod theory;

pub use awcd::{AwcdConfig, CountPair, TestMatrix, Variant, VariantTag, WeightMatrix};
pub use graph::{Graph, VertexSet};
pub use sbm::{Labeling, SbmSpec};
