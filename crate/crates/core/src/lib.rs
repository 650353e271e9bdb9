//! Tree covers for planar and bounded-treewidth graphs.
//!
//! The crate builds gridtree hierarchies and shortcut partitions of planar
//! graphs, turns them into additive and multiplicative tree covers, embeds
//! planar graphs into low-treewidth hosts and answers approximate distance
//! queries from a cover.

pub mod decomposition;
pub mod embedding;
pub mod error;
pub mod exact_cover;
pub mod forest_cover;
pub mod generate;
pub mod graph;
pub mod gridtree;
pub mod io;
pub mod mult;
pub mod oracle;
pub mod partition;
pub mod sssp;
pub mod tree;
pub mod tw_embed;
pub mod tw_partition;

pub use decomposition::TreeDecomposition;
pub use embedding::{FaceIndex, PlanarEmbedding};
pub use error::{Error, Result};
pub use graph::{Edge, WeightedGraph};
pub use sssp::{ExactOracle, ShortestPathTree};
