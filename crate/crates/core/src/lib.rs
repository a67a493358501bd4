//! Right-angled Artin groups from their defining graphs: structure,
//! flag-complex and cover homology, finite quotients and growth predictions.

pub mod cover;
pub mod gradients;
pub mod graph;
pub mod hierarchy;
pub mod homology;
pub mod quotients;

pub use graph::{classify, cliques, parse_graph, Classification, SimplicialGraph};
pub use hierarchy::{chi_tree, decompose, level, DecompositionTree};
pub use homology::{ExactField, FieldMatrix};
