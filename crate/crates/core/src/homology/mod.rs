//! Exact linear algebra and flag-complex homology.

pub mod field;
pub mod flag;
pub mod matrix;

pub use field::{ExactField, FieldError};
pub use flag::{betti_csv, euler_char_cliques, reduced_betti, FlagComplex, FlagError};
pub use matrix::FieldMatrix;
