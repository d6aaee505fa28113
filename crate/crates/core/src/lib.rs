//! Exact computations with graded algebras, their truncated quotients and
//! matrix wreath products.

pub mod cli;
pub mod error;
pub mod expr;
pub mod free;
pub mod growth;
pub mod quotient;
pub mod sample;
pub mod scalar;
pub mod sparse;
pub mod subspace;
pub mod wreath;

pub use error::{Error, Result};
pub use growth::GrowthTable;
pub use quotient::{AlgElement, OverflowPolicy, Presentation, TruncatedAlgebra};
pub use free::{Alphabet, FreeElement, Word};
pub use scalar::{FieldSpec, Scalar};
pub use sparse::SparseVec;
pub use subspace::Subspace;
