//! Information distances computed exactly at desk scale: a small prefix
//! machine, exhaustive complexity tables, the distances built on them, and
//! the supporting constructions (conversion graphs, colorings, reversible
//! machines), plus a compression-based estimate for real files.

pub mod codes;
pub mod coloring;
pub mod complexity;
pub mod conversion;
pub mod density;
pub mod machine;
pub mod ncd;
pub mod reversible;
pub mod scalar;

pub use codes::BitString;
pub use complexity::ComplexityTable;
pub use machine::ExecBudget;

/// Weight type for exact Kraft sums.
pub type ExactWeight = num_rational::BigRational;
