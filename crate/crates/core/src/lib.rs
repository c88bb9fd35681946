//! Exact centralizer-algebra invariants of a square matrix over ℚ or GF(p).
//!
//! Given `T`, the library factors its characteristic polynomial, extracts the
//! partition attached to each primary component, and evaluates the Cartan
//! matrix, its determinant, the global dimension and the dimensions of the
//! centralizer algebra, its radical, simples and projectives. Everything is
//! exact; [`oracle`] recomputes the same quantities by brute force.

pub mod cartan;
pub mod cli;
pub mod error;
pub mod field;
pub mod linalg;
pub mod oracle;
pub mod polynomial;
pub mod structure;

pub use cartan::{
    assemble_report, assemble_report_with, cartan_det, cartan_matrix, cartan_profile, dimension_report,
    global_dimension, AnalysisReport, AnalyzeOptions, BlockReport, CartanProfile, GlobalDimension,
};
pub use error::{Error, Result};
pub use field::{make_field, FieldSpec, Scalar};
pub use linalg::{Matrix, SubspaceBasis};
pub use polynomial::{factor, factor_with_seed, is_irreducible, squarefree_decomposition, IrreducibleFactor, Poly};
pub use structure::{extract_partition, primary_decomposition, PartitionData, PrimaryComponent};
