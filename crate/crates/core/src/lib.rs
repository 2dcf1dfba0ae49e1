//! Exact computations in the non-oriented graph complex.
//!
//! Graphs carry an edge ordering; swapping two edges negates the graph. The
//! crate provides canonical reduction with sign tracking, the insertion
//! bracket and differential, enumeration of bases up to isomorphism, sparse
//! rational linear algebra, and the wheel cocycles with the dimension tables
//! they sit in.

pub mod algebra;
pub mod canon;
pub mod catalog;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod rational;

pub use algebra::{
    bracket, bracket_reduced, bracket_sums, differential, differential_of_graph, insert, reduce,
    GraphSum, Term,
};
pub use canon::{analyze, canonicalize, is_zero, Analysis, CanonicalResult, Sign};
pub use catalog::{
    bracket_cocycle_check, cohomology_report, gamma3, gamma5, gamma7, verify_cocycle,
    DimensionReport,
};
pub use enumerate::{enumerate_basis, enumerate_counts_only, BasisReport, BasisSpec};
pub use error::{AlgebraError, CatalogError, GraphError, LinalgError, ParseError};
pub use graph::{parse_graph, serialize_graph, Edge, Graph};
pub use linalg::{nullity, rank, solve_kernel, KernelSolution, RankMode, SparseRationalMatrix};
pub use rational::Rational;
