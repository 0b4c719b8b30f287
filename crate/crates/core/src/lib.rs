//! Values of the critical polynomial det(Diag(x) - A_G) of a multigraph, arithmetical
//! structures, and the constructions that realise small values.

pub mod classify;
pub mod constructive;
pub mod density;
pub mod error;
pub mod family;
pub mod graph;
pub mod iso;
pub mod json;
pub mod linalg;
pub mod poly;
pub mod repro;
pub mod search;
pub mod sieve;
pub mod structures;

pub use error::{Error, Result};
pub use family::Family;
pub use graph::Multigraph;
pub use linalg::{ExactMatrix, InvariantFactors};
pub use poly::{evaluate, linear_in_t, matrix_at, DiagonalAssignment, LinearForm};
pub use sieve::{sieve, SieveMode, SieveReport};
pub use structures::{verify_structure, ArithmeticalStructure};
