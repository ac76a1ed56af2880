//! Orthocomplemented difference posets: finite orthoposets with a
//! symmetric-difference operation.
//!
//! - [`poset`]: order, complement, bounds, meets and joins, DOT export
//! - [`odp`]: the difference table and its axioms
//! - [`frink`]: Frink ideals, selectivity, maximal ideal enumeration
//! - [`classes`]: the classes ℛ, 𝒮, 𝒯 and compatibility
//! - [`construct`]: generators, products, Δ-subgroups, set representation
//! - [`epset`]: eventually periodic subsets of ℕ and the infinite examples
//! - [`format`]: structure files
//! - [`suite`]: the corpus-wide property checks

pub mod classes;
pub mod construct;
pub mod corpus;
pub mod epset;
pub mod error;
pub mod format;
pub mod frink;
pub mod odp;
pub mod poset;
pub mod report;
pub mod suite;

pub use classes::{classify, ClassReport};
pub use error::{OdpError, Result};
pub use odp::{DeltaTable, Odp};
pub use poset::{ElemSet, FinOrthoPoset};
pub use report::{Axiom, CheckOptions, ViolationReport};
