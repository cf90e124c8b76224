//! Exact-arithmetic construction of wreath products of finite-dimensional
//! Lie algebras, extensions by factor sets, and the embedding of any such
//! extension into the wreath product, with machine-checked certificates.
//!
//! The pipeline: describe M, L, a right derivation action, and a factor set
//! ([`extension::ExtensionData`]); validate the cocycle conditions; build the
//! extension algebra N; build the embedding tables up to a truncation degree
//! ([`embedding::build_tables`]); and emit certificates that the embedding
//! is an injective Lie homomorphism ([`embedding::EmbeddingTables::verify_relations`],
//! [`embedding::EmbeddingTables::verify_homomorphism`]).
//!
//! All arithmetic is exact: rationals of arbitrary precision or an odd prime
//! field. Certificate generation and the validators fan out over rayon by
//! default; disable the `parallel` feature for a sequential build.

pub mod embedding;
pub mod extension;
pub mod fixtures;
pub mod lie;
pub mod linalg;
mod par;
pub mod pbw;
pub mod presentation;
pub mod report;
pub mod scalar;
pub mod wreath;

pub use extension::{build_extension, extract_factor_set, ExtensionAlgebra, ExtensionData};
pub use lie::{LieAlgebra, RightAction, Vector};
pub use scalar::{FieldSpec, Scalar};
