//! Exact-arithmetic workbench for Hochschild homology of bound quiver
//! algebras and their split extensions.
//!
//! The crate builds finite-dimensional algebras from quivers with admissible
//! relations, presents split extensions `A = B ⊕ M` from a marked arrow set,
//! and computes — entirely over `Q` or `GF(p)` — Hochschild chain complexes,
//! relative chain and cochain complexes, reduced relative bar resolutions
//! with their contracting homotopy, long exact sequence verification with an
//! explicitly constructed connecting map, projective resolutions, Tor over
//! enveloping algebras, and global-dimension / homology-vanishing transfer
//! reports for split bounded extensions.

pub mod algebra;
pub mod bar;
pub mod bimodule;
pub mod complex;
pub mod config;
pub mod jz;
pub mod linalg;
pub mod pipeline;
pub mod quiver;
pub mod report;
pub mod resolution;
pub mod samples;
pub mod scalar;
pub mod tensor;

pub use scalar::{Field, Scalar};
