//! Exact character-theoretic analysis of finite groups at desk scale.
//!
//! The crate builds finite groups from built-in families or polycyclic
//! presentation files, computes their irreducible character tables exactly
//! by the modular (Dixon) method, and derives vanishing-element statistics:
//! per-character zero counts, root-of-unity counts, minimum vanishing counts
//! over non-linear characters, and proportion checks. Every counted quantity
//! is produced by exact integer or cyclotomic-integer arithmetic; there is
//! no floating point anywhere in the pipeline.

pub mod chartab;
pub mod cli;
pub mod cyclo;
pub mod error;
pub mod group;
pub mod io;
pub mod structure;
pub mod zeros;

pub use error::{Error, Result};
