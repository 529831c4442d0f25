//! Crate-wide error type.
//!
//! Errors are grouped by kind rather than by module: `Domain` for caller
//! mistakes (bad parameters, undefined quantities), `Backend` for mixing
//! elements across group representations, `Presentation` for rejected
//! polycyclic input, `Internal`/`TableIntegrity` for consistency checks that
//! can only fail on an implementation bug, and `Parse`/`Io` for file input.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An element was used with a group of a different backend.
    #[error("backend mismatch: {0}")]
    Backend(String),

    /// The operation is undefined for the given input.
    #[error("domain error: {0}")]
    Domain(String),

    /// A polycyclic presentation failed validation or the closure check.
    #[error("inconsistent presentation: {0}")]
    Presentation(String),

    /// Collection from the left exceeded the per-product step budget.
    #[error("collection step budget exceeded ({0} steps)")]
    CollectionBudget(u64),

    /// Enumeration refused: the group order exceeds the desk-scale cap.
    #[error("group order {order} exceeds enumeration cap {cap}")]
    OrderCap { order: u128, cap: u64 },

    /// An internal invariant failed; this signals a bug, not bad input.
    #[error("internal consistency error: {0}")]
    Internal(String),

    /// A computed character table failed one of its integrity checks.
    #[error("table integrity failure: {0}")]
    TableIntegrity(String),

    /// An enumeration was cut off by its configured search limit.
    #[error("partial result: {0}")]
    Partial(String),

    /// Malformed input file, with the first offending field named.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
