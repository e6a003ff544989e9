//! Complete enumeration of Picard curves over Q with good reduction away
//! from the prime 3.
//!
//! The computation runs in five layers:
//!
//! * [`nf`] — exact arithmetic in the five number fields unramified outside
//!   {3, oo} of degree at most 6, together with certified complex embeddings.
//! * [`lattice`] — exact-arithmetic LLL reduction used to collapse Baker
//!   bounds.
//! * [`sunit`] — the S-unit equation solver: Baker–Wüstholz bound, lattice
//!   reduction of the bound, and a congruence sieve over exponent vectors.
//! * [`forms`] — binary form algebra: S-proper factorizations, companion
//!   matrices, reconstruction of quartic forms, quintic-linear pairs.
//! * [`curves`] — curve models, cubic twists, Q-isomorphism testing and the
//!   final 63-curve table.
//!
//! [`pipeline`] stitches the layers into cacheable stages driven by the CLI.

pub mod bigfloat;
pub mod curves;
pub mod forms;
pub mod lattice;
pub mod nf;
pub mod pipeline;
pub mod polyq;
pub mod sunit;

pub use curves::{PicardCurve, TwistBlock};
pub use forms::{BinaryForm, FieldSystem};
pub use lattice::IntLattice;
pub use nf::{FieldId, NFElem, PlaceIndex, PlaceKind};
pub use sunit::{BoundReport, ExponentVector, SUnitSolution};

use thiserror::Error;

/// Errors shared across the computation layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(nf::FieldId, nf::FieldId),
    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),
    #[error("zero input to {0}")]
    ZeroInput(&'static str),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("lattice columns are linearly dependent")]
    DependentColumns,
    #[error("basis is not LLL-reduced")]
    NotReduced,
    #[error("bound reduction failed for {field}: no usable lattice scale after {tries} doublings")]
    ReductionFailed { field: nf::FieldId, tries: u32 },
    #[error("data validation failed: {0}")]
    BadData(String),
    #[error("verification mismatch: {0}")]
    VerifyMismatch(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
