//! Frame-based phase retrieval: stability certification and instability witnesses.
//!
//! A vector `f` in a real or complex Hilbert space can at best be recovered
//! from the magnitudes `|<f, phi_n>|` up to a global unimodular factor. This
//! crate provides the numerical machinery to study when that recovery is
//! stable:
//!
//! * [`hilbert`] — field-aware vectors, the quotient metric on `H/~`, and the
//!   rank-one lifting `f -> f f*`.
//! * [`frames`] — finite frames, lazily generated countable frames (shifted
//!   sinc, near-orthonormal Riesz, plain orthonormal), measurement maps and
//!   frame bounds, plus a perturbation that destroys phase retrieval.
//! * [`stability`] — complement-property certification, lower Lipschitz
//!   constants for finite frames, and restricted Hölder-type stability on
//!   nested subspace chains.
//! * [`instability`] — explicit witness pairs showing that no countable frame
//!   admits a uniform lower Lipschitz bound, and the exactly computable
//!   quarter-shift sinc example with its exponentially degrading local
//!   stability constant.

pub mod frames;
pub mod hilbert;
pub mod instability;
pub mod report;
pub mod stability;

mod linalg;
mod util;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("field mismatch: operands use different scalar fields")]
    FieldMismatch,

    #[error("frame has no vectors")]
    EmptyFrame,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("exhaustive subset enumeration limited to {max} vectors, got {n}")]
    SubsetLimit { n: usize, max: usize },

    #[error("holder exponent requires gamma > 1, got {0}")]
    GammaOutOfRange(f64),

    #[error("integer overflow in exact arithmetic: {0}")]
    Overflow(String),

    #[error("window of {window} cannot certify the series tail below {target:e}")]
    WindowTooSmall { window: usize, target: f64 },

    #[error("search budget exhausted; best certified bound {best:e}")]
    BudgetExhausted { best: f64 },

    #[error("block {m} failed its phase-retrieval certificate")]
    BlockCertificate { m: usize },

    #[error("vector does not lie in the subspace chain (residual {residual:e})")]
    NotInChain { residual: f64 },

    #[error("invalid frame file: {0}")]
    FrameFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
