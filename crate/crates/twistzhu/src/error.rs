//! Error type shared by every layer of the crate.

use thiserror::Error;

use crate::rat::FracExp;

/// Crate-wide error enum. Exactness is the whole point of this library, so
/// anything that would force an approximation (cutoff overflow, uncertified
/// residue) is an error, never a silent truncation.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// An exact result would contain components of weight above the
    /// configured cutoff.
    #[error("weight cutoff overflow: result needs weight {needed} but cutoff is {cutoff}")]
    CutoffOverflow { needed: FracExp, cutoff: FracExp },

    /// Operation applied to a vector in the wrong sector.
    #[error("sector mismatch: {0}")]
    SectorMismatch(String),

    /// Mode index outside the coset forced by the eigenvalue/sector pair.
    #[error("invalid mode index {index}: {reason}")]
    InvalidModeIndex { index: FracExp, reason: String },

    /// Residue extraction on a truncated series whose certified range does
    /// not include the exponent -1.
    #[error("uncertified residue: truncation order {order} does not certify exponent -1")]
    UncertifiedResidue { order: FracExp },

    /// A chain containment O_{g,n} ⊆ O_{g,n-1/T} failed; carries a witness.
    #[error("chain containment failure: {0}")]
    ChainContainment(String),

    /// Precondition violation (bad n, bad r range, non-homogeneous input, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
