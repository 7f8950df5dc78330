//! CCSDS TC synchronization and channel coding layer with short LDPC codes.
//!
//! Implements the uplink chain end to end: GF(2) linear algebra, quasi-cyclic
//! LDPC code construction, the CCSDS telecommand randomizer, BPSK over AWGN,
//! iterative belief-propagation decoders, CLTU framing with tail-sequence
//! termination, and estimators for the probability that a telecommand is
//! rejected at the receiver.

pub mod analysis;
pub mod channel;
pub mod cltu;
pub mod codes;
pub mod decoder;
pub mod estimators;
pub mod gf2;
pub mod scrambler;

pub use analysis::{ConvergenceHistogram, DistanceReport, SearchEffort};
pub use channel::{ChannelParams, RngStream};
pub use cltu::{CltuConfig, CltuVerdict, StartDetectConfig, TsMode};
pub use codes::{LinearCode, QcBlockEntry, QcMatrixSpec};
pub use decoder::{Algorithm, DecodeOutcome, DecoderConfig, ErrorClass};
pub use estimators::{Estimate, RejectionReport, StoppingRule};
pub use gf2::{BinMatrix, BitWord};

/// Errors produced by fallible operations across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("capability exceeded: {0}")]
    Capability(String),
    #[error("unknown code id {0:?}")]
    UnknownCode(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
