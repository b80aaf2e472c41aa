//! Error type shared by all simulation modules.

use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// LFSR feedback taps did not produce a maximal-length sequence.
    #[error("non-primitive feedback polynomial: period {period} < {expected}")]
    NonPrimitivePolynomial { period: usize, expected: usize },

    /// A buffer was shorter than one full code waveform.
    #[error("insufficient samples: got {got}, need at least {needed}")]
    InsufficientSamples { got: usize, needed: usize },

    /// Buffer length is not a whole number of bit periods.
    #[error("frame misalignment: buffer length {len} is not a multiple of {bit_period} samples")]
    FrameMisalignment { len: usize, bit_period: usize },

    /// A channel tap would shift the signal past the end of the buffer.
    #[error("delay beyond buffer: tap delay of {delay_samples} samples exceeds buffer of {buffer_len}")]
    DelayBeyondBuffer {
        delay_samples: usize,
        buffer_len: usize,
    },

    /// Catch-all for violated preconditions.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Error {
        Error::InvalidParameter(msg.into())
    }
}
