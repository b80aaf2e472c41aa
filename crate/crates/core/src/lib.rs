//! Baseband simulation of a 5.8 GHz ISM-band vehicular radio that shares one
//! spread-spectrum air interface between a collision-avoidance radar mode and
//! a communication mode.
//!
//! The library models the pieces that make such a radio work on a real road:
//!
//! - [`pn_code`]: the bipolar ranging/spreading codes and their matched filter
//! - [`signal`]: complex baseband buffers, burst framing, FHSS hop plans, RSSI
//! - [`channel`]: multipath taps, slow Rayleigh fading, interferers, noise
//! - [`diversity`]: two-antenna selection and the two-carrier region classifier
//! - [`radar`]: authenticated echo ranging bounded by the pulse repetition time
//! - [`commlink`]: BER measurement and jamming-margin curves
//!
//! Everything runs at complex baseband with explicit seeds throughout, so any
//! experiment is reproducible sample for sample.

pub mod channel;
pub mod commlink;
pub mod diversity;
pub mod error;
pub mod pn_code;
pub mod radar;
pub mod signal;
mod util;

pub use error::{Error, Result};
pub use util::derive_seed;
