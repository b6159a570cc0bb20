//! Soft-input soft-output detection for bijective and non-bijective symbol
//! constellations.
//!
//! The crate computes extrinsic bit LLRs with exact APP detection and with
//! three max-log variants:
//!
//! - [`detector::maxlog_bit_llr`] maximizes over excluded-bit patterns, the
//!   form usually obtained by replacing every max* of an APP detector by max;
//! - [`detector::maxlog_sym_llr`] maximizes over symbols after aggregating the
//!   a-priori mass of all patterns that land on the same symbol;
//! - [`detector::maxlog_bitsym_llr`] groups patterns per symbol with an inner
//!   max* before the outer max.
//!
//! For bijective constellations the three coincide. For superposition
//! constellations such as DSM-EPA they do not, and only the symbol-domain form
//! tracks the APP detector.
//!
//! Around the detector the crate provides the constellation builders, an AWGN
//! channel, the outer code chain of an iterative BICM-ID receiver and the
//! experiment drivers used by the `nbdetect` CLI.

pub mod channel;
pub mod coding;
pub mod constellation;
pub mod detector;
mod error;
pub mod sim;

pub use channel::{AwgnChannel, ChannelObservation};
pub use constellation::{BitPattern, BitPriorSet, Constellation, ConstellationPoint, PriorAggregate};
pub use detector::{DetectorMode, LlrVector, MaxStarImpl};
pub use error::Error;

pub use num_complex::Complex64;

/// Magnitude at which all LLRs, input and output, are saturated.
pub const LLR_MAX: f64 = 50.0;

pub type Result<T> = std::result::Result<T, Error>;
