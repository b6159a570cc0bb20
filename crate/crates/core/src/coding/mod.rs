//! Outer code chain of the BICM-ID receiver: RSC mother code, rate matching,
//! BCJR decoding, interleaving and the irregular mixture code.

mod adapter;
mod bcjr;
mod interleaver;
mod ircc;
mod rsc;

pub use adapter::{Rate, RateAdapter};
pub use bcjr::{bcjr_decode, bcjr_mother, DecodeMode, DecoderOutput};
pub use interleaver::Interleaver;
pub use ircc::{assemble_ircc, IrccCodec, IrccSpec, Segment, Subcode, REFERENCE_MIXTURE, WEIGHT_TOLERANCE};
pub use rsc::RscCode;

use crate::Result;

/// Encodes `info` with the mother code and applies the rate adapter.
pub fn encode(code: &RscCode, adapter: &RateAdapter, info: &[u8]) -> Result<Vec<u8>> {
    Ok(adapter.apply(&code.encode_mother(info)?))
}
