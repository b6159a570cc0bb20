//! Experiment drivers: LLR sweeps, iterative BICM-ID BER runs and branch-count
//! instrumentation, all emitting CSV.

mod ber;
mod complexity;
mod output;
mod sweep;

use std::fmt;
use std::str::FromStr;

use crate::constellation::{BijectiveScheme, Constellation};
use crate::detector::{Algorithm, DetectorMode, MaxStarImpl};
use crate::{Error, Result};

pub use ber::{run_ber, simulate_block, BerRecord, BlockOutcome, SimConfig};
pub use complexity::{run_complexity, ComplexityRow};
pub use output::{format_float, git_describe, write_ber_csv, write_complexity_csv, write_sweep_csv, Manifest};
pub use sweep::{run_llr_sweep, Grid, SweepConfig, SweepRow};

/// Textual constellation choice: `dsm-epa:N`, `bpsk`, `qpsk`, `psk8` or `qam16`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstellationSpec {
    DsmEpa(usize),
    Bijective(BijectiveScheme),
}

impl ConstellationSpec {
    pub fn build(&self) -> Result<Constellation> {
        match *self {
            ConstellationSpec::DsmEpa(n) => Constellation::dsm_epa(n),
            ConstellationSpec::Bijective(s) => Ok(Constellation::bijective(s)),
        }
    }
}

impl FromStr for ConstellationSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if let Some(n) = s.strip_prefix("dsm-epa:") {
            let n = n
                .parse()
                .map_err(|_| Error::Config(format!("bad DSM-EPA size in {s:?}")))?;
            return Ok(ConstellationSpec::DsmEpa(n));
        }
        let scheme = match s.as_str() {
            "bpsk" => BijectiveScheme::Bpsk,
            "qpsk" => BijectiveScheme::Qpsk,
            "psk8" => BijectiveScheme::Psk8,
            "qam16" => BijectiveScheme::Qam16Gray,
            _ => return Err(Error::Config(format!("unknown constellation {s:?}"))),
        };
        Ok(ConstellationSpec::Bijective(scheme))
    }
}

impl fmt::Display for ConstellationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstellationSpec::DsmEpa(n) => write!(f, "dsm-epa:{n}"),
            ConstellationSpec::Bijective(BijectiveScheme::Bpsk) => f.write_str("bpsk"),
            ConstellationSpec::Bijective(BijectiveScheme::Qpsk) => f.write_str("qpsk"),
            ConstellationSpec::Bijective(BijectiveScheme::Psk8) => f.write_str("psk8"),
            ConstellationSpec::Bijective(BijectiveScheme::Qam16Gray) => f.write_str("qam16"),
        }
    }
}

/// Parses `app`, `maxlog-bit`, `maxlog-sym` or `maxlog-bitsym`. `inner` sets
/// the max* flavour where the algorithm has a choice (`app` and
/// `maxlog-bitsym`); it defaults to exact.
pub fn parse_detector(name: &str, inner: Option<MaxStarImpl>) -> Result<DetectorMode> {
    let algorithm = match name.trim().to_ascii_lowercase().as_str() {
        "app" => Algorithm::App,
        "maxlog-bit" => Algorithm::MaxlogBit,
        "maxlog-sym" => Algorithm::MaxlogSym,
        "maxlog-bitsym" => Algorithm::MaxlogBitsym,
        other => return Err(Error::Config(format!("unknown detector {other:?}"))),
    };
    let imp = match algorithm {
        Algorithm::MaxlogBit | Algorithm::MaxlogSym => MaxStarImpl::ApproxMax,
        _ => inner.unwrap_or(MaxStarImpl::Exact),
    };
    DetectorMode::new(algorithm, imp)
}

/// Parses `exact`, `approx` or `table`.
pub fn parse_maxstar(name: &str) -> Result<MaxStarImpl> {
    match name.trim().to_ascii_lowercase().as_str() {
        "exact" => Ok(MaxStarImpl::Exact),
        "approx" | "max" => Ok(MaxStarImpl::ApproxMax),
        "table" => Ok(MaxStarImpl::TableLookup),
        other => Err(Error::Config(format!("unknown max* implementation {other:?}"))),
    }
}

pub fn detector_name(mode: &DetectorMode) -> &'static str {
    match mode.algorithm {
        Algorithm::App => "app",
        Algorithm::MaxlogBit => "maxlog-bit",
        Algorithm::MaxlogSym => "maxlog-sym",
        Algorithm::MaxlogBitsym => "maxlog-bitsym",
    }
}

/// Parses an SNR list: comma separated values and/or `start:stop:step` ranges.
pub fn parse_snr_list(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part.contains(':') {
            out.extend(part.parse::<Grid>()?.points());
        } else {
            let v: f64 = part
                .parse()
                .map_err(|_| Error::Config(format!("bad SNR value {part:?}")))?;
            if !v.is_finite() {
                return Err(Error::Config(format!("bad SNR value {part:?}")));
            }
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err(Error::Config("empty SNR list".into()));
    }
    Ok(out)
}
