//! Irregular convolutional code: a weighted mixture of rate-adapted subcodes
//! of one mother code, applied to consecutive segments of the info word.

use rayon::prelude::*;

use super::{bcjr_decode, DecodeMode, DecoderOutput, Rate, RateAdapter, RscCode};
use crate::{Error, Result};

/// Allowed deviation of the weight sum from one.
pub const WEIGHT_TOLERANCE: f64 = 1e-6;

/// Subcode rates and weights of the reference irregular code, `j R_j α_j`.
pub const REFERENCE_MIXTURE: &str = "\
# j  R_j   alpha_j
1  0.10  0.254042
2  0.15  0.292594
3  0.20  0.003651
4  0.25  0.133594
5  0.30  0.054518
6  0.35  0.032276
7  0.40  0.092666
8  0.45  0.000000
9  0.50  0.000000
10 0.55  0.105838
11 0.60  0.030820
";

#[derive(Debug, Clone, PartialEq)]
pub struct Subcode {
    /// 1-based label from the configuration.
    pub label: usize,
    pub rate: Rate,
    pub weight: f64,
    pub adapter: RateAdapter,
}

/// Mother code plus the list of `(R_j, α_j)` subcodes.
#[derive(Debug, Clone, PartialEq)]
pub struct IrccSpec {
    mother: RscCode,
    subcodes: Vec<Subcode>,
}

impl IrccSpec {
    pub fn new(mother: RscCode, rates_and_weights: &[(Rate, f64)]) -> Result<Self> {
        if rates_and_weights.is_empty() {
            return Err(Error::InvalidCode("no subcodes".into()));
        }
        let subcodes = rates_and_weights
            .iter()
            .enumerate()
            .map(|(i, &(rate, weight))| {
                Ok(Subcode {
                    label: i + 1,
                    rate,
                    weight,
                    adapter: RateAdapter::for_rate(rate)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let spec = Self { mother, subcodes };
        spec.validate()?;
        Ok(spec)
    }

    /// A single subcode of the given rate with weight one.
    pub fn single(mother: RscCode, rate: Rate) -> Result<Self> {
        Self::new(mother, &[(rate, 1.0)])
    }

    /// The reference mixture on the standard mother code.
    pub fn reference_mixture() -> Self {
        Self::parse(REFERENCE_MIXTURE).expect("reference table is valid")
    }

    fn validate(&self) -> Result<()> {
        if let Some(s) = self.subcodes.iter().find(|s| !(s.weight >= 0.0 && s.weight.is_finite())) {
            return Err(Error::InvalidCode(format!("weight {} of subcode {} is negative", s.weight, s.label)));
        }
        let sum: f64 = self.subcodes.iter().map(|s| s.weight).sum();
        // the tolerance is inclusive; allow for the rounding of the sum itself
        if (sum - 1.0).abs() > WEIGHT_TOLERANCE * (1.0 + 1e-9) {
            return Err(Error::InvalidCode(format!("weights sum to {sum}, expected 1")));
        }
        Ok(())
    }

    /// Reads a whitespace separated table with one `j R_j alpha_j` row per
    /// subcode. `#` starts a comment. An optional row
    /// `mother <memory> <feedback> <feedforward>` (octal polynomials)
    /// replaces the standard mother code.
    pub fn parse(text: &str) -> Result<Self> {
        let mut mother = RscCode::standard();
        let mut subcodes = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = |what: &str| Error::InvalidCode(format!("line {}: {what}: {line:?}", lineno + 1));
            if fields[0] == "mother" {
                if fields.len() != 4 {
                    return Err(bad("expected `mother <memory> <feedback> <feedforward>`"));
                }
                let memory = fields[1].parse().map_err(|_| bad("bad memory"))?;
                let fb = u32::from_str_radix(fields[2], 8).map_err(|_| bad("bad octal feedback"))?;
                let ff = u32::from_str_radix(fields[3], 8).map_err(|_| bad("bad octal feedforward"))?;
                mother = RscCode::new(memory, fb, ff)?;
                continue;
            }
            if fields.len() != 3 {
                return Err(bad("expected `j R_j alpha_j`"));
            }
            let label: usize = fields[0].parse().map_err(|_| bad("bad index"))?;
            let rate: Rate = fields[1].parse()?;
            let weight: f64 = fields[2].parse().map_err(|_| bad("bad weight"))?;
            subcodes.push(Subcode {
                label,
                rate,
                weight,
                adapter: RateAdapter::for_rate(rate)?,
            });
        }
        if subcodes.is_empty() {
            return Err(Error::InvalidCode("no subcodes".into()));
        }
        let spec = Self { mother, subcodes };
        spec.validate()?;
        Ok(spec)
    }

    pub fn mother(&self) -> &RscCode {
        &self.mother
    }

    pub fn subcodes(&self) -> &[Subcode] {
        &self.subcodes
    }

    /// `R = Σ_j α_j R_j`.
    pub fn total_rate(&self) -> f64 {
        self.subcodes.iter().map(|s| s.weight * s.rate.value()).sum()
    }
}

/// One segment of the info word and the subcode that protects it.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub label: usize,
    pub adapter: RateAdapter,
    pub info_offset: usize,
    pub info_len: usize,
    pub coded_offset: usize,
    pub coded_len: usize,
}

/// Segmented encoder/decoder for a fixed info length.
#[derive(Debug, Clone, PartialEq)]
pub struct IrccCodec {
    mother: RscCode,
    segments: Vec<Segment>,
    info_len: usize,
    coded_len: usize,
}

/// Splits `total_info_len` bits over the subcodes.
///
/// `α_j` is the share of *coded* bits produced by subcode `j`, which makes
/// the overall rate `R = Σ α_j R_j`. Subcode `j` therefore receives
/// `floor(α_j R_j K / R)` info bits; the last subcode with non-zero weight
/// also takes the residue. Subcodes left with no bits are skipped.
pub fn assemble_ircc(spec: &IrccSpec, total_info_len: usize) -> Result<IrccCodec> {
    if total_info_len == 0 {
        return Err(Error::Empty);
    }
    spec.validate()?;
    let last = spec
        .subcodes
        .iter()
        .rposition(|s| s.weight > 0.0)
        .ok_or_else(|| Error::InvalidCode("all weights are zero".into()))?;
    let rate = spec.total_rate();
    let mut lens: Vec<usize> = spec
        .subcodes
        .iter()
        .map(|s| (s.weight * s.rate.value() * total_info_len as f64 / rate).floor() as usize)
        .collect();
    let assigned: usize = lens.iter().enumerate().filter(|&(i, _)| i != last).map(|(_, &l)| l).sum();
    if assigned > total_info_len {
        return Err(Error::InvalidCode("weights exceed the info length".into()));
    }
    lens[last] = total_info_len - assigned;

    let mut segments = Vec::new();
    let (mut info_offset, mut coded_offset) = (0, 0);
    for (s, &len) in spec.subcodes.iter().zip(&lens) {
        if len == 0 {
            continue;
        }
        let coded_len = s.adapter.transmitted_len(spec.mother.mother_len(len));
        segments.push(Segment {
            label: s.label,
            adapter: s.adapter.clone(),
            info_offset,
            info_len: len,
            coded_offset,
            coded_len,
        });
        info_offset += len;
        coded_offset += coded_len;
    }
    Ok(IrccCodec {
        mother: spec.mother.clone(),
        segments,
        info_len: total_info_len,
        coded_len: coded_offset,
    })
}

impl IrccCodec {
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn info_len(&self) -> usize {
        self.info_len
    }

    pub fn coded_len(&self) -> usize {
        self.coded_len
    }

    pub fn mother(&self) -> &RscCode {
        &self.mother
    }

    /// Info bits per transmitted bit, termination included.
    pub fn rate(&self) -> f64 {
        self.info_len as f64 / self.coded_len as f64
    }

    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.info_len {
            return Err(Error::LengthMismatch {
                expected: self.info_len,
                got: info.len(),
            });
        }
        let mut out = Vec::with_capacity(self.coded_len);
        for seg in &self.segments {
            let mother = self.mother.encode_mother(&info[seg.info_offset..seg.info_offset + seg.info_len])?;
            out.extend(seg.adapter.apply(&mother));
        }
        Ok(out)
    }

    /// Runs the segment decoders in parallel.
    pub fn decode(&self, prior_llrs: &[f64], mode: DecodeMode) -> Result<DecoderOutput> {
        if prior_llrs.len() != self.coded_len {
            return Err(Error::LengthMismatch {
                expected: self.coded_len,
                got: prior_llrs.len(),
            });
        }
        let parts = self
            .segments
            .par_iter()
            .map(|seg| {
                bcjr_decode(
                    &self.mother,
                    &seg.adapter,
                    seg.info_len,
                    &prior_llrs[seg.coded_offset..seg.coded_offset + seg.coded_len],
                    mode,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let mut out = DecoderOutput {
            extrinsic: Vec::with_capacity(self.coded_len),
            info_app: Vec::with_capacity(self.info_len),
        };
        for p in parts {
            out.extrinsic.extend(p.extrinsic);
            out.info_app.extend(p.info_app);
        }
        Ok(out)
    }
}
