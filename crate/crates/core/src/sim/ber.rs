use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::{detector_name, ConstellationSpec};
use crate::channel::{snr_db_to_sigma2, AwgnChannel};
use crate::coding::{assemble_ircc, DecodeMode, Interleaver, IrccCodec, IrccSpec, Rate, RscCode};
use crate::constellation::{BitPattern, BitPriorSet, Constellation};
use crate::detector::{detect, DetectorMode};
use crate::{Error, Result, LLR_MAX};

/// Parameters of an iterative BER run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub constellation: ConstellationSpec,
    pub detector: DetectorMode,
    pub snr_db: Vec<f64>,
    pub info_len: usize,
    pub max_iters: usize,
    pub seed: u64,
    pub code: IrccSpec,
    /// Free-form description of `code` for the manifest.
    pub code_source: String,
    pub decode_mode: DecodeMode,
    /// Stop a point after this many blocks...
    pub max_blocks: usize,
    /// ...or once the last iteration has collected this many errors.
    pub target_errors: u64,
    /// Stop iterating a block once it decodes without errors.
    pub early_stop: bool,
    /// Blocks run in parallel between stopping checks.
    pub batch_size: usize,
}

impl SimConfig {
    /// Desk-scale defaults: rate-1/2 mother code, K = 10 000, 20 iterations,
    /// up to 100 blocks or 100 errors per point.
    pub fn new(constellation: ConstellationSpec, detector: DetectorMode, snr_db: Vec<f64>) -> Self {
        Self {
            constellation,
            detector,
            snr_db,
            info_len: 10_000,
            max_iters: 20,
            seed: 1,
            code: IrccSpec::single(RscCode::standard(), Rate::new(1, 2).expect("valid rate")).expect("valid code"),
            code_source: "rate 1/2".into(),
            decode_mode: DecodeMode::Full,
            max_blocks: 100,
            target_errors: 100,
            early_stop: true,
            batch_size: 8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.info_len == 0 {
            return Err(Error::Config("info length must be at least 1".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::Config("at least one iteration is required".into()));
        }
        if self.snr_db.is_empty() {
            return Err(Error::Config("empty SNR list".into()));
        }
        if let Some(s) = self.snr_db.iter().find(|s| !s.is_finite()) {
            return Err(Error::Config(format!("bad SNR value {s}")));
        }
        if self.max_blocks == 0 || self.batch_size == 0 {
            return Err(Error::Config("block counts must be positive".into()));
        }
        DetectorMode::new(self.detector.algorithm, self.detector.maxstar_impl)?;
        self.constellation.build()?;
        assemble_ircc(&self.code, self.info_len)?;
        Ok(())
    }

    /// Manifest view of the configuration.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "constellation": self.constellation.to_string(),
            "detector": detector_name(&self.detector),
            "maxstar": self.detector.maxstar_impl,
            "snr_db": self.snr_db,
            "info_len": self.info_len,
            "max_iters": self.max_iters,
            "seed": self.seed,
            "code": self.code_source,
            "code_rate": self.code.total_rate(),
            "subcodes": self.code.subcodes().iter().map(|s| json!({
                "label": s.label,
                "rate": s.rate.to_string(),
                "weight": s.weight,
            })).collect::<Vec<_>>(),
            "mother": {
                "memory": self.code.mother().memory(),
                "feedback": format!("{:o}", self.code.mother().feedback()),
                "feedforward": format!("{:o}", self.code.mother().feedforward()),
            },
            "decode_mode": self.decode_mode,
            "max_blocks": self.max_blocks,
            "target_errors": self.target_errors,
            "stopping_rule": if self.early_stop { "genie: stop a block once it decodes error-free" } else { "none" },
            "batch_size": self.batch_size,
        })
    }
}

/// Cumulative result of one SNR point after `iteration` iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub snr_db: f64,
    /// 1-based.
    pub iteration: usize,
    pub bit_errors: u64,
    pub bits: u64,
    pub ber: f64,
    pub blocks: u64,
}

/// Errors of one block after each iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockOutcome {
    pub errors: Vec<u64>,
    /// Iterations actually run; later entries of `errors` are carried over.
    pub iterations_run: usize,
}

struct Context {
    constellation: Constellation,
    codec: IrccCodec,
}

fn block_stream(snr_index: usize, block: u64) -> u64 {
    ((snr_index as u64) << 40) | block
}

/// Runs every SNR point and returns the per-iteration records, point by
/// point. `on_record` sees each record as soon as its point is finished.
pub fn run_ber(cfg: &SimConfig, mut on_record: impl FnMut(&BerRecord)) -> Result<Vec<BerRecord>> {
    cfg.validate()?;
    let ctx = Context {
        constellation: cfg.constellation.build()?,
        codec: assemble_ircc(&cfg.code, cfg.info_len)?,
    };
    let mut records = Vec::new();
    for (si, &snr) in cfg.snr_db.iter().enumerate() {
        let mut errors = vec![0u64; cfg.max_iters];
        let mut blocks = 0u64;
        while (blocks as usize) < cfg.max_blocks && errors[cfg.max_iters - 1] < cfg.target_errors {
            let n = cfg.batch_size.min(cfg.max_blocks - blocks as usize) as u64;
            let outcomes = (blocks..blocks + n)
                .into_par_iter()
                .map(|b| run_block(cfg, &ctx, snr, block_stream(si, b)))
                .collect::<Result<Vec<_>>>()?;
            for o in outcomes {
                errors.iter_mut().zip(&o.errors).for_each(|(e, x)| *e += x);
            }
            blocks += n;
        }
        let bits = blocks * cfg.info_len as u64;
        for (i, &e) in errors.iter().enumerate() {
            let r = BerRecord {
                snr_db: snr,
                iteration: i + 1,
                bit_errors: e,
                bits,
                ber: e as f64 / bits as f64,
                blocks,
            };
            on_record(&r);
            records.push(r);
        }
    }
    Ok(records)
}

/// Simulates one block at `snr_db` with the random streams selected by
/// `stream`.
pub fn simulate_block(cfg: &SimConfig, snr_db: f64, stream: u64) -> Result<BlockOutcome> {
    cfg.validate()?;
    let ctx = Context {
        constellation: cfg.constellation.build()?,
        codec: assemble_ircc(&cfg.code, cfg.info_len)?,
    };
    run_block(cfg, &ctx, snr_db, stream)
}

fn run_block(cfg: &SimConfig, ctx: &Context, snr_db: f64, stream: u64) -> Result<BlockOutcome> {
    let c = &ctx.constellation;
    let codec = &ctx.codec;
    let n_bits = c.n_bits();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(2 * stream);
    let info: Vec<u8> = (0..codec.info_len()).map(|_| rng.random_range(0..2u8)).collect();
    let interleaver = Interleaver::random(codec.coded_len(), rng.random());
    let mut channel = AwgnChannel::new(snr_db_to_sigma2(snr_db), cfg.seed)?.split(2 * stream + 1);

    let coded = codec.encode(&info)?;
    let tx = interleaver.interleave(&coded)?;
    let n_sym = tx.len().div_ceil(n_bits);
    let observations: Vec<_> = (0..n_sym)
        .map(|s| {
            let mut bits = vec![0u8; n_bits];
            for (k, b) in bits.iter_mut().enumerate() {
                *b = tx.get(s * n_bits + k).copied().unwrap_or(0);
            }
            let x = c.map_bits(&BitPattern::new(&bits)?)?.value;
            Ok(channel.transmit(x))
        })
        .collect::<Result<_>>()?;

    // detector priors in transmit order, padded with known zeros
    let mut priors = vec![0.0; n_sym * n_bits];
    priors[tx.len()..].iter_mut().for_each(|l| *l = LLR_MAX);
    let mut det_out = vec![0.0; tx.len()];
    let mut errors = vec![0u64; cfg.max_iters];
    let mut iterations_run = cfg.max_iters;

    for it in 0..cfg.max_iters {
        for (s, y) in observations.iter().enumerate() {
            let p = BitPriorSet::from_llrs(&priors[s * n_bits..(s + 1) * n_bits]);
            let l = detect(c, &p, y, &channel, cfg.detector)?;
            for (k, &v) in l.values().iter().enumerate() {
                if let Some(o) = det_out.get_mut(s * n_bits + k) {
                    *o = v;
                }
            }
        }
        let dec = codec.decode(&interleaver.deinterleave(&det_out)?, cfg.decode_mode)?;
        let e = dec
            .info_app
            .iter()
            .zip(&info)
            .filter(|&(&l, &u)| (l < 0.0) != (u == 1))
            .count() as u64;
        errors[it] = e;
        if e == 0 && cfg.early_stop {
            iterations_run = it + 1;
            break;
        }
        priors[..tx.len()].copy_from_slice(&interleaver.interleave(&dec.extrinsic)?);
    }
    Ok(BlockOutcome {
        errors,
        iterations_run,
    })
}
