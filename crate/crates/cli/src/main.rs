use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nbdetect::coding::{DecodeMode, IrccSpec, Rate, RscCode};
use nbdetect::sim::{self, ConstellationSpec, Grid, SimConfig, SweepConfig};

/// Soft-output detection experiments for non-bijective constellations.
///
/// Every flag can also be set through an environment variable named
/// NBDETECT_<FLAG>, e.g. NBDETECT_SNR_DB or NBDETECT_SEED.
#[derive(Parser)]
#[command(name = "nbdetect", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Detector LLRs of one bit along the real axis of the observation.
    LlrSweep(SweepArgs),
    /// Iterative BER simulation.
    Ber(BerArgs),
    /// Branch counts of prior aggregation for DSM-EPA.
    Complexity(ComplexityArgs),
}

#[derive(Args)]
struct Common {
    /// dsm-epa:N, bpsk, qpsk, psk8 or qam16.
    #[arg(long, env = "NBDETECT_CONSTELLATION", default_value = "dsm-epa:16")]
    constellation: String,
    /// Output CSV; stdout when omitted. A manifest is written next to it.
    #[arg(long, env = "NBDETECT_OUT")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, env = "NBDETECT_SNR_DB", default_value = "12")]
    snr_db: f64,
    #[arg(long, env = "NBDETECT_BIT_INDEX", default_value_t = 0)]
    bit_index: usize,
    /// min:max:step of Re{y}.
    #[arg(long, env = "NBDETECT_GRID", default_value = "-2:2:0.01", allow_hyphen_values = true)]
    grid: String,
    /// File of a-priori LLRs, one per bit, separated by whitespace or commas.
    #[arg(long, env = "NBDETECT_PRIORS")]
    priors: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Decode {
    Full,
    Maxlog,
}

#[derive(Args)]
struct BerArgs {
    #[command(flatten)]
    common: Common,
    /// app, maxlog-bit, maxlog-sym or maxlog-bitsym.
    #[arg(long, env = "NBDETECT_DETECTOR", default_value = "app")]
    detector: String,
    /// exact, approx or table; used by app and maxlog-bitsym.
    #[arg(long, env = "NBDETECT_INNER_MAXSTAR")]
    inner_maxstar: Option<String>,
    /// Comma separated values or start:stop:step ranges.
    #[arg(long, env = "NBDETECT_SNR_DB", allow_hyphen_values = true)]
    snr_db: String,
    #[arg(long, env = "NBDETECT_INFO_LEN", default_value_t = 10_000)]
    info_len: usize,
    #[arg(long, env = "NBDETECT_ITERS", default_value_t = 20)]
    iters: usize,
    #[arg(long, env = "NBDETECT_SEED", default_value_t = 1)]
    seed: u64,
    /// Irregular code table (`j R_j alpha_j` rows).
    #[arg(long, env = "NBDETECT_CODE", conflicts_with = "rate")]
    code: Option<PathBuf>,
    /// Rate of a single subcode when no code table is given.
    #[arg(long, env = "NBDETECT_RATE", default_value = "1/2")]
    rate: String,
    #[arg(long, env = "NBDETECT_DECODE", value_enum, default_value = "full")]
    decode: Decode,
    #[arg(long, env = "NBDETECT_MAX_BLOCKS", default_value_t = 100)]
    max_blocks: usize,
    #[arg(long, env = "NBDETECT_TARGET_ERRORS", default_value_t = 100)]
    target_errors: u64,
    /// Keep iterating blocks that already decode without errors.
    #[arg(long, env = "NBDETECT_NO_EARLY_STOP")]
    no_early_stop: bool,
    #[arg(long, env = "NBDETECT_BATCH", default_value_t = 8)]
    batch: usize,
}

#[derive(Args)]
struct ComplexityArgs {
    /// Comma separated list of even bit counts.
    #[arg(long, env = "NBDETECT_N", value_delimiter = ',', default_value = "2,4,6,8,10,12,14,16")]
    n: Vec<usize>,
    #[arg(long, env = "NBDETECT_OUT")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Cmd::LlrSweep(a) => llr_sweep(a),
        Cmd::Ber(a) => ber(a),
        Cmd::Complexity(a) => complexity(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn manifest(out: Option<&Path>, m: sim::Manifest) -> Result<()> {
    if let Some(p) = out {
        let mut name = p.as_os_str().to_owned();
        name.push(".manifest.json");
        m.write(Path::new(&name))?;
    }
    Ok(())
}

fn read_priors(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().with_context(|| format!("bad prior LLR {t:?}")))
        .collect()
}

fn llr_sweep(a: SweepArgs) -> Result<()> {
    let cfg = SweepConfig {
        constellation: a.common.constellation.parse::<ConstellationSpec>()?,
        snr_db: a.snr_db,
        bit_index: a.bit_index,
        grid: a.grid.parse::<Grid>()?,
        priors: a.priors.as_deref().map(read_priors).transpose()?,
    };
    let rows = sim::run_llr_sweep(&cfg)?;
    let mut w = output(a.common.out.as_deref())?;
    sim::write_sweep_csv(&rows, &mut w)?;
    w.flush()?;
    manifest(a.common.out.as_deref(), sim::Manifest::sweep(&cfg))
}

fn ber(a: BerArgs) -> Result<()> {
    let inner = a.inner_maxstar.as_deref().map(sim::parse_maxstar).transpose()?;
    let detector = sim::parse_detector(&a.detector, inner)?;
    let mut cfg = SimConfig::new(
        a.common.constellation.parse()?,
        detector,
        sim::parse_snr_list(&a.snr_db)?,
    );
    cfg.info_len = a.info_len;
    cfg.max_iters = a.iters;
    cfg.seed = a.seed;
    if let Some(path) = &a.code {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        cfg.code = IrccSpec::parse(&text)?;
        cfg.code_source = path.display().to_string();
    } else {
        let rate: Rate = a.rate.parse()?;
        cfg.code = IrccSpec::single(RscCode::standard(), rate)?;
        cfg.code_source = format!("rate {rate}");
    }
    cfg.decode_mode = match a.decode {
        Decode::Full => DecodeMode::Full,
        Decode::Maxlog => DecodeMode::Maxlog,
    };
    cfg.max_blocks = a.max_blocks;
    cfg.target_errors = a.target_errors;
    cfg.early_stop = !a.no_early_stop;
    cfg.batch_size = a.batch;
    cfg.validate()?;

    let last = cfg.max_iters;
    let records = sim::run_ber(&cfg, |r| {
        if r.iteration == last {
            eprintln!(
                "snr {:>7} dB  ber {:<12} errors {:>8}  blocks {}",
                sim::format_float(r.snr_db),
                sim::format_float(r.ber),
                r.bit_errors,
                r.blocks
            );
        }
    })?;
    let mut w = output(a.common.out.as_deref())?;
    sim::write_ber_csv(&records, &mut w)?;
    w.flush()?;
    manifest(a.common.out.as_deref(), sim::Manifest::ber(&cfg))
}

fn complexity(a: ComplexityArgs) -> Result<()> {
    let rows = sim::run_complexity(&a.n)?;
    let mut w = output(a.out.as_deref())?;
    sim::write_complexity_csv(&rows, &mut w)?;
    w.flush()?;
    manifest(a.out.as_deref(), sim::Manifest::complexity(&a.n))
}
