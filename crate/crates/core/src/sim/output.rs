use std::io::Write;
use std::path::Path;
use std::process::Command;

use serde_json::json;

use super::{BerRecord, ComplexityRow, SimConfig, SweepConfig, SweepRow};
use crate::Result;

/// Decimal rendering with 9 significant digits, trailing zeros removed.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.8e}")
    }
}

pub fn write_sweep_csv(rows: &[SweepRow], mut w: impl Write) -> Result<()> {
    writeln!(w, "re_y,l_app,l_maxlog_bit,l_maxlog_sym")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{}",
            format_float(r.re_y),
            format_float(r.app),
            format_float(r.maxlog_bit),
            format_float(r.maxlog_sym)
        )?;
    }
    Ok(())
}

pub fn write_ber_csv(records: &[BerRecord], mut w: impl Write) -> Result<()> {
    writeln!(w, "snr_db,iteration,bit_errors,bits,ber,blocks")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            format_float(r.snr_db),
            r.iteration,
            r.bit_errors,
            r.bits,
            format_float(r.ber),
            r.blocks
        )?;
    }
    Ok(())
}

pub fn write_complexity_csv(rows: &[ComplexityRow], mut w: impl Write) -> Result<()> {
    writeln!(w, "n,branches_naive,branches_dp")?;
    for r in rows {
        writeln!(w, "{},{},{}", r.n_bits, r.branches_naive, r.branches_dp)?;
    }
    Ok(())
}

/// `git describe --always --dirty` of the working directory, or `unknown`.
pub fn git_describe() -> String {
    Command::new("git")
        .args(["describe", "--always", "--dirty", "--tags"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .and_then(|o| String::from_utf8(o.stdout).ok())
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "unknown".into())
}

/// Run manifest: tool version, git state, command and full configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub command: String,
    pub config: serde_json::Value,
}

impl Manifest {
    pub fn sweep(cfg: &SweepConfig) -> Self {
        Self {
            command: "llr-sweep".into(),
            config: json!({
                "constellation": cfg.constellation.to_string(),
                "snr_db": cfg.snr_db,
                "bit_index": cfg.bit_index,
                "grid": { "min": cfg.grid.min, "max": cfg.grid.max, "step": cfg.grid.step, "points": cfg.grid.len() },
                "imag_y": 0.0,
                "priors": cfg.priors,
            }),
        }
    }

    pub fn ber(cfg: &SimConfig) -> Self {
        Self {
            command: "ber".into(),
            config: cfg.to_json(),
        }
    }

    pub fn complexity(sizes: &[usize]) -> Self {
        Self {
            command: "complexity".into(),
            config: json!({ "constellation": "dsm-epa", "n": sizes }),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "tool": "nbdetect",
            "version": env!("CARGO_PKG_VERSION"),
            "git_describe": git_describe(),
            "command": self.command,
            "config": self.config,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(&mut f, &self.to_json())?;
        writeln!(f)?;
        Ok(())
    }
}
