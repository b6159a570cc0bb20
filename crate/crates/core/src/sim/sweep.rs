use std::str::FromStr;

use num_complex::Complex64;

use super::ConstellationSpec;
use crate::channel::{AwgnChannel, ChannelObservation};
use crate::constellation::BitPriorSet;
use crate::detector::{detect, DetectorMode};
use crate::{Error, Result};

/// Uniform grid `min, min + step, ..., <= max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && step.is_finite()) || step <= 0.0 || max < min {
            return Err(Error::Config(format!("bad grid {min}:{max}:{step}")));
        }
        Ok(Self { min, max, step })
    }

    pub fn len(&self) -> usize {
        ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.min + i as f64 * self.step).collect()
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Config(format!("grid must be min:max:step, got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let v: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        Grid::new(v[0], v[1], v[2])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub constellation: ConstellationSpec,
    pub snr_db: f64,
    pub bit_index: usize,
    pub grid: Grid,
    /// A-priori LLRs of all bits; none means equiprobable.
    pub priors: Option<Vec<f64>>,
}

/// One grid point: `Re{y}` and the LLR of the chosen bit for each detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub re_y: f64,
    pub app: f64,
    pub maxlog_bit: f64,
    pub maxlog_sym: f64,
}

/// Evaluates APP, bit-domain and symbol-domain max-log detection along the
/// real axis (`Im{y} = 0`).
pub fn run_llr_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let c = cfg.constellation.build()?;
    if cfg.bit_index >= c.n_bits() {
        return Err(Error::BitIndex {
            index: cfg.bit_index,
            n_bits: c.n_bits(),
        });
    }
    let priors = match &cfg.priors {
        Some(l) => {
            if l.len() != c.n_bits() {
                return Err(Error::LengthMismatch {
                    expected: c.n_bits(),
                    got: l.len(),
                });
            }
            BitPriorSet::from_llrs(l)
        }
        None => BitPriorSet::uniform(c.n_bits()),
    };
    let ch = AwgnChannel::from_snr_db(cfg.snr_db, 0)?;
    let n = cfg.bit_index;
    cfg.grid
        .points()
        .into_iter()
        .map(|re| {
            let y = ChannelObservation::new(Complex64::new(re, 0.0))?;
            Ok(SweepRow {
                re_y: re,
                app: detect(&c, &priors, &y, &ch, DetectorMode::app())?[n],
                maxlog_bit: detect(&c, &priors, &y, &ch, DetectorMode::maxlog_bit())?[n],
                maxlog_sym: detect(&c, &priors, &y, &ch, DetectorMode::maxlog_sym())?[n],
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::BijectiveScheme;

    #[test]
    fn grid_points() {
        let g: Grid = "-2:2:0.01".parse().unwrap();
        assert_eq!(g.len(), 401);
        let p = g.points();
        assert_eq!(p[0], -2.0);
        assert!((p[400] - 2.0).abs() < 1e-12);
        assert!("1:0:0.1".parse::<Grid>().is_err());
        assert!("0:1:0".parse::<Grid>().is_err());
        assert!("0:1".parse::<Grid>().is_err());
    }

    #[test]
    fn bpsk_columns_agree() {
        let cfg = SweepConfig {
            constellation: ConstellationSpec::Bijective(BijectiveScheme::Bpsk),
            snr_db: 3.0,
            bit_index: 0,
            grid: "-1:1:0.25".parse().unwrap(),
            priors: None,
        };
        let sigma2 = crate::channel::snr_db_to_sigma2(3.0);
        for row in run_llr_sweep(&cfg).unwrap() {
            let expected = 4.0 * row.re_y / sigma2;
            assert!((row.app - expected).abs() < 1e-10);
            assert!((row.maxlog_bit - expected).abs() < 1e-10);
            assert!((row.maxlog_sym - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_bit_index_and_priors() {
        let mut cfg = SweepConfig {
            constellation: ConstellationSpec::DsmEpa(4),
            snr_db: 8.0,
            bit_index: 4,
            grid: "0:1:0.5".parse().unwrap(),
            priors: None,
        };
        assert!(run_llr_sweep(&cfg).is_err());
        cfg.bit_index = 0;
        cfg.priors = Some(vec![0.0; 3]);
        assert!(run_llr_sweep(&cfg).is_err());
    }
}
