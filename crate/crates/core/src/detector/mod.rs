//! Extrinsic bit LLRs for one channel observation.
//!
//! All detectors work in the log domain and return
//! `L_n = log p(y | b_n = 0) / p(y | b_n = 1)` with the a-priori information
//! of every bit except `n` taken into account. The prior of bit `n` never
//! enters `L_n`.
//!
//! Pattern-domain detectors enumerate the `2^(N-1)` patterns of the other bits
//! per hypothesis. Symbol-domain detectors first aggregate the prior mass of
//! all patterns reaching the same symbol and then run over the subset
//! `X_n^(b)` only.

pub mod maxstar;

use serde::{Deserialize, Serialize};

use crate::channel::{AwgnChannel, ChannelObservation};
use crate::constellation::{BitPriorSet, Constellation};
use crate::{Error, Result, LLR_MAX};

pub use maxstar::{maxstar, maxstar_reduce, MaxStarAcc, MaxStarImpl};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// Exact APP detection over the symbol subsets.
    App,
    /// max over excluded-bit patterns.
    MaxlogBit,
    /// max over symbols of aggregated prior mass plus likelihood.
    MaxlogSym,
    /// max over symbols of an inner max* over the patterns reaching each symbol.
    MaxlogBitsym,
}

/// Which sum the APP detector evaluates. Both give the same LLRs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AppDomain {
    Bit,
    Symbol,
}

/// Detector algorithm with its max* flavour.
///
/// For `App` the max* flavour is the outer log-domain summation (exact or
/// table lookup). For `MaxlogBitsym` it is the inner per-symbol combination.
/// `MaxlogBit` and `MaxlogSym` always use plain max.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DetectorMode {
    pub algorithm: Algorithm,
    pub maxstar_impl: MaxStarImpl,
}

impl DetectorMode {
    pub fn new(algorithm: Algorithm, maxstar_impl: MaxStarImpl) -> Result<Self> {
        let ok = match algorithm {
            Algorithm::App => maxstar_impl != MaxStarImpl::ApproxMax,
            Algorithm::MaxlogBit | Algorithm::MaxlogSym => maxstar_impl == MaxStarImpl::ApproxMax,
            Algorithm::MaxlogBitsym => true,
        };
        if !ok {
            return Err(Error::Config(format!("{algorithm:?} cannot use {maxstar_impl:?}")));
        }
        Ok(Self {
            algorithm,
            maxstar_impl,
        })
    }

    pub const fn app() -> Self {
        Self {
            algorithm: Algorithm::App,
            maxstar_impl: MaxStarImpl::Exact,
        }
    }

    pub const fn maxlog_bit() -> Self {
        Self {
            algorithm: Algorithm::MaxlogBit,
            maxstar_impl: MaxStarImpl::ApproxMax,
        }
    }

    pub const fn maxlog_sym() -> Self {
        Self {
            algorithm: Algorithm::MaxlogSym,
            maxstar_impl: MaxStarImpl::ApproxMax,
        }
    }

    pub const fn maxlog_bitsym(inner: MaxStarImpl) -> Self {
        Self {
            algorithm: Algorithm::MaxlogBitsym,
            maxstar_impl: inner,
        }
    }
}

/// Extrinsic LLRs, positive favouring bit 0, saturated to `±LLR_MAX`.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrVector {
    values: Vec<f64>,
}

impl LlrVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl std::ops::Index<usize> for LlrVector {
    type Output = f64;

    fn index(&self, n: usize) -> &f64 {
        &self.values[n]
    }
}

/// Work counters of one detection call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Terms fed into max / max* reductions.
    pub maxstar_calls: u64,
    /// Elementary prior combines (tree branches or pattern-table additions).
    pub branch_count: u64,
}

fn llr(num: f64, den: f64) -> f64 {
    if num == f64::NEG_INFINITY && den == f64::NEG_INFINITY {
        return 0.0;
    }
    (num - den).clamp(-LLR_MAX, LLR_MAX)
}

/// `log p(y|x)` for every point.
fn point_log_likelihoods(c: &Constellation, y: &ChannelObservation, ch: &AwgnChannel) -> Vec<f64> {
    c.points().iter().map(|p| ch.log_likelihood(y, p.value)).collect()
}

/// `log P(b_{~n})` for every full pattern index, bit `n` contributing nothing.
fn excluded_prior_table(priors: &BitPriorSet, n: usize, diag: &mut Diagnostics) -> Vec<f64> {
    let n_bits = priors.len();
    let mut table = Vec::with_capacity(1 << n_bits);
    table.push(0.0);
    for i in 0..n_bits {
        let len = table.len();
        if i == n {
            table.extend_from_within(..);
        } else {
            let (l0, l1) = (priors.log_p(i, 0), priors.log_p(i, 1));
            for j in 0..len {
                let v = table[j];
                table.push(v + l1);
                table[j] = v + l0;
            }
            diag.branch_count += 2 * len as u64;
        }
    }
    table
}

fn check(c: &Constellation, priors: &BitPriorSet) -> Result<()> {
    priors.check_len(c.n_bits())
}

/// Pattern-domain evaluation: reduces `log P(b_{~n}) + log p(y|x(b))` over all
/// patterns of each hypothesis with `imp`.
fn pattern_domain(
    c: &Constellation,
    priors: &BitPriorSet,
    ll: &[f64],
    imp: MaxStarImpl,
    diag: &mut Diagnostics,
) -> LlrVector {
    let n_bits = c.n_bits();
    let mapper = c.mapper();
    let values = (0..n_bits)
        .map(|n| {
            let lp = excluded_prior_table(priors, n, diag);
            let mut acc = [MaxStarAcc::new(imp), MaxStarAcc::new(imp)];
            for (p, (&lp, &x)) in lp.iter().zip(mapper).enumerate() {
                acc[(p >> n) & 1].push(lp + ll[x as usize]);
            }
            diag.maxstar_calls += lp.len() as u64;
            llr(acc[0].value(), acc[1].value())
        })
        .collect();
    LlrVector { values }
}

/// Symbol-domain evaluation: reduces `log P(z(x)) + log p(y|x)` over the
/// subsets with `imp`.
fn symbol_domain(
    c: &Constellation,
    priors: &BitPriorSet,
    ll: &[f64],
    imp: MaxStarImpl,
    diag: &mut Diagnostics,
) -> Result<LlrVector> {
    let values = (0..c.n_bits())
        .map(|n| {
            let mut metric = [0.0; 2];
            for b in 0..2u8 {
                let agg = c.aggregate_log_priors_auto(priors, n, b)?;
                diag.branch_count += agg.branch_count;
                diag.maxstar_calls += agg.points.len() as u64;
                let mut acc = MaxStarAcc::new(imp);
                for (&x, &lpz) in agg.points.iter().zip(&agg.log_pz) {
                    acc.push(lpz + ll[x]);
                }
                metric[b as usize] = acc.value();
            }
            Ok(llr(metric[0], metric[1]))
        })
        .collect::<Result<_>>()?;
    Ok(LlrVector { values })
}

/// Exact APP detection, summing either over bit patterns or over symbols.
pub fn app_llr(
    c: &Constellation,
    priors: &BitPriorSet,
    y: &ChannelObservation,
    ch: &AwgnChannel,
    domain: AppDomain,
) -> Result<LlrVector> {
    check(c, priors)?;
    let ll = point_log_likelihoods(c, y, ch);
    let mut diag = Diagnostics::default();
    match domain {
        AppDomain::Bit => Ok(pattern_domain(c, priors, &ll, MaxStarImpl::Exact, &mut diag)),
        AppDomain::Symbol => symbol_domain(c, priors, &ll, MaxStarImpl::Exact, &mut diag),
    }
}

/// Max-log detection over excluded-bit patterns.
pub fn maxlog_bit_llr(
    c: &Constellation,
    priors: &BitPriorSet,
    y: &ChannelObservation,
    ch: &AwgnChannel,
) -> Result<LlrVector> {
    detect(c, priors, y, ch, DetectorMode::maxlog_bit())
}

/// Max-log detection over symbols with aggregated prior mass.
pub fn maxlog_sym_llr(
    c: &Constellation,
    priors: &BitPriorSet,
    y: &ChannelObservation,
    ch: &AwgnChannel,
) -> Result<LlrVector> {
    detect(c, priors, y, ch, DetectorMode::maxlog_sym())
}

/// Max-log detection over symbols where the patterns reaching each symbol are
/// combined with `inner` before the outer max.
pub fn maxlog_bitsym_llr(
    c: &Constellation,
    priors: &BitPriorSet,
    y: &ChannelObservation,
    ch: &AwgnChannel,
    inner: MaxStarImpl,
) -> Result<LlrVector> {
    detect(c, priors, y, ch, DetectorMode::maxlog_bitsym(inner))
}

pub fn detect(
    c: &Constellation,
    priors: &BitPriorSet,
    y: &ChannelObservation,
    ch: &AwgnChannel,
    mode: DetectorMode,
) -> Result<LlrVector> {
    detect_with_diagnostics(c, priors, y, ch, mode).map(|(l, _)| l)
}

pub fn detect_with_diagnostics(
    c: &Constellation,
    priors: &BitPriorSet,
    y: &ChannelObservation,
    ch: &AwgnChannel,
    mode: DetectorMode,
) -> Result<(LlrVector, Diagnostics)> {
    let mode = DetectorMode::new(mode.algorithm, mode.maxstar_impl)?;
    check(c, priors)?;
    let ll = point_log_likelihoods(c, y, ch);
    let mut diag = Diagnostics::default();
    let out = match mode.algorithm {
        Algorithm::App => symbol_domain(c, priors, &ll, mode.maxstar_impl, &mut diag)?,
        Algorithm::MaxlogBit => pattern_domain(c, priors, &ll, MaxStarImpl::ApproxMax, &mut diag),
        Algorithm::MaxlogSym => symbol_domain(c, priors, &ll, MaxStarImpl::ApproxMax, &mut diag)?,
        Algorithm::MaxlogBitsym => bitsym(c, priors, &ll, mode.maxstar_impl, &mut diag),
    };
    Ok((out, diag))
}

fn bitsym(c: &Constellation, priors: &BitPriorSet, ll: &[f64], inner: MaxStarImpl, diag: &mut Diagnostics) -> LlrVector {
    let mapper = c.mapper();
    let values = (0..c.n_bits())
        .map(|n| {
            let lp = excluded_prior_table(priors, n, diag);
            let mut grouped = [vec![MaxStarAcc::new(inner); c.len()], vec![MaxStarAcc::new(inner); c.len()]];
            for (p, (&lp, &x)) in lp.iter().zip(mapper).enumerate() {
                grouped[(p >> n) & 1][x as usize].push(lp);
            }
            diag.maxstar_calls += lp.len() as u64;
            let mut metric = [f64::NEG_INFINITY; 2];
            for (b, acc) in grouped.iter().enumerate() {
                for &x in c.subsets_unchecked(n, b) {
                    let v = acc[x].value() + ll[x];
                    if v > metric[b] {
                        metric[b] = v;
                    }
                }
                diag.maxstar_calls += c.subsets_unchecked(n, b).len() as u64;
            }
            llr(metric[0], metric[1])
        })
        .collect();
    LlrVector { values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::BijectiveScheme;
    use num_complex::Complex64;

    fn obs(re: f64, im: f64) -> ChannelObservation {
        ChannelObservation::new(Complex64::new(re, im)).unwrap()
    }

    #[test]
    fn bpsk_closed_form() {
        let c = Constellation::bijective(BijectiveScheme::Bpsk);
        let ch = AwgnChannel::new(1.0, 0).unwrap();
        let priors = BitPriorSet::uniform(1);
        let y = obs(0.5, 0.0);
        for domain in [AppDomain::Bit, AppDomain::Symbol] {
            let l = app_llr(&c, &priors, &y, &ch, domain).unwrap();
            assert!((l[0] - 2.0).abs() < 1e-12);
        }
        assert_eq!(maxlog_bit_llr(&c, &priors, &y, &ch).unwrap()[0], app_llr(&c, &priors, &y, &ch, AppDomain::Bit).unwrap()[0]);
    }

    #[test]
    fn mode_validation() {
        assert!(DetectorMode::new(Algorithm::App, MaxStarImpl::ApproxMax).is_err());
        assert!(DetectorMode::new(Algorithm::MaxlogSym, MaxStarImpl::Exact).is_err());
        assert!(DetectorMode::new(Algorithm::MaxlogBit, MaxStarImpl::TableLookup).is_err());
        assert!(DetectorMode::new(Algorithm::App, MaxStarImpl::TableLookup).is_ok());
        assert!(DetectorMode::new(Algorithm::MaxlogBitsym, MaxStarImpl::TableLookup).is_ok());
    }

    #[test]
    fn dimension_mismatch() {
        let c = Constellation::dsm_epa(4).unwrap();
        let ch = AwgnChannel::new(1.0, 0).unwrap();
        assert!(app_llr(&c, &BitPriorSet::uniform(3), &obs(0.0, 0.0), &ch, AppDomain::Bit).is_err());
        assert!(maxlog_sym_llr(&c, &BitPriorSet::uniform(5), &obs(0.0, 0.0), &ch).is_err());
    }

    #[test]
    fn table_lookup_app_is_close_to_exact() {
        let c = Constellation::dsm_epa(6).unwrap();
        let ch = AwgnChannel::new(0.2, 0).unwrap();
        let priors = BitPriorSet::from_llrs(&[0.3, -1.0, 2.0, 0.0, 0.5, -0.2]);
        let y = obs(0.31, -0.12);
        let exact = detect(&c, &priors, &y, &ch, DetectorMode::app()).unwrap();
        let table = detect(&c, &priors, &y, &ch, DetectorMode::new(Algorithm::App, MaxStarImpl::TableLookup).unwrap()).unwrap();
        for n in 0..6 {
            assert!((exact[n] - table[n]).abs() < 0.5, "bit {n}");
        }
    }

    #[test]
    fn diagnostics_count_work() {
        let c = Constellation::dsm_epa(8).unwrap();
        let ch = AwgnChannel::new(0.2, 0).unwrap();
        let priors = BitPriorSet::uniform(8);
        let (_, sym) = detect_with_diagnostics(&c, &priors, &obs(0.1, 0.0), &ch, DetectorMode::maxlog_sym()).unwrap();
        let (_, bit) = detect_with_diagnostics(&c, &priors, &obs(0.1, 0.0), &ch, DetectorMode::maxlog_bit()).unwrap();
        assert!(sym.branch_count > 0 && sym.branch_count <= 16 * 56);
        assert!(sym.maxstar_calls < bit.maxstar_calls);
    }
}
