//! Rate matching of the mother code by periodic puncturing and repetition.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::{Error, Result};

/// An exact rational code rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rate {
    num: u64,
    den: u64,
}

impl Rate {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidCode(format!("rate {num}/{den} is not positive")));
        }
        let g = num.gcd(&den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Parses `p/q` or a plain decimal such as `0.15` exactly.
impl FromStr for Rate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidCode(format!("cannot parse rate {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            return Rate::new(p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 12 || !(int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())) {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        Rate::new(int * den + frac, den)
    }
}

/// Periodic transmit mask over mother codeword positions.
///
/// `counts[i]` is how often mother position `i mod period` is transmitted:
/// 0 punctures it, 1 keeps it, more repeats it. Copies of one position are
/// sent back to back. The period always covers whole `(u, p)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateAdapter {
    counts: Vec<u32>,
}

impl RateAdapter {
    /// Plain rate-1/2 mother code.
    pub fn identity() -> Self {
        Self { counts: vec![1, 1] }
    }

    pub fn from_counts(counts: Vec<u32>) -> Result<Self> {
        if counts.is_empty() || !counts.len().is_multiple_of(2) {
            return Err(Error::InvalidCode("mask period must cover whole (u, p) pairs".into()));
        }
        if counts.iter().all(|&c| c == 0) {
            return Err(Error::InvalidCode("mask transmits nothing".into()));
        }
        Ok(Self { counts })
    }

    /// Mask realizing `rate = p/q` exactly over a period of `p` info bits.
    ///
    /// Every position is sent `q div 2p` times. The remaining `q mod 2p`
    /// transmissions go to systematic positions first, then to parity
    /// positions, spread evenly over the period. Rates above 1 are rejected
    /// since they would puncture systematic bits.
    pub fn for_rate(rate: Rate) -> Result<Self> {
        let (p, q) = (rate.num(), rate.den());
        if q < p {
            return Err(Error::InvalidCode(format!("rate {rate} exceeds 1")));
        }
        if p > 4096 {
            return Err(Error::InvalidCode(format!("rate {rate} has too long a period")));
        }
        let period = 2 * p as usize;
        let base = (q / (2 * p)) as u32;
        let mut extra = (q % (2 * p)) as usize;
        let mut counts = vec![base; period];
        let spread = |k: usize, m: usize| (0..m).map(move |i| i * k / m);
        let systematic = extra.min(p as usize);
        for i in spread(p as usize, systematic) {
            counts[2 * i] += 1;
        }
        extra -= systematic;
        for i in spread(p as usize, extra) {
            counts[2 * i + 1] += 1;
        }
        Self::from_counts(counts)
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn period(&self) -> usize {
        self.counts.len()
    }

    /// Info bits per period over transmitted bits per period.
    pub fn effective_rate(&self) -> Rate {
        let sent: u32 = self.counts.iter().sum();
        Rate::new(self.counts.len() as u64 / 2, sent as u64).expect("non-empty mask")
    }

    #[inline]
    fn count(&self, pos: usize) -> usize {
        self.counts[pos % self.counts.len()] as usize
    }

    /// Number of transmitted bits for a mother codeword of `mother_len` bits.
    pub fn transmitted_len(&self, mother_len: usize) -> usize {
        let full = mother_len / self.period();
        let sent: usize = self.counts.iter().map(|&c| c as usize).sum();
        full * sent + (full * self.period()..mother_len).map(|i| self.count(i)).sum::<usize>()
    }

    pub fn apply<T: Copy>(&self, mother: &[T]) -> Vec<T> {
        let mut out = Vec::with_capacity(self.transmitted_len(mother.len()));
        for (i, &v) in mother.iter().enumerate() {
            for _ in 0..self.count(i) {
                out.push(v);
            }
        }
        out
    }

    /// Mother-position LLRs from transmitted LLRs: copies are summed,
    /// punctured positions get 0.
    pub fn combine(&self, llrs: &[f64], mother_len: usize) -> Result<Vec<f64>> {
        let expected = self.transmitted_len(mother_len);
        if llrs.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: llrs.len(),
            });
        }
        let mut it = llrs.iter();
        Ok((0..mother_len)
            .map(|i| (0..self.count(i)).map(|_| *it.next().expect("length checked")).sum())
            .collect())
    }

    /// Extrinsic value of every transmitted copy: the code's extrinsic value
    /// for the mother position plus the channel values of the other copies.
    pub fn spread_extrinsic(&self, llrs: &[f64], combined: &[f64], mother_extrinsic: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(llrs.len());
        let mut it = llrs.iter();
        for (i, (&ext, &total)) in mother_extrinsic.iter().zip(combined).enumerate() {
            for _ in 0..self.count(i) {
                let own = *it.next().expect("lengths agree");
                out.push(ext + (total - own));
            }
        }
        out
    }
}
