//! Straight-from-the-definitions reference evaluators shared by the
//! integration tests. Nothing here calls into the detector or aggregation code.
#![allow(dead_code)]

pub mod trellis;

use std::collections::BTreeMap;

use nbdetect::{Complex64, Constellation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CLAMP: f64 = 50.0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Bit `i` of pattern `p`.
pub fn bit(p: u64, i: usize) -> u8 {
    ((p >> i) & 1) as u8
}

/// DSM-EPA symbol as an explicit chip sum: first half of the bits on the real
/// axis, second half on the imaginary axis, `b = 0 -> +a`.
pub fn dsm_point(p: u64, n_bits: usize) -> Complex64 {
    let a = 1.0 / (n_bits as f64).sqrt();
    let mut re = 0.0;
    let mut im = 0.0;
    for i in 0..n_bits {
        let s = if bit(p, i) == 0 { a } else { -a };
        if i < n_bits / 2 {
            re += s;
        } else {
            im += s;
        }
    }
    Complex64::new(re, im)
}

/// `log Σ exp(v)` by shifting with the maximum and summing small terms first.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let m = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    let mut terms: Vec<f64> = values.iter().map(|v| (v - m).exp()).collect();
    terms.sort_by(|a, b| a.partial_cmp(b).unwrap());
    m + terms.iter().sum::<f64>().ln()
}

fn log_p(llr: f64, b: u8) -> f64 {
    let l = llr.clamp(-CLAMP, CLAMP);
    // P(b=0) = 1 / (1 + e^-L)
    if b == 0 {
        -(-l).exp().ln_1p()
    } else {
        -l.exp().ln_1p()
    }
}

fn llr_of(num: f64, den: f64) -> f64 {
    if num == f64::NEG_INFINITY && den == f64::NEG_INFINITY {
        return 0.0;
    }
    (num - den).clamp(-CLAMP, CLAMP)
}

/// Brute-force detector over an explicit pattern-to-symbol table.
pub struct Oracle {
    pub n_bits: usize,
    /// Symbol of every pattern index.
    pub symbol: Vec<Complex64>,
}

impl Oracle {
    pub fn dsm(n_bits: usize) -> Self {
        Self {
            n_bits,
            symbol: (0..1u64 << n_bits).map(|p| dsm_point(p, n_bits)).collect(),
        }
    }

    /// Takes the labelling from a constructed constellation (used for the
    /// fixed bijective tables).
    pub fn from_constellation(c: &Constellation) -> Self {
        Self {
            n_bits: c.n_bits(),
            symbol: (0..1u64 << c.n_bits())
                .map(|p| c.points()[c.point_index(p)].value)
                .collect(),
        }
    }

    fn patterns(&self, n: usize, b: u8) -> impl Iterator<Item = u64> + '_ {
        (0..1u64 << self.n_bits).filter(move |&p| bit(p, n) == b)
    }

    /// `log P(b_{~n})`, product of the other bits' priors.
    pub fn log_prior_excl(&self, llrs: &[f64], p: u64, n: usize) -> f64 {
        (0..self.n_bits).filter(|&i| i != n).map(|i| log_p(llrs[i], bit(p, i))).sum()
    }

    /// Log-likelihood without the constant term, which cancels in every LLR.
    fn ll(&self, y: Complex64, sigma2: f64, p: u64) -> f64 {
        -(y - self.symbol[p as usize]).norm_sqr() / sigma2
    }

    /// Log of the summed excluded-bit prior mass reaching each symbol.
    pub fn prior_mass(&self, llrs: &[f64], n: usize, b: u8) -> BTreeMap<(i64, i64), (Complex64, f64)> {
        let mut groups: BTreeMap<(i64, i64), (Complex64, Vec<f64>)> = BTreeMap::new();
        for p in self.patterns(n, b) {
            let x = self.symbol[p as usize];
            let key = ((x.re * 1e6).round() as i64, (x.im * 1e6).round() as i64);
            groups.entry(key).or_insert((x, Vec::new())).1.push(self.log_prior_excl(llrs, p, n));
        }
        groups.into_iter().map(|(k, (x, v))| (k, (x, log_sum_exp(&v)))).collect()
    }

    /// Exact APP: sum over all excluded-bit patterns.
    pub fn app(&self, llrs: &[f64], y: Complex64, sigma2: f64) -> Vec<f64> {
        (0..self.n_bits)
            .map(|n| {
                let m = |b| {
                    let v: Vec<f64> = self
                        .patterns(n, b)
                        .map(|p| self.log_prior_excl(llrs, p, n) + self.ll(y, sigma2, p))
                        .collect();
                    log_sum_exp(&v)
                };
                llr_of(m(0), m(1))
            })
            .collect()
    }

    /// Max-log over excluded-bit patterns.
    pub fn maxlog_bit(&self, llrs: &[f64], y: Complex64, sigma2: f64) -> Vec<f64> {
        (0..self.n_bits)
            .map(|n| {
                let m = |b| {
                    self.patterns(n, b)
                        .map(|p| self.log_prior_excl(llrs, p, n) + self.ll(y, sigma2, p))
                        .fold(f64::NEG_INFINITY, f64::max)
                };
                llr_of(m(0), m(1))
            })
            .collect()
    }

    /// Max-log over symbols with the summed prior mass of each symbol.
    pub fn maxlog_sym(&self, llrs: &[f64], y: Complex64, sigma2: f64) -> Vec<f64> {
        (0..self.n_bits)
            .map(|n| {
                let m = |b| {
                    self.prior_mass(llrs, n, b)
                        .values()
                        .map(|&(x, lpz)| lpz - (y - x).norm_sqr() / sigma2)
                        .fold(f64::NEG_INFINITY, f64::max)
                };
                llr_of(m(0), m(1))
            })
            .collect()
    }

    /// Patterns grouped by symbol, each group folded pairwise with
    /// `max(a, b) + ln(1 + e^-|a-b|)` (or plain max), then an outer max.
    pub fn maxlog_bitsym(&self, llrs: &[f64], y: Complex64, sigma2: f64, exact_inner: bool) -> Vec<f64> {
        let fold = |a: f64, b: f64| {
            if a == f64::NEG_INFINITY {
                return b;
            }
            let m = a.max(b);
            if exact_inner {
                m + (-(a - b).abs()).exp().ln_1p()
            } else {
                m
            }
        };
        (0..self.n_bits)
            .map(|n| {
                let m = |b| {
                    let mut groups: BTreeMap<(i64, i64), (Complex64, f64)> = BTreeMap::new();
                    for p in self.patterns(n, b) {
                        let x = self.symbol[p as usize];
                        let key = ((x.re * 1e6).round() as i64, (x.im * 1e6).round() as i64);
                        let e = groups.entry(key).or_insert((x, f64::NEG_INFINITY));
                        e.1 = fold(e.1, self.log_prior_excl(llrs, p, n));
                    }
                    groups
                        .values()
                        .map(|&(x, l)| l - (y - x).norm_sqr() / sigma2)
                        .fold(f64::NEG_INFINITY, f64::max)
                };
                llr_of(m(0), m(1))
            })
            .collect()
    }
}

pub fn random_llrs(rng: &mut impl Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-scale..scale)).collect()
}

pub fn random_y(rng: &mut impl Rng, radius: f64) -> Complex64 {
    Complex64::new(rng.random_range(-radius..radius), rng.random_range(-radius..radius))
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
