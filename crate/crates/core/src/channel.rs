//! Additive white Gaussian noise channel.
//!
//! Noise is circularly-symmetric complex Gaussian with total variance `σ²`
//! (`σ²/2` per component), so that
//! `p(y|x) = exp(-|y - x|² / σ²) / (π σ²)`.
//! SNR is `E_s / σ²` with unit symbol energy.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result};

/// Noise variance for a given SNR in dB, assuming `E_s = 1`.
pub fn snr_db_to_sigma2(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0)
}

/// A received sample `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelObservation {
    y: Complex64,
}

impl ChannelObservation {
    pub fn new(y: Complex64) -> Result<Self> {
        if !y.is_finite() {
            return Err(Error::Config(format!("non-finite observation {y}")));
        }
        Ok(Self { y })
    }

    pub fn value(&self) -> Complex64 {
        self.y
    }
}

/// AWGN channel with its own seeded generator.
#[derive(Debug, Clone)]
pub struct AwgnChannel {
    sigma2: f64,
    seed: u64,
    rng: ChaCha8Rng,
}

impl AwgnChannel {
    pub fn new(sigma2: f64, seed: u64) -> Result<Self> {
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::Config(format!("noise variance must be positive, got {sigma2}")));
        }
        Ok(Self {
            sigma2,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn from_snr_db(snr_db: f64, seed: u64) -> Result<Self> {
        Self::new(snr_db_to_sigma2(snr_db), seed)
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent channel for worker `stream`, same seed and variance.
    pub fn split(&self, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        Self {
            sigma2: self.sigma2,
            seed: self.seed,
            rng,
        }
    }

    /// `y = x + w`.
    pub fn transmit(&mut self, x: Complex64) -> ChannelObservation {
        let std = (self.sigma2 / 2.0).sqrt();
        let re: f64 = StandardNormal.sample(&mut self.rng);
        let im: f64 = StandardNormal.sample(&mut self.rng);
        ChannelObservation {
            y: x + Complex64::new(re, im) * std,
        }
    }

    /// `log p(y|x) = -log(π σ²) - |y - x|² / σ²`.
    #[inline]
    pub fn log_likelihood(&self, y: &ChannelObservation, x: Complex64) -> f64 {
        -(std::f64::consts::PI * self.sigma2).ln() - (y.y - x).norm_sqr() / self.sigma2
    }
}
