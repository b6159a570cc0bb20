use crate::{Error, Result, LLR_MAX};

/// Independent per-bit a-priori probabilities in the log domain.
#[derive(Debug, Clone, PartialEq)]
pub struct BitPriorSet {
    log_p0: Vec<f64>,
    log_p1: Vec<f64>,
}

/// `log(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

impl BitPriorSet {
    /// Equiprobable bits.
    pub fn uniform(n_bits: usize) -> Self {
        let l = -std::f64::consts::LN_2;
        Self {
            log_p0: vec![l; n_bits],
            log_p1: vec![l; n_bits],
        }
    }

    /// Priors from a-priori LLRs `log P(b=0)/P(b=1)`, saturated to `±LLR_MAX`.
    pub fn from_llrs(llrs: &[f64]) -> Self {
        let mut log_p0 = Vec::with_capacity(llrs.len());
        let mut log_p1 = Vec::with_capacity(llrs.len());
        for &l in llrs {
            let l = if l.is_nan() { 0.0 } else { l.clamp(-LLR_MAX, LLR_MAX) };
            log_p0.push(-softplus(-l));
            log_p1.push(-softplus(l));
        }
        Self { log_p0, log_p1 }
    }

    /// Priors from probabilities `P(b_n = 0)`. Each must lie in `[0, 1]`.
    pub fn from_p0(p0: &[f64]) -> Result<Self> {
        let mut log_p0 = Vec::with_capacity(p0.len());
        let mut log_p1 = Vec::with_capacity(p0.len());
        for &p in p0 {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("probability {p} outside [0, 1]")));
            }
            log_p0.push(p.ln());
            log_p1.push((-p).ln_1p());
        }
        Ok(Self { log_p0, log_p1 })
    }

    pub fn len(&self) -> usize {
        self.log_p0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_p0.is_empty()
    }

    /// `log P(b_n = b)`.
    #[inline]
    pub fn log_p(&self, n: usize, b: u8) -> f64 {
        if b == 0 {
            self.log_p0[n]
        } else {
            self.log_p1[n]
        }
    }

    pub fn log_p0(&self) -> &[f64] {
        &self.log_p0
    }

    pub fn log_p1(&self) -> &[f64] {
        &self.log_p1
    }

    pub fn llr(&self, n: usize) -> f64 {
        self.log_p0[n] - self.log_p1[n]
    }

    /// Replaces the prior of bit `n` by the one implied by `llr`.
    pub fn set_llr(&mut self, n: usize, llr: f64) {
        let single = Self::from_llrs(&[llr]);
        self.log_p0[n] = single.log_p0[0];
        self.log_p1[n] = single.log_p1[0];
    }

    pub(crate) fn check_len(&self, n_bits: usize) -> Result<()> {
        if self.len() != n_bits {
            return Err(Error::LengthMismatch {
                expected: n_bits,
                got: self.len(),
            });
        }
        Ok(())
    }
}
