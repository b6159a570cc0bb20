//! Log-domain forward-backward (BCJR) decoding of the terminated RSC code.

use serde::{Deserialize, Serialize};

use super::{RateAdapter, RscCode};
use crate::detector::maxstar::{maxstar, MaxStarImpl};
use crate::{Error, Result, LLR_MAX};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecodeMode {
    /// Exact max* in the recursions.
    Full,
    /// Plain max.
    Maxlog,
}

impl DecodeMode {
    fn maxstar_impl(self) -> MaxStarImpl {
        match self {
            DecodeMode::Full => MaxStarImpl::Exact,
            DecodeMode::Maxlog => MaxStarImpl::ApproxMax,
        }
    }
}

/// Soft output of one decoder call.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderOutput {
    /// Extrinsic LLR of every transmitted coded bit.
    pub extrinsic: Vec<f64>,
    /// A-posteriori LLR of every info bit.
    pub info_app: Vec<f64>,
}

/// A-posteriori LLRs of all mother codeword positions and of the info bits,
/// given a-priori LLRs on the mother positions (`u_0 p_0 u_1 p_1 ...`).
///
/// Inputs are saturated to `±LLR_MAX`. Info outputs are saturated too, the
/// mother-position outputs are not, so that extrinsic values can be formed by
/// subtraction.
pub fn bcjr_mother(code: &RscCode, llrs: &[f64], mode: DecodeMode) -> Result<(Vec<f64>, Vec<f64>)> {
    if llrs.len() < code.mother_len(1) || !llrs.len().is_multiple_of(2) {
        return Err(Error::LengthMismatch {
            expected: code.mother_len(1).max(llrs.len() + llrs.len() % 2),
            got: llrs.len(),
        });
    }
    let imp = mode.maxstar_impl();
    let steps = llrs.len() / 2;
    let info_len = steps - code.memory();
    let states = code.num_states();
    let ninf = f64::NEG_INFINITY;
    let clamp = |l: f64| l.clamp(-LLR_MAX, LLR_MAX);

    // half-LLR metric of bit value v
    let metric = |l: f64, v: u8| if v == 0 { 0.5 * l } else { -0.5 * l };
    let inputs = |k: usize, s: usize| -> &'static [u8] {
        if k < info_len {
            &[0, 1]
        } else if code.tail_input(s) == 0 {
            &[0]
        } else {
            &[1]
        }
    };
    let gamma = |k: usize, s: usize, u: u8| -> f64 {
        metric(clamp(llrs[2 * k]), u) + metric(clamp(llrs[2 * k + 1]), code.parity_bit(s, u))
    };

    let mut alpha = vec![ninf; (steps + 1) * states];
    alpha[0] = 0.0;
    for k in 0..steps {
        let (cur, next) = alpha[k * states..(k + 2) * states].split_at_mut(states);
        for s in 0..states {
            if cur[s] == ninf {
                continue;
            }
            for &u in inputs(k, s) {
                let t = code.next_state(s, u);
                next[t] = maxstar(next[t], cur[s] + gamma(k, s, u), imp);
            }
        }
        let m = next.iter().cloned().fold(ninf, f64::max);
        if m.is_finite() {
            next.iter_mut().for_each(|a| *a -= m);
        }
    }

    let mut beta = vec![ninf; (steps + 1) * states];
    beta[steps * states] = 0.0;
    for k in (0..steps).rev() {
        let (cur, next) = beta[k * states..(k + 2) * states].split_at_mut(states);
        for s in 0..states {
            for &u in inputs(k, s) {
                let t = code.next_state(s, u);
                if next[t] == ninf {
                    continue;
                }
                cur[s] = maxstar(cur[s], next[t] + gamma(k, s, u), imp);
            }
        }
        let m = cur.iter().cloned().fold(ninf, f64::max);
        if m.is_finite() {
            cur.iter_mut().for_each(|b| *b -= m);
        }
    }

    let mut app = Vec::with_capacity(llrs.len());
    for k in 0..steps {
        let mut sys = [ninf; 2];
        let mut par = [ninf; 2];
        for s in 0..states {
            let a = alpha[k * states + s];
            if a == ninf {
                continue;
            }
            for &u in inputs(k, s) {
                let t = code.next_state(s, u);
                let v = a + gamma(k, s, u) + beta[(k + 1) * states + t];
                sys[u as usize] = maxstar(sys[u as usize], v, imp);
                let p = code.parity_bit(s, u) as usize;
                par[p] = maxstar(par[p], v, imp);
            }
        }
        app.push(sys[0] - sys[1]);
        app.push(par[0] - par[1]);
    }
    let info = (0..info_len).map(|k| clamp(app[2 * k])).collect();
    Ok((app, info))
}

/// Decodes one rate-adapted codeword of `info_len` info bits from the
/// a-priori LLRs of its transmitted bits. Extrinsic outputs exclude each
/// bit's own input LLR.
pub fn bcjr_decode(
    code: &RscCode,
    adapter: &RateAdapter,
    info_len: usize,
    prior_llrs: &[f64],
    mode: DecodeMode,
) -> Result<DecoderOutput> {
    if info_len == 0 {
        return Err(Error::Empty);
    }
    let mother_len = code.mother_len(info_len);
    let prior_llrs: Vec<f64> = prior_llrs.iter().map(|l| l.clamp(-LLR_MAX, LLR_MAX)).collect();
    let combined = adapter.combine(&prior_llrs, mother_len)?;
    let (app, info_app) = bcjr_mother(code, &combined, mode)?;
    let mother_ext: Vec<f64> = app.iter().zip(&combined).map(|(a, c)| a - c).collect();
    let extrinsic = adapter
        .spread_extrinsic(&prior_llrs, &combined, &mother_ext)
        .into_iter()
        .map(|l| l.clamp(-LLR_MAX, LLR_MAX))
        .collect();
    Ok(DecoderOutput { extrinsic, info_app })
}
