//! Recursive systematic convolutional mother code of rate 1/2.

use crate::{Error, Result};

/// A rate-1/2 RSC code given by its feedback and feedforward polynomials.
///
/// Polynomials use the usual octal notation with `memory + 1` significant
/// bits: the most significant bit multiplies the current register input and
/// the least significant bit the oldest register cell. With register input
/// `w_k = u_k + Σ_{i≥1} g0_i w_{k-i}` the parity is `p_k = Σ_{i≥0} g1_i w_{k-i}`
/// (mod 2), and the systematic output is `u_k`.
///
/// The mother codeword is laid out as `u_0 p_0 u_1 p_1 ...` and is terminated
/// to the zero state with `memory` tail steps whose systematic and parity bits
/// are both transmitted, `2 (K + memory)` bits in total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RscCode {
    memory: usize,
    feedback: u32,
    feedforward: u32,
    next: Vec<[usize; 2]>,
    parity: Vec<[u8; 2]>,
    tail_input: Vec<u8>,
}

fn tap(poly: u32, memory: usize, delay: usize) -> u8 {
    ((poly >> (memory - delay)) & 1) as u8
}

impl RscCode {
    pub fn new(memory: usize, feedback: u32, feedforward: u32) -> Result<Self> {
        if memory == 0 || memory > 12 {
            return Err(Error::InvalidCode(format!("memory {memory} outside 1..=12")));
        }
        let top = 1u32 << memory;
        if feedback < top || feedback >= 2 * top {
            return Err(Error::InvalidCode(format!(
                "feedback {feedback:o} must have its constant term set and degree {memory}"
            )));
        }
        if feedback == top {
            return Err(Error::InvalidCode("feedback polynomial has no feedback taps".into()));
        }
        if feedforward == 0 || feedforward >= 2 * top {
            return Err(Error::InvalidCode(format!("feedforward {feedforward:o} out of range")));
        }
        let states = 1usize << memory;
        let mask = states - 1;
        let mut next = Vec::with_capacity(states);
        let mut parity = Vec::with_capacity(states);
        let mut tail_input = Vec::with_capacity(states);
        for s in 0..states {
            // bit j of s holds w_{k-1-j}
            let delayed = |i: usize| ((s >> (i - 1)) & 1) as u8;
            let fb = (1..=memory).fold(0u8, |acc, i| acc ^ (tap(feedback, memory, i) & delayed(i)));
            let ff = (1..=memory).fold(0u8, |acc, i| acc ^ (tap(feedforward, memory, i) & delayed(i)));
            let mut nx = [0usize; 2];
            let mut par = [0u8; 2];
            for u in 0..2u8 {
                let w = u ^ fb;
                nx[u as usize] = ((s << 1) | w as usize) & mask;
                par[u as usize] = ff ^ (tap(feedforward, memory, 0) & w);
            }
            next.push(nx);
            parity.push(par);
            tail_input.push(fb);
        }
        Ok(Self {
            memory,
            feedback,
            feedforward,
            next,
            parity,
            tail_input,
        })
    }

    /// Memory-4 code with feedback 23 and feedforward 35 (octal).
    pub fn standard() -> Self {
        Self::new(4, 0o23, 0o35).expect("valid polynomials")
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn feedback(&self) -> u32 {
        self.feedback
    }

    pub fn feedforward(&self) -> u32 {
        self.feedforward
    }

    pub fn num_states(&self) -> usize {
        self.next.len()
    }

    /// Mother code rate as `(numerator, denominator)`.
    pub fn base_rate(&self) -> (u64, u64) {
        (1, 2)
    }

    #[inline]
    pub(crate) fn next_state(&self, s: usize, u: u8) -> usize {
        self.next[s][u as usize]
    }

    #[inline]
    pub(crate) fn parity_bit(&self, s: usize, u: u8) -> u8 {
        self.parity[s][u as usize]
    }

    /// Input that drives the register towards zero from state `s`.
    #[inline]
    pub(crate) fn tail_input(&self, s: usize) -> u8 {
        self.tail_input[s]
    }

    /// Length of the terminated mother codeword for `info_len` bits.
    pub fn mother_len(&self, info_len: usize) -> usize {
        2 * (info_len + self.memory)
    }

    /// Terminated, unpunctured mother codeword.
    pub fn encode_mother(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.is_empty() {
            return Err(Error::Empty);
        }
        let mut out = Vec::with_capacity(self.mother_len(info.len()));
        let mut s = 0usize;
        for &u in info {
            if u > 1 {
                return Err(Error::BitValue(u));
            }
            out.push(u);
            out.push(self.parity_bit(s, u));
            s = self.next_state(s, u);
        }
        for _ in 0..self.memory {
            let u = self.tail_input(s);
            out.push(u);
            out.push(self.parity_bit(s, u));
            s = self.next_state(s, u);
        }
        debug_assert_eq!(s, 0);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn impulse_response_of_7_5() {
        // hand trellis walk, w_k = u_k ^ w_{k-1} ^ w_{k-2}, p_k = w_k ^ w_{k-2}:
        // w = 1 1 0 1 1 0 | tail u = 1 0 with w = 0 0
        let code = RscCode::new(2, 0o7, 0o5).unwrap();
        let out = code.encode_mother(&[1, 0, 0, 0, 0, 0]).unwrap();
        let expected = [1, 1, 0, 1, 0, 1, 0, 0, 0, 1, 0, 1, 1, 1, 0, 0];
        assert_eq!(out, expected);
    }

    #[test]
    fn all_zero_and_length() {
        let code = RscCode::standard();
        let out = code.encode_mother(&[0; 37]).unwrap();
        assert_eq!(out.len(), 2 * (37 + 4));
        assert!(out.iter().all(|&b| b == 0));
    }

    #[test]
    fn systematic_positions_carry_info() {
        let code = RscCode::standard();
        let info = [1, 0, 1, 1, 0, 0, 1, 0, 1];
        let out = code.encode_mother(&info).unwrap();
        for (k, &u) in info.iter().enumerate() {
            assert_eq!(out[2 * k], u);
        }
    }

    #[test]
    fn linearity() {
        let code = RscCode::standard();
        let a = [1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0];
        let b = [0, 1, 1, 0, 0, 1, 1, 1, 0, 1, 0, 0];
        let ab: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let ea = code.encode_mother(&a).unwrap();
        let eb = code.encode_mother(&b).unwrap();
        let eab = code.encode_mother(&ab).unwrap();
        let xor: Vec<u8> = ea.iter().zip(&eb).map(|(x, y)| x ^ y).collect();
        assert_eq!(xor, eab);
    }

    #[test]
    fn rejects_bad_polynomials() {
        assert!(RscCode::new(2, 0o3, 0o5).is_err());
        assert!(RscCode::new(2, 0o4, 0o5).is_err());
        assert!(RscCode::new(2, 0o7, 0o10).is_err());
        assert!(RscCode::new(0, 0o1, 0o1).is_err());
        assert!(matches!(RscCode::standard().encode_mother(&[]), Err(Error::Empty)));
    }
}
