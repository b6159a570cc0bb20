//! Reference encoder, trellis search and helpers for the code tests.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Shift-register model of a recursive systematic encoder; the most
/// significant octal digit is the undelayed tap.
pub struct Register {
    pub memory: usize,
    pub feedback: u32,
    pub feedforward: u32,
}

impl Register {
    pub fn tap(&self, g: u32, i: usize) -> u8 {
        ((g >> (self.memory - i)) & 1) as u8
    }

    /// `u_0 p_0 u_1 p_1 ...` including the terminating tail.
    pub fn encode(&self, info: &[u8]) -> Vec<u8> {
        let mut reg = vec![0u8; self.memory + 1];
        let mut out = Vec::new();
        let fb = |reg: &[u8]| (1..=self.memory).fold(0, |acc, i| acc ^ (self.tap(self.feedback, i) & reg[i]));
        for k in 0..info.len() + self.memory {
            let u = if k < info.len() { info[k] } else { fb(&reg) };
            let a = u ^ fb(&reg);
            let mut p = self.tap(self.feedforward, 0) & a;
            for i in 1..=self.memory {
                p ^= self.tap(self.feedforward, i) & reg[i];
            }
            out.push(u);
            out.push(p);
            for i in (2..=self.memory).rev() {
                reg[i] = reg[i - 1];
            }
            reg[1] = a;
        }
        assert!(reg.iter().all(|&r| r == 0));
        out
    }
}

pub fn standard_register() -> Register {
    Register {
        memory: 4,
        feedback: 0o23,
        feedforward: 0o35,
    }
}

pub fn transmit(counts: &[u32], mother: &[u8]) -> Vec<u8> {
    let mut out = Vec::new();
    for (i, &c) in mother.iter().enumerate() {
        for _ in 0..counts[i % counts.len()] {
            out.push(c);
        }
    }
    out
}

pub fn correlation(llrs: &[f64], bits: &[u8]) -> f64 {
    llrs.iter().zip(bits).map(|(l, &c)| if c == 0 { 0.5 * l } else { -0.5 * l }).sum()
}

pub fn noisy_llrs(rng: &mut impl Rng, bits: &[u8], sigma: f64) -> Vec<f64> {
    bits.iter()
        .map(|&c| {
            let s = if c == 0 { 1.0 } else { -1.0 };
            let n: f64 = StandardNormal.sample(rng);
            2.0 * (s + sigma * n) / (sigma * sigma)
        })
        .collect()
}

/// Maximum-correlation path through the terminated trellis.
pub fn viterbi(reg: &Register, llrs: &[f64], k: usize) -> Vec<u8> {
    let states = 1usize << reg.memory;
    // state = register contents a_{k-1} .. a_{k-nu}, bit i-1 holds a_{k-i}
    let step = |s: usize, u: u8| -> (usize, u8, u8) {
        let bits: Vec<u8> = (0..=reg.memory).map(|i| if i == 0 { 0 } else { ((s >> (i - 1)) & 1) as u8 }).collect();
        let fb = (1..=reg.memory).fold(0, |acc, i| acc ^ (reg.tap(reg.feedback, i) & bits[i]));
        let a = u ^ fb;
        let mut p = reg.tap(reg.feedforward, 0) & a;
        for i in 1..=reg.memory {
            p ^= reg.tap(reg.feedforward, i) & bits[i];
        }
        let next = ((s << 1) | a as usize) & (states - 1);
        (next, u, p)
    };
    let mut metric = vec![f64::NEG_INFINITY; states];
    metric[0] = 0.0;
    let mut history: Vec<Vec<(usize, u8)>> = Vec::new();
    for t in 0..k + reg.memory {
        let mut next = vec![f64::NEG_INFINITY; states];
        let mut back = vec![(usize::MAX, 0u8); states];
        for s in 0..states {
            if metric[s] == f64::NEG_INFINITY {
                continue;
            }
            for u in 0..2u8 {
                let (t_state, u_out, p) = step(s, u);
                // tail inputs must drive a zero into the register
                if t >= k && t_state & 1 == 1 {
                    continue;
                }
                let m = metric[s] + correlation(&llrs[2 * t..2 * t + 2], &[u_out, p]);
                if m > next[t_state] {
                    next[t_state] = m;
                    back[t_state] = (s, u_out);
                }
            }
        }
        history.push(back);
        metric = next;
    }
    let mut s = 0;
    let mut decided = vec![0u8; k + reg.memory];
    for t in (0..k + reg.memory).rev() {
        let (prev, u) = history[t][s];
        decided[t] = u;
        s = prev;
    }
    decided.truncate(k);
    decided
}
