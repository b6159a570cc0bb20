//! Aggregated a-priori mass `log P(z(x))` of all excluded-bit patterns that
//! reach a symbol.
//!
//! Two routes are provided. The naive route walks the full binary tree over the
//! `N - 1` excluded bits, `2^N - 2` branches. The layered route exploits the
//! superposition structure: patterns whose chips add up to the same partial sum
//! reach the same symbols afterwards, so tree nodes with equal partial sums are
//! merged. Layers are processed per chip direction (one group per quadrature
//! for DSM-EPA); inside the group that holds bit `n` a forward pass covers the
//! layers before `n`, a backward pass the layers after it, and the two state
//! sets are joined. Group distributions are independent and are combined per
//! symbol at the end.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BitPriorSet, Constellation, POINT_TOLERANCE};
use crate::detector::maxstar::{maxstar, MaxStarAcc, MaxStarImpl};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AggregationMethod {
    Naive,
    LayeredDp,
}

/// `log P(z(x))` for every `x` in the subset `X_n^(b)`.
///
/// The prior of bit `n` itself is not included, so the masses of one subset
/// add up to one.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorAggregate {
    pub bit: usize,
    pub value: u8,
    /// Point indices, equal to `Constellation::subset(bit, value)`.
    pub points: Vec<usize>,
    /// Aligned with `points`.
    pub log_pz: Vec<f64>,
    /// Number of tree branches (elementary prior combines) evaluated.
    pub branch_count: u64,
}

impl PriorAggregate {
    /// Total mass of the subset, `log Σ_x P(z(x))`.
    pub fn log_total(&self) -> f64 {
        let mut acc = MaxStarAcc::new(MaxStarImpl::Exact);
        for &v in &self.log_pz {
            acc.push(v);
        }
        acc.value()
    }
}

impl Constellation {
    /// Computes `log P(z(x))` for all `x ∈ X_n^(b)`.
    pub fn aggregate_log_priors(
        &self,
        priors: &BitPriorSet,
        n: usize,
        b: u8,
        method: AggregationMethod,
    ) -> Result<PriorAggregate> {
        priors.check_len(self.n_bits())?;
        let subset = self.subset(n, b)?;
        let mut acc = vec![MaxStarAcc::new(MaxStarImpl::Exact); self.len()];
        let branch_count = match method {
            AggregationMethod::Naive => self.naive(priors, n, b, &mut acc),
            AggregationMethod::LayeredDp => self.layered(priors, n, b, &mut acc)?,
        };
        Ok(PriorAggregate {
            bit: n,
            value: b,
            points: subset.to_vec(),
            log_pz: subset.iter().map(|&x| acc[x].value()).collect(),
            branch_count,
        })
    }

    /// Layered aggregation when available, naive otherwise.
    pub fn aggregate_log_priors_auto(&self, priors: &BitPriorSet, n: usize, b: u8) -> Result<PriorAggregate> {
        let method = if self.layers().is_some() {
            AggregationMethod::LayeredDp
        } else {
            AggregationMethod::Naive
        };
        self.aggregate_log_priors(priors, n, b, method)
    }

    fn naive(&self, priors: &BitPriorSet, n: usize, b: u8, acc: &mut [MaxStarAcc]) -> u64 {
        struct Walk<'a> {
            c: &'a Constellation,
            priors: &'a BitPriorSet,
            others: Vec<usize>,
            acc: &'a mut [MaxStarAcc],
            branches: u64,
        }
        impl Walk<'_> {
            fn descend(&mut self, depth: usize, pattern: u64, log_p: f64) {
                if depth == self.others.len() {
                    self.acc[self.c.point_index(pattern)].push(log_p);
                    return;
                }
                let i = self.others[depth];
                for v in 0..2u8 {
                    self.branches += 1;
                    self.descend(depth + 1, pattern | ((v as u64) << i), log_p + self.priors.log_p(i, v));
                }
            }
        }
        let mut walk = Walk {
            c: self,
            priors,
            others: (0..self.n_bits()).filter(|&i| i != n).collect(),
            acc,
            branches: 0,
        };
        walk.descend(0, (b as u64) << n, 0.0);
        walk.branches
    }

    fn layered(&self, priors: &BitPriorSet, n: usize, b: u8, acc: &mut [MaxStarAcc]) -> Result<u64> {
        let chips = self.layers().ok_or(Error::NoLayerSpec)?;
        let mut branches = 0u64;
        let origin = vec![(Complex64::new(0.0, 0.0), 0.0)];
        let mut total = origin.clone();
        for group in self.layer_groups() {
            let dist = match group.layers.iter().position(|&i| i == n) {
                None => group
                    .layers
                    .iter()
                    .fold(origin.clone(), |s, &i| extend(&s, i, chips[i], priors, &mut branches)),
                Some(pos) => {
                    let forward = group.layers[..pos]
                        .iter()
                        .fold(origin.clone(), |s, &i| extend(&s, i, chips[i], priors, &mut branches));
                    let backward = group.layers[pos + 1..]
                        .iter()
                        .rev()
                        .fold(origin.clone(), |s, &i| extend(&s, i, chips[i], priors, &mut branches));
                    let joined = if pos == 0 {
                        backward
                    } else if pos + 1 == group.layers.len() {
                        forward
                    } else {
                        let mut joined = Vec::new();
                        for &(zf, lf) in &forward {
                            for &(zb, lb) in &backward {
                                branches += 1;
                                merge(&mut joined, zf + zb, lf + lb);
                            }
                        }
                        joined
                    };
                    let own = if b == 0 { chips[n] } else { -chips[n] };
                    joined.into_iter().map(|(z, l)| (z + own, l)).collect()
                }
            };
            let mut next = Vec::with_capacity(total.len() * dist.len());
            for &(zt, lt) in &total {
                for &(zd, ld) in &dist {
                    merge(&mut next, zt + zd, lt + ld);
                }
            }
            total = next;
        }
        for (z, l) in total {
            let x = self.find_point(z).ok_or_else(|| {
                Error::InvalidConstellation(format!("layer sum {z} is not a constellation point"))
            })?;
            acc[x].push(l);
        }
        Ok(branches)
    }
}

/// Appends one layer to every state, one branch per bit value.
fn extend(
    states: &[(Complex64, f64)],
    layer: usize,
    chip: Complex64,
    priors: &BitPriorSet,
    branches: &mut u64,
) -> Vec<(Complex64, f64)> {
    let mut next = Vec::with_capacity(states.len() + 1);
    for &(z, l) in states {
        *branches += 2;
        merge(&mut next, z + chip, l + priors.log_p(layer, 0));
        merge(&mut next, z - chip, l + priors.log_p(layer, 1));
    }
    next
}

fn merge(states: &mut Vec<(Complex64, f64)>, z: Complex64, l: f64) {
    match states
        .iter_mut()
        .find(|(s, _)| (s.re - z.re).abs() < POINT_TOLERANCE && (s.im - z.im).abs() < POINT_TOLERANCE)
    {
        Some(state) => state.1 = maxstar(state.1, l, MaxStarImpl::Exact),
        None => states.push((z, l)),
    }
}
