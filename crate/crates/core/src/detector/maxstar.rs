//! The max* (Jacobian logarithm) primitive and its reductions.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// How `max*(a, b) = log(e^a + e^b)` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxStarImpl {
    /// `max(a, b) + log(1 + e^-|a-b|)`.
    Exact,
    /// `max(a, b)`, the max-log approximation.
    ApproxMax,
    /// `max(a, b)` plus a piecewise-constant correction from [`CORRECTION_TABLE`].
    TableLookup,
}

/// Number of cells of the correction table.
pub const TABLE_CELLS: usize = 8;
/// Upper end of the tabulated `|a - b|` range. The correction is zero beyond.
pub const TABLE_RANGE: f64 = 5.0;

const CELL_WIDTH: f64 = TABLE_RANGE / TABLE_CELLS as f64;

/// Correction values at the cell midpoints, `log(1 + e^-((k + 1/2) * 5/8))`.
pub const CORRECTION_TABLE: [f64; TABLE_CELLS] = [
    0.5490548622706681,
    0.3304582076022206,
    0.1902991403795559,
    0.10633723997560367,
    0.05832048028024883,
    0.0316391100329151,
    0.017059604357851726,
    0.009167531083942157,
];

/// Exact correction term `log(1 + e^-d)` for `d >= 0`.
#[inline]
pub fn correction(d: f64) -> f64 {
    (-d).exp().ln_1p()
}

#[inline]
fn table_correction(d: f64) -> f64 {
    if d >= TABLE_RANGE {
        0.0
    } else {
        CORRECTION_TABLE[(d / CELL_WIDTH) as usize]
    }
}

/// Pairwise `max*`. Either argument may be `-inf`, in which case the other is
/// returned unchanged.
#[inline]
pub fn maxstar(a: f64, b: f64, imp: MaxStarImpl) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    match imp {
        MaxStarImpl::ApproxMax => m,
        MaxStarImpl::Exact => {
            if m == f64::INFINITY {
                m
            } else {
                m + correction((a - b).abs())
            }
        }
        MaxStarImpl::TableLookup => {
            if m == f64::INFINITY {
                m
            } else {
                m + table_correction((a - b).abs())
            }
        }
    }
}

/// Folds `max*` over a non-empty sequence.
pub fn maxstar_reduce(values: &[f64], imp: MaxStarImpl) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty);
    }
    let mut acc = MaxStarAcc::new(imp);
    for &v in values {
        acc.push(v);
    }
    Ok(acc.value())
}

/// Streaming `max*` accumulator.
///
/// In exact mode the accumulator keeps a running maximum `m` and a scaled sum
/// `s` with `value = m + ln s`, rescaling whenever a new maximum arrives, so no
/// exponential of a positive argument is ever taken. The result equals the
/// left fold of pairwise exact `max*` up to rounding, independent of order.
#[derive(Debug, Clone, Copy)]
pub struct MaxStarAcc {
    imp: MaxStarImpl,
    max: f64,
    sum: f64,
}

impl MaxStarAcc {
    #[inline]
    pub fn new(imp: MaxStarImpl) -> Self {
        Self {
            imp,
            max: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }

    #[inline]
    pub fn push(&mut self, v: f64) {
        match self.imp {
            MaxStarImpl::ApproxMax => {
                if v > self.max {
                    self.max = v;
                }
            }
            MaxStarImpl::TableLookup => self.max = maxstar(self.max, v, MaxStarImpl::TableLookup),
            MaxStarImpl::Exact => {
                if v == f64::NEG_INFINITY {
                    return;
                }
                if v > self.max {
                    self.sum = self.sum * (self.max - v).exp() + 1.0;
                    self.max = v;
                } else {
                    self.sum += (v - self.max).exp();
                }
            }
        }
    }

    /// Current reduced value; `-inf` if nothing finite was pushed.
    #[inline]
    pub fn value(&self) -> f64 {
        match self.imp {
            MaxStarImpl::Exact => {
                if self.sum == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    self.max + self.sum.ln()
                }
            }
            _ => self.max,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_examples() {
        assert!((maxstar(0.0, 0.0, MaxStarImpl::Exact) - std::f64::consts::LN_2).abs() < 1e-15);
        let v = maxstar(5.0, 0.0, MaxStarImpl::Exact);
        assert!((v - (5.0 + (-5.0f64).exp().ln_1p())).abs() < 1e-15);
        assert!((v - 5.006_715_348_489_118).abs() < 1e-12);
        assert_eq!(maxstar(5.0, 0.0, MaxStarImpl::ApproxMax), 5.0);
    }

    #[test]
    fn neg_infinity_is_identity() {
        for imp in [MaxStarImpl::Exact, MaxStarImpl::ApproxMax, MaxStarImpl::TableLookup] {
            assert_eq!(maxstar(f64::NEG_INFINITY, 1.5, imp), 1.5);
            assert_eq!(maxstar(-2.0, f64::NEG_INFINITY, imp), -2.0);
        }
    }

    #[test]
    fn table_matches_midpoints() {
        for (k, &t) in CORRECTION_TABLE.iter().enumerate() {
            let mid = (k as f64 + 0.5) * CELL_WIDTH;
            assert!((t - correction(mid)).abs() < 1e-14, "cell {k}");
        }
        assert_eq!(maxstar(6.0, 0.0, MaxStarImpl::TableLookup), 6.0);
        assert_eq!(maxstar(0.0, 0.1, MaxStarImpl::TableLookup), 0.1 + CORRECTION_TABLE[0]);
    }

    #[test]
    fn reduce_examples() {
        let v = maxstar_reduce(&[0.0; 4], MaxStarImpl::Exact).unwrap();
        assert!((v - 4f64.ln()).abs() < 1e-15);
        assert_eq!(maxstar_reduce(&[1.0, 2.0, 3.0], MaxStarImpl::ApproxMax).unwrap(), 3.0);
        assert!(matches!(maxstar_reduce(&[], MaxStarImpl::Exact), Err(Error::Empty)));
    }

    #[test]
    fn reduce_handles_large_magnitudes() {
        let v = maxstar_reduce(&[-1000.0, -1001.0, -999.5], MaxStarImpl::Exact).unwrap();
        let expected = -999.5 + (1.0 + (-0.5f64).exp() + (-1.5f64).exp()).ln();
        assert!((v - expected).abs() < 1e-12);
    }

    #[test]
    fn correction_range() {
        for i in 0..1000 {
            let d = i as f64 * 0.05;
            let c = correction(d);
            assert!(c > 0.0 && c <= std::f64::consts::LN_2);
        }
    }
}
