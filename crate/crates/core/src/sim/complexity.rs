use crate::constellation::{AggregationMethod, BitPriorSet, Constellation};
use crate::Result;

/// Measured branch counts of prior aggregation for DSM-EPA with `n_bits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexityRow {
    pub n_bits: usize,
    /// Naive tree walk; identical for every `(n, b)`.
    pub branches_naive: u64,
    /// Layered aggregation, worst case over all `(n, b)`.
    pub branches_dp: u64,
}

pub fn run_complexity(sizes: &[usize]) -> Result<Vec<ComplexityRow>> {
    sizes
        .iter()
        .map(|&n_bits| {
            let c = Constellation::dsm_epa(n_bits)?;
            let priors = BitPriorSet::uniform(n_bits);
            let branches_naive = c
                .aggregate_log_priors(&priors, 0, 0, AggregationMethod::Naive)?
                .branch_count;
            let mut branches_dp = 0;
            for n in 0..n_bits {
                for b in 0..2 {
                    let agg = c.aggregate_log_priors(&priors, n, b, AggregationMethod::LayeredDp)?;
                    branches_dp = branches_dp.max(agg.branch_count);
                }
            }
            Ok(ComplexityRow {
                n_bits,
                branches_naive,
                branches_dp,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sizes() {
        let rows = run_complexity(&[2, 8, 16]).unwrap();
        assert_eq!(rows[0].branches_naive, 2);
        assert!(rows[0].branches_dp <= 2);
        assert_eq!(rows[1].branches_naive, 254);
        assert!(rows[1].branches_dp <= 56);
        assert_eq!(rows[2].branches_naive, 65534);
        assert!(rows[2].branches_dp <= 240);
        assert!(run_complexity(&[5]).is_err());
    }
}
