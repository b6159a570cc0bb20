//! Bit interleaver.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// A permutation of codeword positions: `out[i] = in[perm[i]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interleaver {
    perm: Vec<usize>,
    inverse: Vec<usize>,
    seed: Option<u64>,
}

impl Interleaver {
    pub fn identity(len: usize) -> Self {
        Self {
            perm: (0..len).collect(),
            inverse: (0..len).collect(),
            seed: None,
        }
    }

    /// Uniformly random permutation drawn from `seed`.
    pub fn random(len: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..len).collect();
        perm.shuffle(&mut rng);
        let mut it = Self::from_permutation(perm).expect("shuffle is a permutation");
        it.seed = Some(seed);
        it
    }

    pub fn from_permutation(perm: Vec<usize>) -> Result<Self> {
        let mut inverse = vec![usize::MAX; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            if p >= perm.len() || inverse[p] != usize::MAX {
                return Err(Error::Config("not a permutation".into()));
            }
            inverse[p] = i;
        }
        Ok(Self {
            perm,
            inverse,
            seed: None,
        })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    fn check(&self, len: usize) -> Result<()> {
        if len != self.perm.len() {
            return Err(Error::LengthMismatch {
                expected: self.perm.len(),
                got: len,
            });
        }
        Ok(())
    }

    pub fn interleave<T: Copy>(&self, seq: &[T]) -> Result<Vec<T>> {
        self.check(seq.len())?;
        Ok(self.perm.iter().map(|&p| seq[p]).collect())
    }

    pub fn deinterleave<T: Copy>(&self, seq: &[T]) -> Result<Vec<T>> {
        self.check(seq.len())?;
        Ok(self.inverse.iter().map(|&i| seq[i]).collect())
    }
}
