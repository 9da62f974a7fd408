//! Bias-free sampling of i.i.d. symbol streams from exact distributions.
//!
//! Each draw takes uniform 64-bit words from a ChaCha8 generator seeded with
//! [`rand_chacha::rand_core::SeedableRng::seed_from_u64`], rejects words at or
//! above the largest multiple of the common denominator `D`, and reduces the
//! accepted word modulo `D`. The resulting integer is uniform on `[0, D)` and
//! is mapped to a symbol through the cumulative numerators, so every symbol is
//! drawn with exactly its rational probability.

use num_traits::ToPrimitive;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::Symbol;
use crate::dist::Dist;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct ExactSampler {
    rng: ChaCha8Rng,
    seed: u64,
    counter: u64,
    denominator: u64,
    accept_below: u128,
    /// Exclusive upper bound of each symbol's slice of `[0, D)`.
    cumulative: Vec<u64>,
}

impl ExactSampler {
    pub fn new(dist: &Dist, seed: u64) -> Result<Self> {
        let denominator = dist
            .common_denominator()
            .to_u64()
            .ok_or_else(|| Error::InvalidDist("common denominator does not fit in 64 bits".into()))?;
        let mut cumulative = Vec::with_capacity(dist.size());
        let mut acc = 0u64;
        for p in dist.probs() {
            let scaled = p * num_bigint::BigInt::from(denominator);
            acc += scaled.to_integer().to_u64().expect("scaled mass fits");
            cumulative.push(acc);
        }
        debug_assert_eq!(acc, denominator);
        let span = 1u128 << 64;
        let accept_below = span - span % denominator as u128;
        Ok(Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
            counter: 0,
            denominator,
            accept_below,
            cumulative,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of symbols drawn so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    pub fn alphabet_size(&self) -> usize {
        self.cumulative.len()
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    /// Uniform integer in `[0, D)`.
    fn uniform_below_denominator(&mut self) -> u64 {
        loop {
            let x = self.rng.next_u64();
            if (x as u128) < self.accept_below {
                return x % self.denominator;
            }
        }
    }

    pub fn draw(&mut self) -> Symbol {
        let u = self.uniform_below_denominator();
        self.counter += 1;
        self.cumulative.partition_point(|&c| c <= u) as Symbol
    }

    pub fn fill(&mut self, n: usize) -> Vec<Symbol> {
        (0..n).map(|_| self.draw()).collect()
    }
}

impl Iterator for ExactSampler {
    type Item = Symbol;

    fn next(&mut self) -> Option<Symbol> {
        Some(self.draw())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_per_seed() {
        let d = Dist::from_ratios(&[(1, 3), (2, 3)]).unwrap();
        let a = ExactSampler::new(&d, 7).unwrap().fill(200);
        let b = ExactSampler::new(&d, 7).unwrap().fill(200);
        let c = ExactSampler::new(&d, 8).unwrap().fill(200);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn point_mass_never_varies() {
        let d = Dist::from_ratios(&[(0, 1), (1, 1), (0, 1)]).unwrap();
        let mut s = ExactSampler::new(&d, 1).unwrap();
        assert!(s.fill(100).iter().all(|&x| x == 1));
        assert_eq!(s.counter(), 100);
    }

    #[test]
    fn rejects_huge_denominators() {
        let big = num_bigint::BigInt::from(u64::MAX) * 3u32;
        let p = crate::dist::Ratio::new(1.into(), big.clone());
        let q = crate::dist::Ratio::new(big - 1, 3 * num_bigint::BigInt::from(u64::MAX));
        let d = Dist::new(vec![p, q]).unwrap();
        assert!(ExactSampler::new(&d, 0).is_err());
    }
}
