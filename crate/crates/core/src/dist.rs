//! Exact-rational probability distributions over finite alphabets.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::alphabet::{Alphabet, Symbol};
use crate::error::{Error, Result};

/// Arbitrary-precision rational used for all probability accounting.
pub type Ratio = BigRational;

pub fn ratio(numer: u64, denom: u64) -> Ratio {
    Ratio::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn ratio_big(numer: BigUint, denom: BigUint) -> Ratio {
    Ratio::new(BigInt::from(numer), BigInt::from(denom))
}

/// `num/den` with an explicit denominator, even for integers.
pub fn ratio_string(r: &Ratio) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn ratio_to_f64(r: &Ratio) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Shannon entropy of `p` given as exact rationals, in bits, with `0 log 0 = 0`.
pub fn entropy_of(probs: &[Ratio]) -> f64 {
    probs
        .iter()
        .map(ratio_to_f64)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// A probability distribution whose masses are exact rationals summing to one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dist {
    alphabet: Alphabet,
    probs: Vec<Ratio>,
}

impl Dist {
    pub fn new(probs: Vec<Ratio>) -> Result<Self> {
        let alphabet = Alphabet::new(probs.len())
            .map_err(|_| Error::InvalidDist("distribution needs at least one symbol".into()))?;
        Self::with_alphabet(alphabet, probs)
    }

    pub fn with_alphabet(alphabet: Alphabet, probs: Vec<Ratio>) -> Result<Self> {
        if alphabet.size() != probs.len() {
            return Err(Error::InvalidDist(format!(
                "{} probabilities for an alphabet of size {}",
                probs.len(),
                alphabet.size()
            )));
        }
        if let Some(p) = probs.iter().find(|p| p.is_negative()) {
            return Err(Error::InvalidDist(format!("negative probability {p}")));
        }
        let total: Ratio = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidDist(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self { alphabet, probs })
    }

    /// Builds a distribution from `(numerator, denominator)` pairs.
    pub fn from_ratios(pairs: &[(u64, u64)]) -> Result<Self> {
        if let Some(&(n, _)) = pairs.iter().find(|&&(_, d)| d == 0) {
            return Err(Error::InvalidDist(format!("zero denominator in {n}/0")));
        }
        Self::new(pairs.iter().map(|&(n, d)| ratio(n, d)).collect())
    }

    pub fn uniform(size: usize) -> Result<Self> {
        Self::new(vec![ratio(1, size as u64); size])
    }

    /// Rejects distributions with a zero-probability symbol.
    pub fn strict(self) -> Result<Self> {
        if self.is_strict() {
            Ok(self)
        } else {
            Err(Error::InvalidDist("every symbol must have positive probability".into()))
        }
    }

    pub fn is_strict(&self) -> bool {
        self.probs.iter().all(|p| p.is_positive())
    }

    pub fn relabel(self, alphabet: Alphabet) -> Result<Self> {
        Self::with_alphabet(alphabet, self.probs)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[Ratio] {
        &self.probs
    }

    pub fn prob(&self, symbol: Symbol) -> &Ratio {
        &self.probs[symbol as usize]
    }

    /// Product measure of a finite word.
    pub fn word_prob(&self, word: &[Symbol]) -> Ratio {
        word.iter().fold(Ratio::one(), |acc, &s| acc * self.prob(s))
    }

    pub fn min_prob(&self) -> &Ratio {
        self.probs.iter().min().expect("non-empty")
    }

    pub fn max_prob(&self) -> &Ratio {
        self.probs.iter().max().expect("non-empty")
    }

    pub fn is_uniform(&self) -> bool {
        self.probs.iter().all(|p| *p == self.probs[0])
    }

    pub fn entropy(&self) -> f64 {
        entropy_of(&self.probs)
    }

    /// Least common multiple of the denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.probs.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.denom()))
    }

    /// Masses of all `len`-letter words, in lexicographic word order.
    pub fn power_probs(&self, len: usize) -> Vec<Ratio> {
        let mut out = vec![Ratio::one()];
        for _ in 0..len {
            out = out.iter().flat_map(|w| self.probs.iter().map(move |p| w * p)).collect();
        }
        out
    }
}

pub fn entropy(d: &Dist) -> f64 {
    d.entropy()
}
