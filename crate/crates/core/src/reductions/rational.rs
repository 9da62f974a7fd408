//! Uniform source to a target with rational probabilities over a common
//! denominator.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::kernels::{expansion, multinomial};
use super::uniform::check_materializable;
use crate::alphabet::{all_words, Word};
use crate::combinators::{EpochStats, RestartSpec};
use crate::dist::{ratio, ratio_big, Dist, Ratio};
use crate::error::{Error, Result};
use crate::prefix::assign_codewords;

fn target_dist(d: usize, numerators: &[u64]) -> Result<Dist> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("input alphabet size {d} < 2")));
    }
    if numerators.len() < 2 {
        return Err(Error::InvalidParameter("target needs at least two symbols".into()));
    }
    if numerators.contains(&0) {
        return Err(Error::InvalidDist("zero numerator".into()));
    }
    let sum: u64 = numerators.iter().sum();
    if sum != d as u64 {
        return Err(Error::InvalidDist(format!("numerators sum to {sum}, expected {d}")));
    }
    Dist::new(numerators.iter().map(|&a| ratio(a, d as u64)).collect())
}

/// Code lengths `k - j`, repeated per base-`d` digit `a_j` of `count`, from
/// the highest digit down.
pub(crate) fn block_lengths(count: &BigUint, d: usize, k: usize) -> Vec<usize> {
    let digits = expansion(count, d);
    let mut out = Vec::new();
    for (j, &a) in digits.iter().enumerate().rev() {
        out.extend(std::iter::repeat_n(k - j, a as usize));
    }
    out
}

/// Restart protocol turning uniform `d`-ary input into the distribution
/// `numerators / d`, emitting `k` symbols per iteration.
pub fn uniform_to_rational(d: usize, numerators: &[u64], k: usize) -> Result<RestartSpec> {
    let nu = target_dist(d, numerators)?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    let c = numerators.len();
    check_materializable(c, k)?;
    let mut lengths = Vec::new();
    let mut outputs: Vec<Word> = Vec::new();
    for y in all_words(c, k) {
        let count: BigUint = y.iter().map(|&s| BigUint::from(numerators[s as usize])).product();
        let block = block_lengths(&count, d, k);
        outputs.extend(std::iter::repeat_n(y, block.len()));
        lengths.extend(block);
    }
    let code = assign_codewords(&lengths, d)?;
    RestartSpec::new(code, outputs, Dist::uniform(d)?, nu)
}

fn compositions(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 0..=total {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

/// Closed-form [`EpochStats`] of [`uniform_to_rational`], grouping target
/// words by symbol counts.
pub fn uniform_to_rational_stats(d: usize, numerators: &[u64], k: usize) -> Result<EpochStats> {
    let nu = target_dist(d, numerators)?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    let mut types = Vec::new();
    compositions(k, numerators.len(), &mut Vec::new(), &mut types);
    let db = BigUint::from(d);
    let scale = db.pow(k as u32);
    let mut weighted = BigUint::zero();
    let mut max_len = 0;
    for sigma in types {
        let count: BigUint = sigma
            .iter()
            .zip(numerators)
            .map(|(&n, &a)| BigUint::from(a).pow(n as u32))
            .product();
        let mut per_word = BigUint::zero();
        for (j, &a) in expansion(&count, d).iter().enumerate() {
            if a > 0 {
                max_len = max_len.max(k - j);
                per_word += db.pow(j as u32) * a * (k - j);
            }
        }
        weighted += per_word * multinomial(&sigma);
    }
    Ok(EpochStats::new(
        ratio_big(weighted, scale),
        ratio(k as u64, 1),
        Ratio::one(),
        max_len,
        (d as f64).log2(),
        nu.entropy(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::epoch_stats;
    use crate::prefix::kraft_sum;

    #[test]
    fn binary_identity() {
        let spec = uniform_to_rational(2, &[1, 1], 1).unwrap();
        assert_eq!(spec.code().words(), &[vec![0], vec![1]]);
        assert_eq!(spec.outputs(), &[vec![0], vec![1]]);
        assert!((epoch_stats(&spec).efficiency_bits - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quarter_three_quarters() {
        let spec = uniform_to_rational(4, &[1, 3], 1).unwrap();
        assert_eq!(spec.len(), 4);
        assert!(spec.code().words().iter().all(|w| w.len() == 1));
        let st = epoch_stats(&spec);
        assert_eq!(st.latency, Some(ratio(1, 1)));
        let bound = nu_entropy(&[1, 3]) / 2.0 + 3.0;
        assert!(1.0 <= bound);
    }

    fn nu_entropy(a: &[u64]) -> f64 {
        let d: u64 = a.iter().sum();
        crate::dist::entropy_of(&a.iter().map(|&x| ratio(x, d)).collect::<Vec<_>>())
    }

    #[test]
    fn pair_blocks_expand_in_base_d() {
        let spec = uniform_to_rational(4, &[1, 3], 2).unwrap();
        let block: Vec<usize> = spec
            .entries()
            .filter(|(_, y)| y.as_slice() == [1, 1])
            .map(|(x, _)| x.len())
            .collect();
        assert_eq!(block, vec![1, 1, 2]);
        let lengths = spec.code().lengths();
        assert_eq!(kraft_sum(&lengths, 4), Ratio::one());
    }

    #[test]
    fn closed_form_matches_table() {
        for (d, a) in [(4, vec![1, 3]), (10, vec![3, 7]), (5, vec![1, 2, 2]), (7, vec![3, 4])] {
            for k in 1..5 {
                let spec = uniform_to_rational(d, &a, k).unwrap();
                assert_eq!(
                    epoch_stats(&spec),
                    uniform_to_rational_stats(d, &a, k).unwrap(),
                    "{d} {a:?} {k}"
                );
            }
        }
    }

    #[test]
    fn rejects_bad_numerators() {
        assert!(matches!(uniform_to_rational(4, &[1, 2], 1), Err(Error::InvalidDist(_))));
        assert!(matches!(uniform_to_rational(4, &[0, 4], 1), Err(Error::InvalidDist(_))));
    }
}
