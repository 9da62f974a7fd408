//! A coin with heads probability `1/r` to uniform `(r−1)`-ary output.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::kernels::{binomial, binomialary_multiple, floor_log};
use super::uniform::check_materializable;
use crate::alphabet::{all_words, Word};
use crate::combinators::{EpochStats, RestartSpec};
use crate::dist::{ratio, ratio_big, Dist};
use crate::error::{Error, Result};
use crate::prefix::{assign_codewords, PrefixCode};

/// Heads is symbol 0 with probability `1/r`; tails is symbol 1.
pub fn biased_coin(r: u64) -> Result<Dist> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("bias parameter {r} < 2")));
    }
    Dist::new(vec![ratio(1, r), ratio(r - 1, r)])
}

/// Target code lengths `m` and the count `a_i` of codewords of length
/// `m − i`, one per block with exactly `i` tails.
pub fn biased_plan(r: u64, k: usize) -> Result<(usize, Vec<BigUint>)> {
    if r < 3 {
        return Err(Error::InvalidParameter(format!("need r >= 3, got {r}")));
    }
    let rk = BigUint::from(r).pow(k as u32);
    let m = floor_log(&rk, (r - 1) as usize);
    let target = BigUint::from(r - 1).pow(m as u32);
    let a = binomialary_multiple(r, k, &target)?;
    for (i, ai) in a.iter().enumerate() {
        if *ai > binomial(k, i) {
            return Err(Error::Precondition(format!(
                "{ai} codewords requested from {} blocks",
                binomial(k, i)
            )));
        }
    }
    Ok((m, a))
}

/// Restart protocol on `k` coin flips.
pub fn biased_to_uniform(r: u64, k: usize) -> Result<RestartSpec> {
    let (m, a) = biased_plan(r, k)?;
    check_materializable(2, k)?;
    let c = (r - 1) as usize;
    let mut lengths = Vec::new();
    let mut weights = Vec::new();
    for (i, ai) in a.iter().enumerate().rev() {
        let n = ai.to_usize().expect("bounded by 2^k");
        lengths.extend(std::iter::repeat_n(m - i, n));
        weights.extend(std::iter::repeat_n(i, n));
    }
    let target = assign_codewords(&lengths, c)?;
    let mut pending: Vec<std::collections::VecDeque<Word>> = vec![Default::default(); k + 1];
    for (w, &i) in target.words().iter().zip(&weights) {
        pending[i].push_back(w.clone());
    }
    let words: Vec<Word> = all_words(2, k).collect();
    let outputs = words
        .iter()
        .map(|x| {
            let tails = x.iter().filter(|&&s| s == 1).count();
            pending[tails].pop_front().unwrap_or_default()
        })
        .collect();
    RestartSpec::new(PrefixCode::new(2, words)?, outputs, biased_coin(r)?, Dist::uniform(c)?)
}

/// Closed-form [`EpochStats`] of [`biased_to_uniform`].
pub fn biased_to_uniform_stats(r: u64, k: usize) -> Result<EpochStats> {
    let (m, a) = biased_plan(r, k)?;
    let scale = BigUint::from(r).pow(k as u32);
    let base = BigUint::from(r - 1);
    let mut produced = BigUint::zero();
    let mut succeeded = BigUint::zero();
    for (i, ai) in a.iter().enumerate() {
        let mass = ai * base.pow(i as u32);
        if m > i {
            produced += &mass * (m - i);
            succeeded += mass;
        }
    }
    Ok(EpochStats::new(
        ratio(k as u64, 1),
        ratio_big(produced, scale.clone()),
        ratio_big(succeeded, scale),
        k,
        biased_coin(r)?.entropy(),
        ((r - 1) as f64).log2(),
    ))
}

/// `log_{r−1} r − (r−1)/r`, the rate the construction approaches.
pub fn biased_bound(r: u64) -> f64 {
    (r as f64).ln() / ((r - 1) as f64).ln() - (r - 1) as f64 / r as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::epoch_stats;
    use crate::dist::Ratio;
    use crate::prefix::kraft_sum;
    use num_traits::One;

    #[test]
    fn two_flips_of_a_third_coin() {
        let (m, a) = biased_plan(3, 2).unwrap();
        assert_eq!(m, 3);
        assert_eq!(a, vec![BigUint::zero(), BigUint::from(2u32), BigUint::from(1u32)]);
        let spec = biased_to_uniform(3, 2).unwrap();
        // hh, ht, th, tt
        let lens: Vec<usize> = spec.outputs().iter().map(Vec::len).collect();
        assert_eq!(lens, vec![0, 2, 2, 1]);
        let st = epoch_stats(&spec);
        assert_eq!(st.ratio(), ratio(2, 3));
        let target: Vec<usize> = spec.outputs().iter().filter(|w| !w.is_empty()).map(Vec::len).collect();
        assert_eq!(kraft_sum(&target, 2), Ratio::one());
        assert!((biased_bound(3) - 0.9182958340544894).abs() < 1e-12);
        assert!(2.0 / 3.0 < biased_bound(3));
    }

    #[test]
    fn closed_form_matches_table() {
        for r in 3..6 {
            for k in (r as usize - 2).max(1)..10 {
                let spec = biased_to_uniform(r, k).unwrap();
                assert_eq!(
                    epoch_stats(&spec),
                    biased_to_uniform_stats(r, k).unwrap(),
                    "r={r} k={k}"
                );
            }
        }
    }

    #[test]
    fn short_blocks_rejected() {
        assert!(matches!(biased_to_uniform(5, 2), Err(Error::Precondition(_))));
        assert!(biased_to_uniform(2, 4).is_err());
    }
}
