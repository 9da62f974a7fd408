//! Arbitrary source to uniform target, extracting the permutation entropy
//! of each block of source symbols.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;

use super::kernels::{multinomial, multinomial_rank};
use super::uniform::{check_materializable, UniformTable};
use crate::alphabet::{all_words, Word};
use crate::combinators::{EpochStats, RestartSpec};
use crate::dist::{ratio, ratio_big, Dist, Ratio};
use crate::error::{Error, Result};
use crate::prefix::PrefixCode;

/// Words of length `k` sharing the symbol counts `sigma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeClass {
    pub sigma: Vec<usize>,
    /// Number of words in the class.
    pub t: BigUint,
    /// Probability of drawing a word of the class.
    pub q: Ratio,
}

fn count_vectors(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in count_vectors(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All type classes of length-`k` words over `source`, most copies of
/// symbol 0 first.
pub fn type_classes(source: &Dist, k: usize) -> Vec<TypeClass> {
    count_vectors(k, source.size())
        .into_iter()
        .map(|sigma| {
            let t = multinomial(&sigma);
            let p: Ratio = sigma
                .iter()
                .zip(source.probs())
                .map(|(&n, p)| num_traits::pow(p.clone(), n))
                .product();
            let q = p * Ratio::from_integer(t.clone().into());
            TypeClass { sigma, t, q }
        })
        .collect()
}

fn check(source: &Dist, c: usize, k: usize) -> Result<Dist> {
    if c < 2 {
        return Err(Error::InvalidParameter(format!("output alphabet size {c} < 2")));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    source.clone().strict()
}

/// Restart protocol reading `k` source symbols and emitting a uniform
/// `c`-ary word determined by the rank of the block within its type class.
pub fn arbitrary_to_uniform(source: &Dist, c: usize, k: usize) -> Result<RestartSpec> {
    let mu = check(source, c, k)?;
    let d = mu.size();
    check_materializable(d, k)?;
    let mut tables: HashMap<Vec<usize>, UniformTable> = HashMap::new();
    let mut outputs: Vec<Word> = Vec::new();
    let words: Vec<Word> = all_words(d, k).collect();
    for w in &words {
        let (sigma, rank) = multinomial_rank(w, d);
        let table = match tables.entry(sigma) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => {
                let t = multinomial(e.key());
                e.insert(UniformTable::new(t, c)?)
            }
        };
        outputs.push(table.output_for(&rank)?);
    }
    let code = PrefixCode::new(d, words)?;
    RestartSpec::new(code, outputs, mu, Dist::uniform(c)?)
}

/// Closed-form [`EpochStats`] of [`arbitrary_to_uniform`] by type class.
pub fn arbitrary_to_uniform_stats(source: &Dist, c: usize, k: usize) -> Result<EpochStats> {
    let mu = check(source, c, k)?;
    let mut production = Ratio::zero();
    let mut success = Ratio::zero();
    for class in type_classes(&mu, k) {
        let table = UniformTable::new(class.t.clone(), c)?;
        production += &class.q * ratio_big(table.total_output(), class.t.clone());
        success += &class.q * ratio_big(table.productive(), class.t.clone());
    }
    Ok(EpochStats::new(
        ratio(k as u64, 1),
        production,
        success,
        k,
        mu.entropy(),
        (c as f64).log2(),
    ))
}

/// Upper limit on output symbols per source symbol, `H(source) / log c`.
pub fn arbitrary_to_uniform_bound(source: &Dist, c: usize) -> f64 {
    source.entropy() / (c as f64).log2()
}

/// Sum of `q` over all classes, one for a probability distribution.
pub fn total_class_mass(classes: &[TypeClass]) -> Ratio {
    classes.iter().map(|t| t.q.clone()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::epoch_stats;
    use num_traits::One;

    fn fair() -> Dist {
        Dist::uniform(2).unwrap()
    }

    #[test]
    fn fair_pairs() {
        let spec = arbitrary_to_uniform(&fair(), 2, 2).unwrap();
        assert_eq!(spec.outputs(), &[vec![], vec![0], vec![1], vec![]]);
        let st = epoch_stats(&spec);
        assert_eq!(st.production, ratio(1, 2));
        assert!((st.efficiency_bits - 0.25).abs() < 1e-12);
        let t: Vec<BigUint> = type_classes(&fair(), 2).into_iter().map(|c| c.t).collect();
        assert_eq!(t, vec![BigUint::one(), BigUint::from(2u32), BigUint::one()]);
    }

    #[test]
    fn single_draw_is_unproductive() {
        let spec = arbitrary_to_uniform(&fair(), 2, 1).unwrap();
        let st = epoch_stats(&spec);
        assert!(!st.is_productive());
        assert!(matches!(st.require_latency(), Err(Error::Unproductive)));
    }

    #[test]
    fn skewed_triples() {
        let p = Dist::from_ratios(&[(1, 3), (2, 3)]).unwrap();
        let spec = arbitrary_to_uniform(&p, 2, 3).unwrap();
        // words with one 0 and two 1s: 011, 101, 110
        let class: Vec<&Word> = spec
            .entries()
            .filter(|(x, _)| x.iter().filter(|&&s| s == 0).count() == 1)
            .map(|(_, y)| y)
            .collect();
        assert_eq!(class, vec![&vec![0], &vec![1], &vec![]]);
        let st = epoch_stats(&spec);
        assert_eq!(st.production, ratio(4, 9));
        assert_eq!(st.ratio(), ratio(4, 27));
    }

    #[test]
    fn class_masses_sum_to_one() {
        let p = Dist::from_ratios(&[(1, 6), (1, 3), (1, 2)]).unwrap();
        for k in 1..6 {
            assert_eq!(total_class_mass(&type_classes(&p, k)), Ratio::one());
        }
    }

    #[test]
    fn closed_form_matches_table() {
        let p = Dist::from_ratios(&[(1, 3), (2, 3)]).unwrap();
        for c in 2..4 {
            for k in 1..8 {
                let spec = arbitrary_to_uniform(&p, c, k).unwrap();
                assert_eq!(epoch_stats(&spec), arbitrary_to_uniform_stats(&p, c, k).unwrap());
            }
        }
    }
}
