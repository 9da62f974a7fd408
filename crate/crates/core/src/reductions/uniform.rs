//! Uniform source to uniform target.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::kernels::{expansion, floor_log};
use super::MATERIALIZE_LIMIT;
use crate::alphabet::{all_words, Word};
use crate::combinators::{EpochStats, RestartSpec, SerialChain};
use crate::dist::{ratio_big, Dist};
use crate::error::{Error, Result};
use crate::prefix::{to_digits, PrefixCode};

/// Assignment of `total` equally likely outcomes to `c`-ary output words.
///
/// With `total = Σ a_i c^i` in base `c`, the first `a_m c^m` outcomes emit
/// the length-`m` words (each `a_m` times, in lexicographic order), the next
/// `a_{m-1} c^{m-1}` emit length `m - 1`, and so on; the last `a_0` emit the
/// empty word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformTable {
    c: usize,
    total: BigUint,
    digits: Vec<u32>,
}

impl UniformTable {
    pub fn new(total: BigUint, c: usize) -> Result<Self> {
        if c < 2 {
            return Err(Error::InvalidParameter(format!("output alphabet size {c} < 2")));
        }
        if total.is_zero() {
            return Err(Error::InvalidParameter("no outcomes to assign".into()));
        }
        let digits = expansion(&total, c);
        Ok(Self { c, total, digits })
    }

    pub fn total(&self) -> &BigUint {
        &self.total
    }

    /// Base-`c` digits of the outcome count, least significant first.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn max_output(&self) -> usize {
        self.digits.len() - 1
    }

    /// Blocks of `(output length, multiplicity)` in table order.
    fn blocks(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.digits.iter().copied().enumerate().rev().filter(|&(_, a)| a > 0)
    }

    /// Output word for outcome `index`, `0 <= index < total`.
    pub fn output_for(&self, index: &BigUint) -> Result<Word> {
        let mut rest = index.clone();
        let cb = BigUint::from(self.c);
        for (len, a) in self.blocks() {
            let size = cb.pow(len as u32) * a;
            if rest < size {
                return Ok(to_digits(&(rest / a), self.c, len));
            }
            rest -= size;
        }
        Err(Error::OutOfRange(format!("outcome {index} of {}", self.total)))
    }

    /// All outputs in outcome order.
    pub fn outputs(&self) -> Vec<Word> {
        let mut out = Vec::new();
        for (len, a) in self.blocks() {
            for w in all_words(self.c, len) {
                for _ in 0..a {
                    out.push(w.clone());
                }
            }
        }
        out
    }

    /// `Σ i a_i c^i`, the total output length over all outcomes.
    pub fn total_output(&self) -> BigUint {
        let cb = BigUint::from(self.c);
        self.blocks().map(|(len, a)| cb.pow(len as u32) * a * len).sum()
    }

    /// Number of outcomes that emit a non-empty word.
    pub fn productive(&self) -> BigUint {
        &self.total - self.digits[0]
    }
}

fn check(d: usize, c: usize, k: usize) -> Result<()> {
    if d < 2 || c < 2 {
        return Err(Error::InvalidParameter(format!(
            "alphabet sizes must be at least 2, got d = {d}, c = {c}"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    Ok(())
}

pub(crate) fn check_materializable(d: usize, k: usize) -> Result<usize> {
    let count = BigUint::from(d).pow(k as u32);
    count
        .to_usize()
        .filter(|&n| n <= MATERIALIZE_LIMIT)
        .ok_or_else(|| Error::OutOfRange(format!("{d}^{k} codewords is too many to materialize")))
}

/// Restart protocol turning uniform `d`-ary input into uniform `c`-ary output,
/// reading blocks of `k` symbols.
pub fn uniform_to_uniform(d: usize, c: usize, k: usize) -> Result<RestartSpec> {
    check(d, c, k)?;
    check_materializable(d, k)?;
    let table = UniformTable::new(BigUint::from(d).pow(k as u32), c)?;
    let code = PrefixCode::new(d, all_words(d, k).collect())?;
    RestartSpec::new(code, table.outputs(), Dist::uniform(d)?, Dist::uniform(c)?)
}

/// Closed-form [`EpochStats`] of [`uniform_to_uniform`], for any size.
pub fn uniform_to_uniform_stats(d: usize, c: usize, k: usize) -> Result<EpochStats> {
    check(d, c, k)?;
    let total = BigUint::from(d).pow(k as u32);
    let table = UniformTable::new(total.clone(), c)?;
    let h_in = (d as f64).log2();
    let h_out = (c as f64).log2();
    Ok(EpochStats::new(
        ratio_big(BigUint::from(k), BigUint::from(1u32)),
        ratio_big(table.total_output(), total.clone()),
        ratio_big(table.productive(), total),
        k,
        h_in,
        h_out,
    ))
}

/// Largest output length of the `(d, c, k)` table, `⌊k log_c d⌋`.
pub fn uniform_max_output(d: usize, c: usize, k: usize) -> usize {
    floor_log(&BigUint::from(d).pow(k as u32), c)
}

/// The chain of [`uniform_to_uniform`] components with block lengths
/// `k_first, k_first + 1, ...`, optionally truncated to `len` components.
pub fn uniform_to_uniform_chain(d: usize, c: usize, k_first: usize, len: Option<usize>) -> Result<SerialChain> {
    check(d, c, k_first)?;
    SerialChain::from_fn(
        len,
        move |i| uniform_to_uniform(d, c, k_first + i),
        Some(move |i| uniform_to_uniform_stats(d, c, k_first + i)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::epoch_stats;
    use crate::dist::ratio;

    #[test]
    fn ten_outcomes_binary() {
        let spec = uniform_to_uniform(10, 2, 1).unwrap();
        let lens: Vec<usize> = spec.outputs().iter().map(Vec::len).collect();
        assert_eq!(lens, vec![3, 3, 3, 3, 3, 3, 3, 3, 1, 1]);
        let st = epoch_stats(&spec);
        assert_eq!(st.production, ratio(13, 5));
        assert_eq!(st.success, ratio(1, 1));
        assert!((st.efficiency_bits - 0.7826779887263512).abs() < 1e-9);
    }

    #[test]
    fn ternary_pairs_binary() {
        let spec = uniform_to_uniform(3, 2, 2).unwrap();
        let st = epoch_stats(&spec);
        assert_eq!(st.production, ratio(8, 3));
        assert_eq!(st.success, ratio(8, 9));
        assert_eq!(st.latency, Some(ratio(9, 4)));
        assert!(spec.outputs()[8].is_empty());
        assert_eq!(spec.outputs()[0], vec![0, 0, 0]);
        assert_eq!(spec.outputs()[7], vec![1, 1, 1]);
    }

    #[test]
    fn closed_form_matches_table() {
        for (d, c) in [(2, 3), (3, 2), (5, 3), (10, 2), (4, 4)] {
            for k in 1..6 {
                let spec = uniform_to_uniform(d, c, k).unwrap();
                assert_eq!(
                    epoch_stats(&spec),
                    uniform_to_uniform_stats(d, c, k).unwrap(),
                    "{d} {c} {k}"
                );
            }
        }
    }

    #[test]
    fn output_lookup_matches_listing() {
        let table = UniformTable::new(BigUint::from(37u32), 3).unwrap();
        for (i, w) in table.outputs().iter().enumerate() {
            assert_eq!(&table.output_for(&BigUint::from(i)).unwrap(), w);
        }
        assert!(table.output_for(&BigUint::from(37u32)).is_err());
    }

    #[test]
    fn oversized_tables_are_refused() {
        assert!(matches!(uniform_to_uniform(10, 2, 30), Err(Error::OutOfRange(_))));
        assert!(uniform_to_uniform_stats(10, 2, 30).is_ok());
        assert!(uniform_to_uniform(1, 2, 1).is_err());
    }
}
