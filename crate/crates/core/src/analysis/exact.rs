use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::alphabet::{all_words, is_prefix, Word};
use crate::combinators::RestartSpec;
use crate::dist::{ratio_string, Dist, Ratio};
use crate::error::{Error, Result};

/// Computed and target probability that the output stream starts with
/// `prefix`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrefixRow {
    pub prefix: Word,
    pub computed: Ratio,
    pub expected: Ratio,
}

/// Outcome of comparing a protocol's prefix probabilities with the target
/// measure.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    /// `max |computed − expected|` over all rows.
    pub max_deviation: Ratio,
    /// Rigorous bound on the deviation of the true prefix probabilities;
    /// zero when the computation is complete.
    pub deviation_bound: Ratio,
    /// The contraction bound `(c/d)^(k·depth)` when the protocol was
    /// truncated.
    pub contraction_bound: Option<Ratio>,
    pub rows: Vec<PrefixRow>,
    /// Whether no probability mass was left unexplored.
    pub complete: bool,
    /// Residual stages examined, for staged protocols.
    pub stages: usize,
}

impl VerificationReport {
    /// Exact agreement on every tested prefix.
    pub fn is_exact(&self) -> bool {
        self.complete && self.max_deviation.is_zero()
    }

    /// Whether every row is consistent with the target up to `tolerance`.
    pub fn within(&self, tolerance: &Ratio) -> bool {
        self.max_deviation <= self.deviation_bound
            && &self.deviation_bound <= tolerance
            && &self.max_deviation <= tolerance
    }

    pub fn to_json(&self) -> ReportJson {
        ReportJson {
            deviation: ratio_string(&self.max_deviation),
            deviation_bound: ratio_string(&self.deviation_bound),
            contraction_bound: self.contraction_bound.as_ref().map(ratio_string),
            complete: self.complete,
            stages: self.stages,
            prefixes: self
                .rows
                .iter()
                .map(|r| RowJson {
                    prefix: r.prefix.clone(),
                    computed: ratio_string(&r.computed),
                    expected: ratio_string(&r.expected),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RowJson {
    pub prefix: Word,
    pub computed: String,
    pub expected: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportJson {
    pub deviation: String,
    pub deviation_bound: String,
    pub contraction_bound: Option<String>,
    pub complete: bool,
    pub stages: usize,
    pub prefixes: Vec<RowJson>,
}

/// Prefix probabilities `R(y)` for all `|y| <= max_len` of the stream formed
/// by concatenating independent draws from `law`, a possibly defective law
/// on non-empty words. `empty` is the probability of emitting nothing.
pub(crate) fn prefix_probabilities(
    law: &BTreeMap<Word, Ratio>,
    empty: &Ratio,
    c: usize,
    max_len: usize,
) -> Result<HashMap<Word, Ratio>> {
    let keep = Ratio::one() - empty;
    if keep.is_zero() {
        return Err(Error::Unproductive);
    }
    let mut memo: HashMap<Word, Ratio> = HashMap::new();
    memo.insert(Word::new(), Ratio::one());
    for len in 1..=max_len {
        for y in all_words(c, len) {
            let mut acc = Ratio::zero();
            for cut in 1..len {
                if let Some(w) = law.get(&y[..cut]) {
                    acc += w * &memo[&y[cut..]];
                }
            }
            for (w, m) in law.range(y.clone()..) {
                if !is_prefix(&y, w) {
                    break;
                }
                acc += m;
            }
            memo.insert(y, acc / &keep);
        }
    }
    Ok(memo)
}

pub(crate) fn compare(probs: &HashMap<Word, Ratio>, nu: &Dist, max_len: usize) -> (Vec<PrefixRow>, Ratio) {
    let mut rows = Vec::new();
    let mut worst = Ratio::zero();
    for len in 0..=max_len {
        for y in all_words(nu.size(), len) {
            let expected = nu.word_prob(&y);
            let computed = probs[&y].clone();
            let gap = (&computed - &expected).abs();
            if gap > worst {
                worst = gap;
            }
            rows.push(PrefixRow {
                prefix: y,
                computed,
                expected,
            });
        }
    }
    (rows, worst)
}

/// Exact check that the restart protocol of `spec` emits an i.i.d. `ν`
/// stream, on every output prefix of length at most `max_len`.
pub fn verify_reduction_exact(spec: &RestartSpec, max_len: usize) -> Result<VerificationReport> {
    let mut law = spec.word_law();
    let empty = law.remove(&Word::new()).unwrap_or_else(Ratio::zero);
    let probs = prefix_probabilities(&law, &empty, spec.nu().size(), max_len)?;
    let (rows, max_deviation) = compare(&probs, spec.nu(), max_len);
    Ok(VerificationReport {
        max_deviation,
        deviation_bound: Ratio::zero(),
        contraction_bound: None,
        rows,
        complete: true,
        stages: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::all_words;
    use crate::dist::ratio;
    use crate::prefix::PrefixCode;
    use crate::reductions::uniform_to_uniform;

    #[test]
    fn decimal_digits_to_bits() {
        let report = verify_reduction_exact(&uniform_to_uniform(10, 2, 1).unwrap(), 3).unwrap();
        assert!(report.is_exact());
        assert_eq!(report.rows.len(), 15);
        assert_eq!(report.rows[0].computed, Ratio::one());
    }

    #[test]
    fn skewed_outputs_are_caught() {
        // "0" twice as often as "1"
        let code = PrefixCode::new(3, all_words(3, 1).collect()).unwrap();
        let spec = RestartSpec::new(
            code,
            vec![vec![0], vec![0], vec![1]],
            Dist::uniform(3).unwrap(),
            Dist::uniform(2).unwrap(),
        )
        .unwrap();
        let report = verify_reduction_exact(&spec, 1).unwrap();
        assert_eq!(report.max_deviation, ratio(1, 6));
    }

    #[test]
    fn unproductive_is_rejected() {
        let code = PrefixCode::new(2, all_words(2, 1).collect()).unwrap();
        let spec = RestartSpec::new(
            code,
            vec![vec![], vec![]],
            Dist::uniform(2).unwrap(),
            Dist::uniform(2).unwrap(),
        )
        .unwrap();
        assert!(matches!(verify_reduction_exact(&spec, 2), Err(Error::Unproductive)));
    }
}
