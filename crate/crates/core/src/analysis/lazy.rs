use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::exact::{compare, prefix_probabilities, VerificationReport};
use crate::alphabet::Word;
use crate::dist::{Dist, Ratio};
use crate::error::{Error, Result};
use crate::protocol::Protocol;
use crate::reductions::ResidualProtocol;

/// Checks the staged protocol against `nu`, following at most `depth`
/// stages of descent from the root.
///
/// Cyclic stage chains are summed in closed form and give exact results.
/// Otherwise mass descending past the last explored stage is dropped and
/// the report carries a bound on the resulting deviation.
pub fn verify_reduction_lazy(
    protocol: &ResidualProtocol,
    nu: &Dist,
    max_len: usize,
    depth: usize,
) -> Result<VerificationReport> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be positive".into()));
    }
    if nu.size() != protocol.target().size() {
        return Err(Error::AlphabetMismatch(
            "target and reference distribution sizes differ".into(),
        ));
    }
    let mut chain = vec![0usize];
    let mut laws = vec![protocol.stage_law(0)?];
    // index in `chain` that the last stage loops back to
    let mut cycle: Option<usize> = None;
    let mut terminal = false;
    loop {
        let last = *chain.last().expect("non-empty");
        if laws.last().expect("non-empty").descend.is_zero() {
            terminal = true;
            break;
        }
        if chain.len() == depth {
            break;
        }
        let child = protocol.child_stage(last)?.expect("positive descent mass");
        if let Some(pos) = chain.iter().position(|&s| s == child) {
            cycle = Some(pos);
            break;
        }
        chain.push(child);
        laws.push(protocol.stage_law(child)?);
    }

    let words = protocol.output_words();
    let n = chain.len();
    let emit_at = |i: usize| -> Vec<Ratio> {
        let mut v = vec![Ratio::zero(); words.len()];
        for (w, m) in &laws[i].emit {
            let y = words.binary_search(w).expect("emitted words are block words");
            v[y] = m.clone();
        }
        v
    };

    // law of one emission started at chain[i], for i running from the back
    let mut tail: Vec<Ratio> = match cycle {
        Some(j) => {
            let mut acc = vec![Ratio::zero(); words.len()];
            let mut reach = Ratio::one();
            for (t, law) in laws.iter().enumerate().take(n).skip(j) {
                for (a, q) in acc.iter_mut().zip(emit_at(t)) {
                    *a += &reach * q;
                }
                reach *= &law.descend;
            }
            let keep = Ratio::one() - reach;
            let seed: Vec<Ratio> = acc.into_iter().map(|a| a / &keep).collect();
            let mut cur = seed;
            for i in (0..j).rev() {
                cur = emit_at(i)
                    .into_iter()
                    .zip(cur)
                    .map(|(q, w)| q + &laws[i].descend * w)
                    .collect();
            }
            cur
        }
        None => {
            let mut cur = vec![Ratio::zero(); words.len()];
            for i in (0..n).rev() {
                cur = emit_at(i)
                    .into_iter()
                    .zip(cur)
                    .map(|(q, w)| q + &laws[i].descend * w)
                    .collect();
            }
            cur
        }
    };
    let unexplored: Ratio = if cycle.is_some() || terminal {
        Ratio::zero()
    } else {
        laws.iter().map(|l| l.descend.clone()).product()
    };

    let law: BTreeMap<Word, Ratio> = words
        .iter()
        .cloned()
        .zip(tail.drain(..))
        .filter(|(_, m)| !m.is_zero())
        .collect();
    let probs = prefix_probabilities(&law, &Ratio::zero(), nu.size(), max_len)?;
    let (rows, max_deviation) = compare(&probs, nu, max_len);
    let complete = unexplored.is_zero();
    let k = protocol.block_len();
    let emissions = max_len.div_ceil(k).max(1);
    let contraction_bound = (!complete).then(|| {
        let ratio = Ratio::new(BigInt::from(nu.size()), BigInt::from(protocol.input_size()));
        num_traits::pow(ratio, k * depth)
    });
    Ok(VerificationReport {
        max_deviation,
        deviation_bound: unexplored * Ratio::from_integer(BigInt::from(emissions)),
        contraction_bound,
        rows,
        complete,
        stages: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::ratio;
    use crate::reductions::uniform_to_arbitrary;

    #[test]
    fn self_similar_target_is_exact() {
        let target = Dist::from_ratios(&[(1, 3), (2, 3)]).unwrap();
        let p = uniform_to_arbitrary(4, &target, 1).unwrap();
        let report = verify_reduction_lazy(&p, &target, 3, 5).unwrap();
        assert!(report.is_exact());
        assert_eq!(report.stages, 1);
    }

    #[test]
    fn dyadic_target_is_exact() {
        let target = Dist::from_ratios(&[(3, 8), (5, 8)]).unwrap();
        let p = uniform_to_arbitrary(8, &target, 1).unwrap();
        let report = verify_reduction_lazy(&p, &target, 3, 1).unwrap();
        assert!(report.is_exact());
        assert_eq!(report.contraction_bound, None);
    }

    #[test]
    fn truncation_stays_within_bound() {
        let target = Dist::from_ratios(&[(2, 5), (3, 5)]).unwrap();
        let p = uniform_to_arbitrary(4, &target, 2).unwrap();
        let expected = [
            (ratio(3, 16), ratio(1, 10)),
            (ratio(3, 128), ratio(11, 640)),
            (ratio(9, 2048), ratio(13, 5120)),
        ];
        for (depth, (unexplored, deviation)) in (1..).zip(expected) {
            let report = verify_reduction_lazy(&p, &target, 3, depth).unwrap();
            assert!(!report.complete);
            assert_eq!(report.stages, depth);
            assert_eq!(report.max_deviation, deviation);
            // two emissions cover three symbols
            assert_eq!(report.deviation_bound, unexplored * Ratio::from_integer(2.into()));
            assert!(report.max_deviation <= report.deviation_bound);
            assert_eq!(report.contraction_bound, Some(num_traits::pow(ratio(1, 2), 2 * depth)));
        }
    }
}
