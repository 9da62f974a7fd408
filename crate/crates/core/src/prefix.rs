//! Prefix codes: Kraft sums, canonical codeword assignment, and the prefix
//! code of input words that force a given output prefix.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::alphabet::{is_prefix, Symbol, Word};
use crate::dist::{ratio_big, ratio_string, Dist, Ratio};
use crate::error::{Error, Result};
use crate::protocol::{Protocol, StateId};

/// A finite prefix-free set of words over a `arity`-symbol alphabet.
///
/// Word order is meaningful: constructors that assign payloads to codewords
/// keep codewords aligned with the order in which lengths were requested.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixCode {
    arity: usize,
    words: Vec<Word>,
}

impl PrefixCode {
    pub fn new(arity: usize, words: Vec<Word>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidParameter("code alphabet must be non-empty".into()));
        }
        for w in &words {
            if let Some(&s) = w.iter().find(|&&s| s as usize >= arity) {
                return Err(Error::SymbolOutOfRange { symbol: s, size: arity });
            }
        }
        if let Some((i, j)) = find_prefix_pair(&words) {
            return Err(Error::NotPrefixFree(format!(
                "{:?} is a prefix of {:?}",
                words[i], words[j]
            )));
        }
        Ok(Self { arity, words })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.words.iter().map(Vec::len).collect()
    }

    pub fn kraft_sum(&self) -> Ratio {
        kraft_sum(&self.lengths(), self.arity)
    }

    /// Total product-measure mass of the codewords.
    pub fn mass(&self, mu: &Dist) -> Ratio {
        self.words.iter().map(|w| mu.word_prob(w)).sum()
    }

    pub fn is_exhaustive(&self, mu: &Dist) -> bool {
        self.mass(mu).is_one()
    }
}

/// Indices `(i, j)` with `words[i]` a prefix of `words[j]`, if any.
///
/// After sorting, a word that prefixes another also prefixes its immediate
/// successor, so adjacent pairs suffice.
pub fn find_prefix_pair(words: &[Word]) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..words.len()).collect();
    order.sort_by(|&a, &b| words[a].cmp(&words[b]));
    order
        .windows(2)
        .find(|w| is_prefix(&words[w[0]], &words[w[1]]))
        .map(|w| (w[0], w[1]))
}

/// Kraft sum `Σ d^(-ℓ)` over a multiset of lengths, exact.
pub fn kraft_sum(lengths: &[usize], d: usize) -> Ratio {
    let Some(&max_len) = lengths.iter().max() else {
        return Ratio::zero();
    };
    let base = BigUint::from(d);
    let denom = base.pow(max_len as u32);
    let numer: BigUint = lengths.iter().map(|&l| base.pow((max_len - l) as u32)).sum();
    ratio_big(numer, denom)
}

/// Canonical prefix code with exactly the requested lengths.
///
/// Lengths are served in ascending order (ties in request order), each
/// receiving the lexicographically smallest word of its length that is
/// prefix-incomparable with every word already chosen. The returned words are
/// aligned with `lengths`.
pub fn assign_codewords(lengths: &[usize], d: usize) -> Result<PrefixCode> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("code alphabet size {d} < 2")));
    }
    let kraft = kraft_sum(lengths, d);
    if kraft > Ratio::one() {
        return Err(Error::KraftInfeasible(ratio_string(&kraft)));
    }
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by_key(|&i| lengths[i]);

    let base = BigUint::from(d);
    let mut words = vec![Word::new(); lengths.len()];
    let mut value = BigUint::zero();
    let mut prev: Option<usize> = None;
    for &i in &order {
        let len = lengths[i];
        if let Some(p) = prev {
            value = (value + 1u32) * base.pow((len - p) as u32);
        }
        debug_assert!(value < base.pow(len as u32));
        words[i] = to_digits(&value, d, len);
        prev = Some(len);
    }
    Ok(PrefixCode { arity: d, words })
}

/// `value` written with exactly `len` base-`d` digits, most significant first.
pub(crate) fn to_digits(value: &BigUint, d: usize, len: usize) -> Word {
    let mut out = vec![0 as Symbol; len];
    if let Some(small) = value.to_u64() {
        let mut v = small;
        for slot in out.iter_mut().rev() {
            *slot = (v % d as u64) as Symbol;
            v /= d as u64;
        }
        return out;
    }
    let digits = value.to_radix_le(d as u32);
    for (slot, digit) in out.iter_mut().rev().zip(digits) {
        *slot = digit as Symbol;
    }
    out
}

/// Result of a bounded search for the input words that force an output prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixSearch {
    /// Minimal input words whose output extends the target, shortest first.
    pub words: Vec<Word>,
    /// `false` if some branch was cut at the depth cap while still compatible
    /// with the target, so mass may remain beyond the cap.
    pub complete: bool,
}

impl PrefixSearch {
    pub fn mass(&self, mu: &Dist) -> Ratio {
        self.words.iter().map(|w| mu.word_prob(w)).sum()
    }
}

/// Minimal input words `x` (up to `depth_cap` symbols) with `y ⪯ δ(s, x)`.
pub fn prefix_code_of<P: Protocol + ?Sized>(p: &P, s: StateId, y: &[Symbol], depth_cap: usize) -> Result<PrefixSearch> {
    let mut found = Vec::new();
    let mut complete = true;
    let mut frontier = VecDeque::from([(Word::new(), s, Word::new())]);
    while let Some((x, state, emitted)) = frontier.pop_front() {
        if is_prefix(y, &emitted) {
            found.push(x);
            continue;
        }
        if !is_prefix(&emitted, y) {
            continue;
        }
        if x.len() >= depth_cap {
            complete = false;
            continue;
        }
        for a in 0..p.input_size() as Symbol {
            let mut out = emitted.clone();
            let next = p.step_into(state, a, &mut out)?;
            let mut xa = x.clone();
            xa.push(a);
            frontier.push_back((xa, next, out));
        }
    }
    Ok(PrefixSearch { words: found, complete })
}
