use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::alphabet::Word;
use crate::dist::{ratio_big, ratio_string, Dist, Ratio};
use crate::error::{Error, Result};
use crate::prefix::PrefixCode;
use crate::protocol::TableProtocol;

/// An exhaustive prefix code over the input alphabet together with the word
/// each codeword emits.
///
/// Running it means: read input until a codeword is complete, emit its
/// output word, return to the start and repeat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestartSpec {
    code: PrefixCode,
    outputs: Vec<Word>,
    mu: Dist,
    nu: Dist,
}

impl RestartSpec {
    pub fn new(code: PrefixCode, outputs: Vec<Word>, mu: Dist, nu: Dist) -> Result<Self> {
        if code.arity() != mu.size() {
            return Err(Error::AlphabetMismatch(format!(
                "code over {} symbols, input distribution over {}",
                code.arity(),
                mu.size()
            )));
        }
        if outputs.len() != code.len() {
            return Err(Error::InvalidParameter(format!(
                "{} outputs for {} codewords",
                outputs.len(),
                code.len()
            )));
        }
        if !mu.is_strict() {
            return Err(Error::InvalidDist(
                "input distribution must give every symbol positive mass".into(),
            ));
        }
        if code.words().iter().any(Vec::is_empty) {
            return Err(Error::InvalidParameter(
                "the empty word cannot be an input codeword".into(),
            ));
        }
        for w in &outputs {
            nu.alphabet().check(w)?;
        }
        let spec = Self { code, outputs, mu, nu };
        let mass = spec.code_mass();
        if !mass.is_one() {
            return Err(Error::NotExhaustive(ratio_string(&mass)));
        }
        Ok(spec)
    }

    pub fn code(&self) -> &PrefixCode {
        &self.code
    }

    pub fn outputs(&self) -> &[Word] {
        &self.outputs
    }

    pub fn mu(&self) -> &Dist {
        &self.mu
    }

    pub fn nu(&self) -> &Dist {
        &self.nu
    }

    pub fn len(&self) -> usize {
        self.code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.code.is_empty()
    }

    /// `(codeword, output)` pairs in code order.
    pub fn entries(&self) -> impl Iterator<Item = (&Word, &Word)> {
        self.code.words().iter().zip(&self.outputs)
    }

    /// Copy with the outputs of codewords `i` and `j` exchanged. Used for
    /// mutation testing of the verifiers; the result is still a well-formed
    /// restart spec but usually no longer a reduction.
    pub fn with_swapped_outputs(&self, i: usize, j: usize) -> Self {
        let mut next = self.clone();
        next.outputs.swap(i, j);
        next
    }

    /// Exact per-codeword masses as integers over a shared denominator:
    /// `μ(x_i) = weights[i] / denom`.
    pub(crate) fn scaled_masses(&self) -> (Vec<BigUint>, BigUint) {
        let d_common = self.mu.common_denominator().to_biguint().expect("positive");
        let numer: Vec<BigUint> = self
            .mu
            .probs()
            .iter()
            .map(|p| {
                (p * num_bigint::BigInt::from(d_common.clone()))
                    .to_integer()
                    .to_biguint()
                    .expect("non-negative")
            })
            .collect();
        let max_len = self.code.words().iter().map(Vec::len).max().unwrap_or(0);
        let pows: Vec<BigUint> = (0..=max_len).map(|e| d_common.pow(e as u32)).collect();
        let uniform = numer.iter().all(BigUint::is_one);
        let weights = self
            .code
            .words()
            .iter()
            .map(|w| {
                let tail = &pows[max_len - w.len()];
                if uniform {
                    tail.clone()
                } else {
                    w.iter().fold(tail.clone(), |acc, &a| acc * &numer[a as usize])
                }
            })
            .collect();
        (weights, pows[max_len].clone())
    }

    pub fn code_mass(&self) -> Ratio {
        let (weights, denom) = self.scaled_masses();
        ratio_big(weights.iter().sum(), denom)
    }

    /// Exact codeword masses `μ(x)` in code order.
    pub fn masses(&self) -> Vec<Ratio> {
        let (weights, denom) = self.scaled_masses();
        weights.into_iter().map(|w| ratio_big(w, denom.clone())).collect()
    }

    /// Law of the word emitted by one iteration: `W(w) = Σ_{f(x) = w} μ(x)`.
    pub fn word_law(&self) -> BTreeMap<Word, Ratio> {
        let (weights, denom) = self.scaled_masses();
        let mut acc: BTreeMap<Word, BigUint> = BTreeMap::new();
        for (w, out) in weights.into_iter().zip(&self.outputs) {
            *acc.entry(out.clone()).or_insert_with(BigUint::zero) += w;
        }
        acc.into_iter().map(|(w, m)| (w, ratio_big(m, denom.clone()))).collect()
    }
}

#[derive(Clone, Copy)]
enum Edge {
    Missing,
    Inner(usize),
    Leaf(usize),
}

/// Materializes the restart protocol of `spec`.
///
/// States are the proper prefixes of codewords, numbered in insertion order
/// with the empty prefix as the start state. Completing a codeword emits its
/// output and returns to the start.
pub fn build_restart(spec: &RestartSpec) -> Result<TableProtocol> {
    let d = spec.mu().size();
    let mut nodes: Vec<Vec<Edge>> = vec![vec![Edge::Missing; d]];
    for (idx, word) in spec.code().words().iter().enumerate() {
        let mut node = 0;
        for (pos, &a) in word.iter().enumerate() {
            let last = pos + 1 == word.len();
            match (nodes[node][a as usize], last) {
                (Edge::Missing, true) => nodes[node][a as usize] = Edge::Leaf(idx),
                (Edge::Missing, false) => {
                    nodes.push(vec![Edge::Missing; d]);
                    let fresh = nodes.len() - 1;
                    nodes[node][a as usize] = Edge::Inner(fresh);
                    node = fresh;
                }
                (Edge::Inner(next), false) => node = next,
                _ => {
                    return Err(Error::NotPrefixFree(format!(
                        "codeword {word:?} collides with another codeword"
                    )))
                }
            }
        }
    }
    let mut table = Vec::with_capacity(nodes.len());
    for row in &nodes {
        let mut out = Vec::with_capacity(d);
        for edge in row {
            match *edge {
                Edge::Inner(next) => out.push((next, Word::new())),
                Edge::Leaf(i) => out.push((0, spec.outputs()[i].clone())),
                Edge::Missing => {
                    return Err(Error::NotExhaustive("code tree has a missing branch".into()));
                }
            }
        }
        table.push(out);
    }
    TableProtocol::new(d, spec.nu().size(), 0, table)
}
