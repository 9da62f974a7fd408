//! The protocol interface: deterministic transducers `(state, symbol) -> (state, word)`.

use std::sync::Arc;

use crate::alphabet::{Symbol, Word};
use crate::error::{Error, Result};
use crate::sampler::ExactSampler;

/// Opaque handle to a protocol state.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub(crate) usize);

impl StateId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A deterministic protocol over finite input and output alphabets.
///
/// Implementations must be total on reachable states times the input
/// alphabet. Lazily generated protocols may grow internal tables while
/// stepping, so the trait only requires `&self`.
pub trait Protocol: Send + Sync {
    fn input_size(&self) -> usize;

    fn output_size(&self) -> usize;

    fn start(&self) -> StateId;

    /// Takes one transition, appending the emitted word to `out`.
    fn step_into(&self, state: StateId, symbol: Symbol, out: &mut Word) -> Result<StateId>;

    fn step(&self, state: StateId, symbol: Symbol) -> Result<(StateId, Word)> {
        let mut out = Word::new();
        let next = self.step_into(state, symbol, &mut out)?;
        Ok((next, out))
    }

    /// Extension of the step function to finite words: folds `step` over
    /// `input` and concatenates the emissions.
    fn step_word(&self, state: StateId, input: &[Symbol]) -> Result<(StateId, Word)> {
        let mut out = Word::new();
        let next = self.step_word_into(state, input, &mut out)?;
        Ok((next, out))
    }

    fn step_word_into(&self, mut state: StateId, input: &[Symbol], out: &mut Word) -> Result<StateId> {
        for &a in input {
            state = self.step_into(state, a, out)?;
        }
        Ok(state)
    }

    /// Feeds exactly `n_inputs` sampled symbols from the start state.
    fn run_stream(&self, src: &mut ExactSampler, n_inputs: usize) -> Result<Word> {
        let mut out = Word::new();
        self.run_from(self.start(), src, n_inputs, &mut out)?;
        Ok(out)
    }

    fn run_from(&self, mut state: StateId, src: &mut ExactSampler, n_inputs: usize, out: &mut Word) -> Result<StateId> {
        if src.alphabet_size() != self.input_size() {
            return Err(Error::AlphabetMismatch(format!(
                "sampler draws from {} symbols, protocol reads {}",
                src.alphabet_size(),
                self.input_size()
            )));
        }
        for _ in 0..n_inputs {
            state = self.step_into(state, src.draw(), out)?;
        }
        Ok(state)
    }
}

impl<P: Protocol + ?Sized> Protocol for &P {
    fn input_size(&self) -> usize {
        (**self).input_size()
    }
    fn output_size(&self) -> usize {
        (**self).output_size()
    }
    fn start(&self) -> StateId {
        (**self).start()
    }
    fn step_into(&self, state: StateId, symbol: Symbol, out: &mut Word) -> Result<StateId> {
        (**self).step_into(state, symbol, out)
    }
}

impl<P: Protocol + ?Sized> Protocol for Box<P> {
    fn input_size(&self) -> usize {
        (**self).input_size()
    }
    fn output_size(&self) -> usize {
        (**self).output_size()
    }
    fn start(&self) -> StateId {
        (**self).start()
    }
    fn step_into(&self, state: StateId, symbol: Symbol, out: &mut Word) -> Result<StateId> {
        (**self).step_into(state, symbol, out)
    }
}

impl<P: Protocol + ?Sized> Protocol for Arc<P> {
    fn input_size(&self) -> usize {
        (**self).input_size()
    }
    fn output_size(&self) -> usize {
        (**self).output_size()
    }
    fn start(&self) -> StateId {
        (**self).start()
    }
    fn step_into(&self, state: StateId, symbol: Symbol, out: &mut Word) -> Result<StateId> {
        (**self).step_into(state, symbol, out)
    }
}

/// A finite protocol stored as an explicit transition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableProtocol {
    input_size: usize,
    output_size: usize,
    start: StateId,
    table: Vec<Vec<(StateId, Word)>>,
}

impl TableProtocol {
    /// `table[s][a]` is the transition from state `s` on symbol `a`.
    pub fn new(input_size: usize, output_size: usize, start: usize, table: Vec<Vec<(usize, Word)>>) -> Result<Self> {
        if start >= table.len() {
            return Err(Error::UnknownState(start));
        }
        let n = table.len();
        let mut rows = Vec::with_capacity(n);
        for row in table {
            if row.len() != input_size {
                return Err(Error::InvalidParameter(format!(
                    "transition row has {} entries, expected {input_size}",
                    row.len()
                )));
            }
            let mut out_row = Vec::with_capacity(input_size);
            for (next, word) in row {
                if next >= n {
                    return Err(Error::UnknownState(next));
                }
                if let Some(&s) = word.iter().find(|&&s| s as usize >= output_size) {
                    return Err(Error::SymbolOutOfRange {
                        symbol: s,
                        size: output_size,
                    });
                }
                out_row.push((StateId(next), word));
            }
            rows.push(out_row);
        }
        Ok(Self {
            input_size,
            output_size,
            start: StateId(start),
            table: rows,
        })
    }

    /// One-state protocol echoing every symbol.
    pub fn identity(size: usize) -> Self {
        let row = (0..size as Symbol).map(|a| (StateId(0), vec![a])).collect();
        Self {
            input_size: size,
            output_size: size,
            start: StateId(0),
            table: vec![row],
        }
    }

    pub fn state_count(&self) -> usize {
        self.table.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.table.len()).map(StateId)
    }

    pub fn transitions(&self, state: StateId) -> Result<&[(StateId, Word)]> {
        self.table
            .get(state.0)
            .map(Vec::as_slice)
            .ok_or(Error::UnknownState(state.0))
    }
}

impl Protocol for TableProtocol {
    fn input_size(&self) -> usize {
        self.input_size
    }

    fn output_size(&self) -> usize {
        self.output_size
    }

    fn start(&self) -> StateId {
        self.start
    }

    fn step_into(&self, state: StateId, symbol: Symbol, out: &mut Word) -> Result<StateId> {
        let row = self.table.get(state.0).ok_or(Error::UnknownState(state.0))?;
        let (next, word) = row.get(symbol as usize).ok_or(Error::SymbolOutOfRange {
            symbol,
            size: self.input_size,
        })?;
        out.extend_from_slice(word);
        Ok(*next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Dist;

    #[test]
    fn identity_echoes() {
        let id = TableProtocol::identity(2);
        assert_eq!(
            id.step_word(id.start(), &[0, 1, 1, 0]).unwrap(),
            (id.start(), vec![0, 1, 1, 0])
        );
        assert_eq!(id.step_word(id.start(), &[]).unwrap(), (id.start(), vec![]));
    }

    #[test]
    fn run_stream_is_the_sample() {
        let id = TableProtocol::identity(3);
        let d = Dist::uniform(3).unwrap();
        let expected = ExactSampler::new(&d, 11).unwrap().fill(5);
        let out = id.run_stream(&mut ExactSampler::new(&d, 11).unwrap(), 5).unwrap();
        assert_eq!(out, expected);
        assert!(id
            .run_stream(&mut ExactSampler::new(&d, 11).unwrap(), 0)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn invalid_states_and_symbols() {
        let id = TableProtocol::identity(2);
        assert_eq!(id.step(StateId(3), 0), Err(Error::UnknownState(3)));
        assert!(matches!(id.step(id.start(), 2), Err(Error::SymbolOutOfRange { .. })));
        assert!(TableProtocol::new(2, 2, 0, vec![vec![(1, vec![])]]).is_err());
        assert!(TableProtocol::new(1, 2, 0, vec![vec![(0, vec![2])]]).is_err());
    }

    #[test]
    fn sampler_alphabet_must_match() {
        let id = TableProtocol::identity(2);
        let mut s = ExactSampler::new(&Dist::uniform(3).unwrap(), 0).unwrap();
        assert!(matches!(id.run_stream(&mut s, 3), Err(Error::AlphabetMismatch(_))));
    }
}
