use std::collections::HashMap;
use std::sync::Mutex;

use crate::alphabet::{Symbol, Word};
use crate::error::{Error, Result};
use crate::protocol::{Protocol, StateId};

#[derive(Default)]
struct PairTable {
    ids: HashMap<(StateId, StateId), StateId>,
    pairs: Vec<(StateId, StateId)>,
}

impl PairTable {
    fn intern(&mut self, pair: (StateId, StateId)) -> StateId {
        if let Some(&id) = self.ids.get(&pair) {
            return id;
        }
        let id = StateId(self.pairs.len());
        self.pairs.push(pair);
        self.ids.insert(pair, id);
        id
    }
}

/// Sequential composition: each input symbol drives one step of `first`, and
/// `second` consumes whatever `first` emitted.
///
/// Product states are interned on first visit, so only reachable pairs are
/// ever stored.
pub struct Composite<A, B> {
    first: A,
    second: B,
    start: StateId,
    table: Mutex<PairTable>,
}

pub fn compose<A: Protocol, B: Protocol>(first: A, second: B) -> Result<Composite<A, B>> {
    if first.output_size() != second.input_size() {
        return Err(Error::AlphabetMismatch(format!(
            "first protocol emits {} symbols, second reads {}",
            first.output_size(),
            second.input_size()
        )));
    }
    let mut table = PairTable::default();
    let start = table.intern((first.start(), second.start()));
    Ok(Composite {
        first,
        second,
        start,
        table: Mutex::new(table),
    })
}

impl<A, B> Composite<A, B> {
    pub fn first(&self) -> &A {
        &self.first
    }

    pub fn second(&self) -> &B {
        &self.second
    }

    /// Number of product states visited so far.
    pub fn reachable_states(&self) -> usize {
        self.table.lock().expect("pair table poisoned").pairs.len()
    }

    /// Component states behind a product state.
    pub fn split(&self, state: StateId) -> Result<(StateId, StateId)> {
        let table = self.table.lock().expect("pair table poisoned");
        table.pairs.get(state.0).copied().ok_or(Error::UnknownState(state.0))
    }
}

impl<A: Protocol, B: Protocol> Protocol for Composite<A, B> {
    fn input_size(&self) -> usize {
        self.first.input_size()
    }

    fn output_size(&self) -> usize {
        self.second.output_size()
    }

    fn start(&self) -> StateId {
        self.start
    }

    fn step_into(&self, state: StateId, symbol: Symbol, out: &mut Word) -> Result<StateId> {
        let (s, t) = self.split(state)?;
        let mut middle = Word::new();
        let u = self.first.step_into(s, symbol, &mut middle)?;
        let v = self.second.step_word_into(t, &middle, out)?;
        Ok(self.table.lock().expect("pair table poisoned").intern((u, v)))
    }
}
