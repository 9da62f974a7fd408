//! Uniform source to an arbitrary rational target, by rounding down to
//! `d`-adic masses and recursing on what is left over.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::rational::block_lengths;
use super::uniform::check_materializable;
use crate::alphabet::{all_words, Symbol, Word};
use crate::dist::{ratio_big, Dist, Ratio};
use crate::error::{Error, Result};
use crate::prefix::assign_codewords;
use crate::protocol::{Protocol, StateId};

/// One stage of the construction: the target law of the next `k` output
/// symbols, its `d`-adic round-down and the leftover count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualState {
    dist: Vec<Ratio>,
    counts: Vec<BigUint>,
    residual: BigUint,
    scale: BigUint,
}

impl ResidualState {
    pub fn new(dist: Vec<Ratio>, d: usize, k: usize) -> Self {
        let scale = BigUint::from(d).pow(k as u32);
        let scale_int = BigInt::from(scale.clone());
        let counts: Vec<BigUint> = dist
            .iter()
            .map(|p| {
                (p * &scale_int)
                    .floor()
                    .to_integer()
                    .to_biguint()
                    .expect("non-negative")
            })
            .collect();
        let used: BigUint = counts.iter().sum();
        let residual = &scale - used;
        Self {
            dist,
            counts,
            residual,
            scale,
        }
    }

    /// Probabilities of the `c^k` output words, in lexicographic order.
    pub fn dist(&self) -> &[Ratio] {
        &self.dist
    }

    /// `a_y = ⌊p_y d^k⌋`.
    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// `r = d^k − Σ a_y`.
    pub fn residual(&self) -> &BigUint {
        &self.residual
    }

    pub fn scale(&self) -> &BigUint {
        &self.scale
    }

    /// `a_y d^(−k)`.
    pub fn emit_mass(&self, y: usize) -> Ratio {
        ratio_big(self.counts[y].clone(), self.scale.clone())
    }

    /// `r d^(−k)`, the probability of moving to the next stage.
    pub fn residual_mass(&self) -> Ratio {
        ratio_big(self.residual.clone(), self.scale.clone())
    }

    /// `(p_y − a_y d^(−k)) / (r d^(−k))`, or `None` when the rounding is exact.
    pub fn child_dist(&self) -> Option<Vec<Ratio>> {
        if self.residual.is_zero() {
            return None;
        }
        let rho = self.residual_mass();
        Some(
            self.dist
                .iter()
                .enumerate()
                .map(|(y, p)| (p - self.emit_mass(y)) / &rho)
                .collect(),
        )
    }
}

#[derive(Clone, Copy, Debug)]
enum Edge {
    Inner(usize),
    Emit(usize),
    Descend,
}

struct Stage {
    state: ResidualState,
    codewords: Vec<(Word, Option<usize>)>,
    nodes: Vec<Vec<Edge>>,
    base: usize,
    child: Option<usize>,
}

struct Stages {
    stages: Vec<Stage>,
    index: HashMap<Vec<Ratio>, usize>,
    next_base: usize,
}

/// What one stage does with a single iteration: the exact probability of
/// emitting each output word and of descending to the child stage.
#[derive(Clone, Debug, PartialEq)]
pub struct StageLaw {
    pub emit: Vec<(Word, Ratio)>,
    pub descend: Ratio,
}

/// Lazily generated protocol from uniform `d`-ary input to a target
/// distribution over `c` symbols, `k` output symbols per emission.
///
/// Stages are created on first descent and shared by residual distribution,
/// so targets whose residuals cycle yield finite protocols.
pub struct ResidualProtocol {
    d: usize,
    k: usize,
    target: Dist,
    words: Vec<Word>,
    inner: RwLock<Stages>,
}

/// Builds the staged protocol; `d · min p > 1` is required.
pub fn uniform_to_arbitrary(d: usize, target: &Dist, k: usize) -> Result<ResidualProtocol> {
    if d < 2 || target.size() < 2 {
        return Err(Error::InvalidParameter("alphabet sizes must be at least 2".into()));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    let target = target.clone().strict()?;
    if target.min_prob() * Ratio::from_integer(BigInt::from(d)) <= Ratio::one() {
        return Err(Error::Precondition(format!(
            "need d > 1/min p, got d = {d} and min p = {}",
            crate::dist::ratio_string(target.min_prob())
        )));
    }
    let c = target.size();
    check_materializable(c, k)?;
    let protocol = ResidualProtocol {
        d,
        k,
        words: all_words(c, k).collect(),
        inner: RwLock::new(Stages {
            stages: Vec::new(),
            index: HashMap::new(),
            next_base: 0,
        }),
        target: target.clone(),
    };
    {
        let mut stages = protocol.inner.write().expect("stage lock poisoned");
        protocol.intern(&mut stages, target.power_probs(k))?;
    }
    Ok(protocol)
}

impl ResidualProtocol {
    pub fn target(&self) -> &Dist {
        &self.target
    }

    pub fn block_len(&self) -> usize {
        self.k
    }

    /// Output words of one emission, in lexicographic order.
    pub fn output_words(&self) -> &[Word] {
        &self.words
    }

    fn intern(&self, stages: &mut Stages, dist: Vec<Ratio>) -> Result<usize> {
        if let Some(&i) = stages.index.get(&dist) {
            return Ok(i);
        }
        let state = ResidualState::new(dist.clone(), self.d, self.k);
        let mut lengths = Vec::new();
        let mut labels = Vec::new();
        for (y, a) in state.counts.iter().enumerate() {
            let block = block_lengths(a, self.d, self.k);
            labels.extend(std::iter::repeat_n(Some(y), block.len()));
            lengths.extend(block);
        }
        let tail = block_lengths(&state.residual, self.d, self.k);
        labels.extend(std::iter::repeat_n(None, tail.len()));
        lengths.extend(tail);
        if lengths.contains(&0) {
            return Err(Error::Precondition("a stage rounds every word to zero mass".into()));
        }
        let code = assign_codewords(&lengths, self.d)?;
        let codewords: Vec<(Word, Option<usize>)> = code.words().iter().cloned().zip(labels).collect();
        let mut nodes: Vec<Vec<Option<Edge>>> = vec![vec![None; self.d]];
        for (idx, (word, label)) in codewords.iter().enumerate() {
            let mut node = 0;
            for (pos, &a) in word.iter().enumerate() {
                if pos + 1 == word.len() {
                    nodes[node][a as usize] = Some(match label {
                        Some(_) => Edge::Emit(idx),
                        None => Edge::Descend,
                    });
                } else {
                    node = match nodes[node][a as usize] {
                        Some(Edge::Inner(n)) => n,
                        _ => {
                            nodes.push(vec![None; self.d]);
                            let fresh = nodes.len() - 1;
                            nodes[node][a as usize] = Some(Edge::Inner(fresh));
                            fresh
                        }
                    };
                }
            }
        }
        let nodes = nodes
            .into_iter()
            .map(|row| row.into_iter().collect::<Option<Vec<Edge>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::NotExhaustive("stage code has a missing branch".into()))?;
        let base = stages.next_base;
        stages.next_base += nodes.len();
        stages.stages.push(Stage {
            state,
            codewords,
            nodes,
            base,
            child: None,
        });
        let i = stages.stages.len() - 1;
        stages.index.insert(dist, i);
        Ok(i)
    }

    fn ensure_child(&self, stage: usize) -> Result<Option<usize>> {
        {
            let stages = self.inner.read().expect("stage lock poisoned");
            let s = stages.stages.get(stage).ok_or(Error::UnknownState(stage))?;
            if s.child.is_some() || s.state.residual.is_zero() {
                return Ok(s.child);
            }
        }
        let mut stages = self.inner.write().expect("stage lock poisoned");
        if let Some(child) = stages.stages[stage].child {
            return Ok(Some(child));
        }
        let dist = stages.stages[stage].state.child_dist().expect("residual is positive");
        let child = self.intern(&mut stages, dist)?;
        stages.stages[stage].child = Some(child);
        Ok(Some(child))
    }

    /// Number of stages created so far.
    pub fn stage_count(&self) -> usize {
        self.inner.read().expect("stage lock poisoned").stages.len()
    }

    pub fn residual_state(&self, stage: usize) -> Result<ResidualState> {
        let stages = self.inner.read().expect("stage lock poisoned");
        stages
            .stages
            .get(stage)
            .map(|s| s.state.clone())
            .ok_or(Error::UnknownState(stage))
    }

    /// Stage reached by descending from `stage`, creating it if needed.
    pub fn child_stage(&self, stage: usize) -> Result<Option<usize>> {
        self.ensure_child(stage)
    }

    /// Start state of `stage`.
    pub fn stage_start(&self, stage: usize) -> Result<StateId> {
        let stages = self.inner.read().expect("stage lock poisoned");
        stages
            .stages
            .get(stage)
            .map(|s| StateId(s.base))
            .ok_or(Error::UnknownState(stage))
    }

    /// Codewords of `stage` with the index of the word each emits, `None`
    /// for descent.
    pub fn stage_codewords(&self, stage: usize) -> Result<Vec<(Word, Option<usize>)>> {
        let stages = self.inner.read().expect("stage lock poisoned");
        stages
            .stages
            .get(stage)
            .map(|s| s.codewords.clone())
            .ok_or(Error::UnknownState(stage))
    }

    /// Law of one iteration of `stage`, summed from its codewords.
    pub fn stage_law(&self, stage: usize) -> Result<StageLaw> {
        let codewords = self.stage_codewords(stage)?;
        let max_len = codewords.iter().map(|(w, _)| w.len()).max().unwrap_or(0);
        let db = BigUint::from(self.d);
        let mut emit = vec![BigUint::zero(); self.words.len()];
        let mut descend = BigUint::zero();
        for (w, label) in &codewords {
            let weight = db.pow((max_len - w.len()) as u32);
            match label {
                Some(y) => emit[*y] += weight,
                None => descend += weight,
            }
        }
        let denom = db.pow(max_len as u32);
        Ok(StageLaw {
            emit: self
                .words
                .iter()
                .cloned()
                .zip(emit)
                .filter(|(_, m)| !m.is_zero())
                .map(|(w, m)| (w, ratio_big(m, denom.clone())))
                .collect(),
            descend: ratio_big(descend, denom),
        })
    }

    fn locate(stages: &Stages, state: usize) -> Option<(usize, usize)> {
        let i = stages.stages.partition_point(|s| s.base <= state).checked_sub(1)?;
        let local = state - stages.stages[i].base;
        (local < stages.stages[i].nodes.len()).then_some((i, local))
    }
}

impl Protocol for ResidualProtocol {
    fn input_size(&self) -> usize {
        self.d
    }

    fn output_size(&self) -> usize {
        self.target.size()
    }

    fn start(&self) -> StateId {
        StateId(0)
    }

    fn step_into(&self, state: StateId, symbol: Symbol, out: &mut Word) -> Result<StateId> {
        if symbol as usize >= self.d {
            return Err(Error::SymbolOutOfRange { symbol, size: self.d });
        }
        let (stage, edge) = {
            let stages = self.inner.read().expect("stage lock poisoned");
            let (i, local) = Self::locate(&stages, state.0).ok_or(Error::UnknownState(state.0))?;
            let s = &stages.stages[i];
            match s.nodes[local][symbol as usize] {
                Edge::Inner(n) => return Ok(StateId(s.base + n)),
                Edge::Emit(idx) => {
                    let y = s.codewords[idx].1.expect("emitting codeword");
                    out.extend_from_slice(&self.words[y]);
                    return Ok(StateId(0));
                }
                Edge::Descend => (i, Edge::Descend),
            }
        };
        debug_assert!(matches!(edge, Edge::Descend));
        let child = self.ensure_child(stage)?.expect("descent implies a residual");
        self.stage_start(child)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::ratio;

    fn third() -> Dist {
        Dist::from_ratios(&[(1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn self_similar_target_has_one_stage() {
        let p = uniform_to_arbitrary(4, &third(), 1).unwrap();
        let root = p.residual_state(0).unwrap();
        assert_eq!(root.counts(), &[BigUint::from(1u32), BigUint::from(2u32)]);
        assert_eq!(root.residual(), &BigUint::from(1u32));
        assert_eq!(root.child_dist().unwrap(), vec![ratio(1, 3), ratio(2, 3)]);
        assert_eq!(p.child_stage(0).unwrap(), Some(0));
        assert_eq!(p.stage_count(), 1);
        let law = p.stage_law(0).unwrap();
        assert_eq!(law.descend, ratio(1, 4));
        assert_eq!(law.emit, vec![(vec![0], ratio(1, 4)), (vec![1], ratio(1, 2))]);
        // the last codeword descends, back to the start
        assert_eq!(p.step(p.start(), 3).unwrap(), (StateId(0), vec![]));
    }

    #[test]
    fn dyadic_target_never_descends() {
        let target = Dist::from_ratios(&[(1, 4), (3, 4)]).unwrap();
        let p = uniform_to_arbitrary(8, &target, 2).unwrap();
        assert!(p.residual_state(0).unwrap().residual().is_zero());
        assert_eq!(p.child_stage(0).unwrap(), None);
        assert!(p.stage_law(0).unwrap().descend.is_zero());
    }

    #[test]
    fn rounding_is_half_open() {
        let target = Dist::from_ratios(&[(1, 7), (2, 7), (4, 7)]).unwrap();
        let p = uniform_to_arbitrary(10, &target, 2).unwrap();
        let mut stage = 0;
        for _ in 0..6 {
            let st = p.residual_state(stage).unwrap();
            let unit = ratio_big(BigUint::one(), st.scale().clone());
            for (y, prob) in st.dist().iter().enumerate() {
                let gap = prob - st.emit_mass(y);
                assert!(gap >= Ratio::zero() && gap < unit);
            }
            assert!(st.residual_mass() < ratio(9, 100));
            match p.child_stage(stage).unwrap() {
                Some(next) => stage = next,
                None => break,
            }
        }
    }

    #[test]
    fn precondition_enforced() {
        assert!(matches!(
            uniform_to_arbitrary(3, &third(), 1),
            Err(Error::Precondition(_))
        ));
        assert!(uniform_to_arbitrary(4, &third(), 1).is_ok());
    }

    #[test]
    fn unknown_states_and_symbols() {
        let p = uniform_to_arbitrary(4, &third(), 1).unwrap();
        assert!(matches!(p.step(p.start(), 4), Err(Error::SymbolOutOfRange { .. })));
        assert!(matches!(p.step(StateId(99), 0), Err(Error::UnknownState(99))));
    }
}
