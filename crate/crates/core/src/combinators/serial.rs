use std::sync::{Arc, RwLock};

use num_traits::Zero;

use super::restart::{build_restart, RestartSpec};
use super::stats::{epoch_stats, EpochStats};
use crate::alphabet::{Symbol, Word};
use crate::dist::{ratio_to_f64, Ratio};
use crate::error::{Error, Result};
use crate::protocol::{Protocol, StateId, TableProtocol};

/// Supplies the components of a serial chain on demand.
#[allow(clippy::len_without_is_empty)]
pub trait ComponentSource: Send + Sync {
    /// Number of components, `None` for an unbounded chain.
    fn len(&self) -> Option<usize>;

    fn spec(&self, index: usize) -> Result<RestartSpec>;

    /// Statistics of component `index`. Sources with closed forms override
    /// this so that long chains can be analyzed without materializing codes.
    fn stats(&self, index: usize) -> Result<EpochStats> {
        Ok(epoch_stats(&self.spec(index)?))
    }
}

struct ListSource(Vec<RestartSpec>);

impl ComponentSource for ListSource {
    fn len(&self) -> Option<usize> {
        Some(self.0.len())
    }

    fn spec(&self, index: usize) -> Result<RestartSpec> {
        self.0.get(index).cloned().ok_or(Error::EmptyChain)
    }
}

struct RepeatSource(RestartSpec);

impl ComponentSource for RepeatSource {
    fn len(&self) -> Option<usize> {
        None
    }

    fn spec(&self, _: usize) -> Result<RestartSpec> {
        Ok(self.0.clone())
    }
}

type SpecFn = dyn Fn(usize) -> Result<RestartSpec> + Send + Sync;
type StatsFn = dyn Fn(usize) -> Result<EpochStats> + Send + Sync;

struct FnSource {
    len: Option<usize>,
    spec: Box<SpecFn>,
    stats: Option<Box<StatsFn>>,
}

impl ComponentSource for FnSource {
    fn len(&self) -> Option<usize> {
        self.len
    }

    fn spec(&self, index: usize) -> Result<RestartSpec> {
        (self.spec)(index)
    }

    fn stats(&self, index: usize) -> Result<EpochStats> {
        match &self.stats {
            Some(f) => f(index),
            None => Ok(epoch_stats(&(self.spec)(index)?)),
        }
    }
}

/// A sequence of restart components run one iteration each, in order.
///
/// A finite chain keeps repeating its last component once it runs out.
#[derive(Clone)]
pub struct SerialChain {
    source: Arc<dyn ComponentSource>,
}

impl SerialChain {
    pub fn new(source: impl ComponentSource + 'static) -> Result<Self> {
        if source.len() == Some(0) {
            return Err(Error::EmptyChain);
        }
        Ok(Self {
            source: Arc::new(source),
        })
    }

    pub fn from_specs(specs: Vec<RestartSpec>) -> Result<Self> {
        Self::new(ListSource(specs))
    }

    /// The constant chain, equivalent to the ordinary restart protocol.
    pub fn repeat(spec: RestartSpec) -> Self {
        Self {
            source: Arc::new(RepeatSource(spec)),
        }
    }

    /// Chain generated by closures; `stats`, when given, must agree with
    /// `epoch_stats(spec(i))`.
    pub fn from_fn<F, G>(len: Option<usize>, spec: F, stats: Option<G>) -> Result<Self>
    where
        F: Fn(usize) -> Result<RestartSpec> + Send + Sync + 'static,
        G: Fn(usize) -> Result<EpochStats> + Send + Sync + 'static,
    {
        Self::new(FnSource {
            len,
            spec: Box::new(spec),
            stats: stats.map(|g| Box::new(g) as Box<StatsFn>),
        })
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> Option<usize> {
        self.source.len()
    }

    /// Index of the component that runs as the `position`-th iteration.
    pub fn component_index(&self, position: usize) -> usize {
        match self.source.len() {
            Some(n) => position.min(n - 1),
            None => position,
        }
    }

    pub fn spec(&self, position: usize) -> Result<RestartSpec> {
        self.source.spec(self.component_index(position))
    }

    pub fn stats(&self, position: usize) -> Result<EpochStats> {
        self.source.stats(self.component_index(position))
    }
}

struct Materialized {
    protocols: Vec<TableProtocol>,
    /// First global state id of each component.
    bases: Vec<usize>,
}

impl Materialized {
    fn locate(&self, state: StateId) -> Result<(usize, StateId)> {
        let k = self.bases.partition_point(|&b| b <= state.0);
        if k == 0 {
            return Err(Error::UnknownState(state.0));
        }
        let k = k - 1;
        let local = state.0 - self.bases[k];
        if local >= self.protocols[k].state_count() {
            return Err(Error::UnknownState(state.0));
        }
        Ok((k, StateId(local)))
    }

    fn start_of(&self, k: usize) -> StateId {
        StateId(self.bases[k] + self.protocols[k].start().0)
    }
}

/// Protocol running one iteration of each chain component in turn.
/// Components are materialized when control first reaches them.
pub struct SerialProtocol {
    chain: SerialChain,
    input_size: usize,
    output_size: usize,
    inner: RwLock<Materialized>,
}

pub fn build_serial(chain: &SerialChain) -> Result<SerialProtocol> {
    let first = build_restart(&chain.spec(0)?)?;
    let input_size = first.input_size();
    let output_size = first.output_size();
    Ok(SerialProtocol {
        chain: chain.clone(),
        input_size,
        output_size,
        inner: RwLock::new(Materialized {
            protocols: vec![first],
            bases: vec![0],
        }),
    })
}

impl SerialProtocol {
    pub fn chain(&self) -> &SerialChain {
        &self.chain
    }

    /// Component (by chain index) that owns `state`.
    pub fn component_of(&self, state: StateId) -> Result<usize> {
        Ok(self.inner.read().expect("serial table poisoned").locate(state)?.0)
    }

    pub fn materialized_components(&self) -> usize {
        self.inner.read().expect("serial table poisoned").protocols.len()
    }

    fn materialize_through(&self, k: usize) -> Result<StateId> {
        let mut inner = self.inner.write().expect("serial table poisoned");
        while inner.protocols.len() <= k {
            let next = inner.protocols.len();
            let p = build_restart(&self.chain.spec(next)?)?;
            if p.input_size() != self.input_size || p.output_size() != self.output_size {
                return Err(Error::AlphabetMismatch(format!(
                    "serial component {next} changes alphabets"
                )));
            }
            let base = inner.bases[next - 1] + inner.protocols[next - 1].state_count();
            inner.bases.push(base);
            inner.protocols.push(p);
        }
        Ok(inner.start_of(k))
    }
}

impl Protocol for SerialProtocol {
    fn input_size(&self) -> usize {
        self.input_size
    }

    fn output_size(&self) -> usize {
        self.output_size
    }

    fn start(&self) -> StateId {
        StateId(0)
    }

    fn step_into(&self, state: StateId, symbol: Symbol, out: &mut Word) -> Result<StateId> {
        let inner = self.inner.read().expect("serial table poisoned");
        let (k, local) = inner.locate(state)?;
        let p = &inner.protocols[k];
        let next = p.step_into(local, symbol, out)?;
        if next != p.start() {
            return Ok(StateId(inner.bases[k] + next.0));
        }
        // Iteration of component k finished.
        let following = self.chain.component_index(k + 1);
        if following < inner.protocols.len() {
            return Ok(inner.start_of(following));
        }
        drop(inner);
        self.materialize_through(following)
    }
}

/// Partial efficiency `(Σ_{i<n} p_i) / (Σ_{i<n} c_i)` of a serial chain.
#[derive(Clone, Debug, PartialEq)]
pub struct SerialEfficiency {
    /// Output symbols per input symbol, exact.
    pub ratio: Ratio,
    /// `ratio · H(ν) / H(μ)`.
    pub bits: f64,
}

pub fn serial_partial_efficiency(chain: &SerialChain, n: usize) -> Result<SerialEfficiency> {
    if n == 0 {
        return Err(Error::InvalidParameter("partial efficiency needs n >= 1".into()));
    }
    let mut produced = Ratio::zero();
    let mut consumed = Ratio::zero();
    let mut scale = 0.0;
    for i in 0..n {
        let st = chain.stats(i)?;
        if i == 0 && st.entropy_in > 0.0 {
            scale = st.entropy_out / st.entropy_in;
        }
        produced += st.production;
        consumed += st.consumption;
    }
    let ratio = produced / consumed;
    let bits = ratio_to_f64(&ratio) * scale;
    Ok(SerialEfficiency { ratio, bits })
}

/// Ratios `m_i / Σ_{j<i} c_j` for `i = 1..n`, with `m_i` the longest
/// codeword of component `i` in input symbols.
pub fn check_growth_condition(chain: &SerialChain, n: usize) -> Result<Vec<Ratio>> {
    if n < 2 {
        return Err(Error::InvalidParameter("growth condition needs n >= 2".into()));
    }
    let mut consumed = chain.stats(0)?.consumption;
    let mut out = Vec::with_capacity(n - 1);
    for i in 1..n {
        let st = chain.stats(i)?;
        out.push(Ratio::from_integer(st.max_consumption.into()) / &consumed);
        consumed += st.consumption;
    }
    Ok(out)
}
