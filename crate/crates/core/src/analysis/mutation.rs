use crate::combinators::RestartSpec;

/// An exchange of the outputs of two codewords whose outputs have different
/// target probability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputSwap {
    pub first: usize,
    pub second: usize,
    /// Whether the swap leaves the per-iteration output law unchanged, which
    /// happens exactly when the two codewords have equal input mass. Such a
    /// swap still yields a correct reduction.
    pub preserves_law: bool,
}

impl OutputSwap {
    pub fn apply(&self, spec: &RestartSpec) -> RestartSpec {
        spec.with_swapped_outputs(self.first, self.second)
    }
}

/// Every swap between two codewords whose outputs differ in target mass.
pub fn output_swaps(spec: &RestartSpec) -> Vec<OutputSwap> {
    let masses = spec.masses();
    let target: Vec<_> = spec.outputs().iter().map(|y| spec.nu().word_prob(y)).collect();
    let mut swaps = Vec::new();
    for i in 0..spec.len() {
        for j in i + 1..spec.len() {
            if target[i] != target[j] {
                swaps.push(OutputSwap {
                    first: i,
                    second: j,
                    preserves_law: masses[i] == masses[j],
                });
            }
        }
    }
    swaps
}
