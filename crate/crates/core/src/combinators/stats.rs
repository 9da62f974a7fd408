use num_bigint::BigUint;
use num_traits::Zero;

use super::restart::RestartSpec;
use crate::dist::{ratio_big, ratio_to_f64, Ratio};
use crate::error::{Error, Result};

/// Exact per-iteration accounting of a restart protocol.
#[derive(Clone, Debug, PartialEq)]
pub struct EpochStats {
    /// Expected input symbols consumed per iteration.
    pub consumption: Ratio,
    /// Expected output symbols produced per iteration.
    pub production: Ratio,
    /// Probability that an iteration emits at least one symbol.
    pub success: Ratio,
    /// Expected consumption per epoch, `consumption / success`; `None` when
    /// no iteration can emit.
    pub latency: Option<Ratio>,
    /// Longest codeword, in input symbols.
    pub max_consumption: usize,
    /// Entropy of the input distribution, bits.
    pub entropy_in: f64,
    /// Entropy of the output distribution, bits.
    pub entropy_out: f64,
    /// `production · H(ν) / (consumption · H(μ))`.
    pub efficiency_bits: f64,
}

impl EpochStats {
    pub fn new(
        consumption: Ratio,
        production: Ratio,
        success: Ratio,
        max_consumption: usize,
        entropy_in: f64,
        entropy_out: f64,
    ) -> Self {
        let latency = (!success.is_zero()).then(|| &consumption / &success);
        let efficiency_bits = if entropy_in > 0.0 && !consumption.is_zero() {
            ratio_to_f64(&(&production / &consumption)) * entropy_out / entropy_in
        } else {
            0.0
        };
        Self {
            consumption,
            production,
            success,
            latency,
            max_consumption,
            entropy_in,
            entropy_out,
            efficiency_bits,
        }
    }

    pub fn is_productive(&self) -> bool {
        self.latency.is_some()
    }

    pub fn require_latency(&self) -> Result<&Ratio> {
        self.latency.as_ref().ok_or(Error::Unproductive)
    }

    /// Output symbols per input symbol, `production / consumption`.
    pub fn ratio(&self) -> Ratio {
        &self.production / &self.consumption
    }

    /// Latency weighted by input entropy, for display.
    pub fn latency_bits(&self) -> Option<f64> {
        self.latency.as_ref().map(|l| ratio_to_f64(l) * self.entropy_in)
    }
}

pub fn epoch_stats(spec: &RestartSpec) -> EpochStats {
    let (weights, denom) = spec.scaled_masses();
    let mut consumed = BigUint::zero();
    let mut produced = BigUint::zero();
    let mut success = BigUint::zero();
    let mut max_len = 0;
    for ((x, fx), w) in spec.entries().zip(&weights) {
        consumed += w * BigUint::from(x.len());
        produced += w * BigUint::from(fx.len());
        if !fx.is_empty() {
            success += w;
        }
        max_len = max_len.max(x.len());
    }
    EpochStats::new(
        ratio_big(consumed, denom.clone()),
        ratio_big(produced, denom.clone()),
        ratio_big(success, denom),
        max_len,
        spec.mu().entropy(),
        spec.nu().entropy(),
    )
}
