use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::statistics::Statistics;

use crate::alphabet::Word;
use crate::dist::{ratio_to_f64, Dist};
use crate::error::{Error, Result};
use crate::protocol::Protocol;
use crate::sampler::ExactSampler;

/// Most input symbols a single epoch or prefix draw may consume before the
/// protocol is declared unproductive.
pub const EPOCH_INPUT_CAP: u64 = 1_000_000;

/// Quantile of the chi-squared distribution used as the pass threshold.
pub const CHI_SQUARE_QUANTILE: f64 = 0.999;

/// Empirical efficiency over one run of `n` inputs per seed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EfficiencyEstimate {
    pub n: u64,
    pub seeds: Vec<u64>,
    /// Output symbols produced in each run.
    pub outputs: Vec<u64>,
    /// `outputs / n · H(ν) / H(μ)` for each run.
    pub samples: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation across seeds over `√seeds`; NaN for a
    /// single seed.
    pub std_error: f64,
}

fn check_sizes<P: Protocol + ?Sized>(p: &P, mu: &Dist, nu: &Dist) -> Result<()> {
    if p.input_size() != mu.size() || p.output_size() != nu.size() {
        return Err(Error::AlphabetMismatch(format!(
            "protocol maps {} to {} symbols, distributions have {} and {}",
            p.input_size(),
            p.output_size(),
            mu.size(),
            nu.size()
        )));
    }
    Ok(())
}

/// Runs `p` on `n` sampled inputs for each seed, in parallel.
pub fn monte_carlo_efficiency<P: Protocol + ?Sized>(
    p: &P,
    mu: &Dist,
    nu: &Dist,
    n: u64,
    seeds: &[u64],
) -> Result<EfficiencyEstimate> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if seeds.is_empty() {
        return Err(Error::InvalidParameter("at least one seed is required".into()));
    }
    let h_in = mu.entropy();
    if h_in <= 0.0 {
        return Err(Error::DegenerateInput);
    }
    check_sizes(p, mu, nu)?;
    let scale = nu.entropy() / h_in;
    let outputs = seeds
        .par_iter()
        .map(|&seed| {
            let mut src = ExactSampler::new(mu, seed)?;
            let mut state = p.start();
            let mut buf = Word::new();
            let mut produced = 0u64;
            for _ in 0..n {
                state = p.step_into(state, src.draw(), &mut buf)?;
                produced += buf.len() as u64;
                buf.clear();
            }
            Ok(produced)
        })
        .collect::<Result<Vec<u64>>>()?;
    let samples: Vec<f64> = outputs.iter().map(|&o| o as f64 / n as f64 * scale).collect();
    let mean = samples.iter().mean();
    let std_error = samples.iter().std_dev() / (samples.len() as f64).sqrt();
    Ok(EfficiencyEstimate {
        n,
        seeds: seeds.to_vec(),
        outputs,
        samples,
        mean,
        std_error,
    })
}

/// Goodness-of-fit of the first `len` output symbols against `ν^len`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquareReport {
    pub trials: u64,
    pub statistic: f64,
    pub degrees_of_freedom: u64,
    pub threshold: f64,
    pub passed: bool,
}

/// Draws `trials` independent runs of `p` from its start state, each until
/// `len` symbols are out, and tests the prefix frequencies.
pub fn chi_square_prefixes<P: Protocol + ?Sized>(
    p: &P,
    mu: &Dist,
    nu: &Dist,
    len: usize,
    trials: u64,
    seed: u64,
) -> Result<ChiSquareReport> {
    check_sizes(p, mu, nu)?;
    if len == 0 {
        return Err(Error::InvalidParameter("prefix length must be positive".into()));
    }
    let cells = nu.size().pow(len as u32);
    let need = 100 * cells as u64;
    if trials < need {
        return Err(Error::InsufficientTrials { need, got: trials });
    }
    let mut src = ExactSampler::new(mu, seed)?;
    let mut counts = vec![0u64; cells];
    let mut buf = Word::new();
    for _ in 0..trials {
        let mut state = p.start();
        buf.clear();
        let mut used = 0u64;
        while buf.len() < len {
            if used == EPOCH_INPUT_CAP {
                return Err(Error::Unproductive);
            }
            state = p.step_into(state, src.draw(), &mut buf)?;
            used += 1;
        }
        let cell = buf[..len].iter().fold(0usize, |acc, &s| acc * nu.size() + s as usize);
        counts[cell] += 1;
    }
    let probs = nu.power_probs(len);
    let mut statistic = 0.0;
    let mut used_cells = 0u64;
    for (observed, prob) in counts.iter().zip(&probs) {
        let expected = ratio_to_f64(prob) * trials as f64;
        if expected == 0.0 {
            if *observed > 0 {
                statistic = f64::INFINITY;
            }
            continue;
        }
        used_cells += 1;
        statistic += (*observed as f64 - expected).powi(2) / expected;
    }
    let degrees_of_freedom = used_cells.saturating_sub(1).max(1);
    let threshold = ChiSquared::new(degrees_of_freedom as f64)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?
        .inverse_cdf(CHI_SQUARE_QUANTILE);
    Ok(ChiSquareReport {
        trials,
        statistic,
        degrees_of_freedom,
        threshold,
        passed: statistic <= threshold,
    })
}

/// Mean input symbols per epoch over consecutive epochs of one run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatencyEstimate {
    pub epochs: u64,
    pub mean: f64,
    pub std_error: f64,
}

/// Counts inputs until the first emission, `epochs` times in a row,
/// continuing from wherever the previous epoch ended.
pub fn latency_empirical<P: Protocol + ?Sized>(p: &P, mu: &Dist, epochs: u64, seed: u64) -> Result<LatencyEstimate> {
    if epochs == 0 {
        return Err(Error::InvalidParameter("need at least one epoch".into()));
    }
    if p.input_size() != mu.size() {
        return Err(Error::AlphabetMismatch("protocol and distribution sizes differ".into()));
    }
    let mut src = ExactSampler::new(mu, seed)?;
    let mut state = p.start();
    let mut buf = Word::new();
    let mut lengths = Vec::with_capacity(epochs as usize);
    for _ in 0..epochs {
        let mut used = 0u64;
        buf.clear();
        while buf.is_empty() {
            if used == EPOCH_INPUT_CAP {
                return Err(Error::Unproductive);
            }
            state = p.step_into(state, src.draw(), &mut buf)?;
            used += 1;
        }
        lengths.push(used as f64);
    }
    let mean = lengths.iter().mean();
    let std_error = if lengths.len() > 1 {
        lengths.iter().std_dev() / (lengths.len() as f64).sqrt()
    } else {
        0.0
    };
    Ok(LatencyEstimate {
        epochs,
        mean,
        std_error,
    })
}
