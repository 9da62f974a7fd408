use serde::Serialize;

use crate::dist::{ratio_to_f64, Dist};
use crate::error::{Error, Result};

/// Worst-case output rate of any reduction from `μ` to `ν`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AbsoluteBound {
    /// `log min μ / log max ν`: output symbols per input symbol.
    pub symbols_per_input: f64,
    /// The same rate in entropy units, `symbols_per_input · H(ν)/H(μ)`.
    pub efficiency: f64,
}

impl AbsoluteBound {
    /// Largest output a reduction can emit on `inputs` symbols.
    pub fn max_output(&self, inputs: usize) -> f64 {
        self.symbols_per_input * inputs as f64
    }
}

/// An emitted word `y` has `ν(y) >= μ(x)` for the input `x` that produced it,
/// so `|y| · log max ν >= |x| · log min μ`.
pub fn absolute_output_bound(mu: &Dist, nu: &Dist) -> Result<AbsoluteBound> {
    let max_out = ratio_to_f64(nu.max_prob());
    let min_in = ratio_to_f64(mu.min_prob());
    if max_out >= 1.0 || min_in <= 0.0 || mu.entropy() <= 0.0 {
        return Err(Error::DegenerateInput);
    }
    let symbols_per_input = min_in.ln() / max_out.ln();
    Ok(AbsoluteBound {
        symbols_per_input,
        efficiency: symbols_per_input * nu.entropy() / mu.entropy(),
    })
}
