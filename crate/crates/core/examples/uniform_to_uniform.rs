//! Turn decimal digits into fair bits and compare block lengths.

use conserve::combinators::{build_restart, epoch_stats};
use conserve::reductions::uniform_to_uniform;
use conserve::{ratio_string, ExactSampler, Protocol};

fn main() -> conserve::Result<()> {
    let spec = uniform_to_uniform(10, 2, 1)?;
    for (digit, word) in spec.outputs().iter().enumerate() {
        let bits: String = word.iter().map(|b| b.to_string()).collect();
        println!("{digit} -> {bits}");
    }

    println!("\n k  bits/digit  efficiency");
    for k in 1..=5 {
        let st = epoch_stats(&uniform_to_uniform(10, 2, k)?);
        println!("{k:2}  {:>10}  {:.6}", ratio_string(&st.ratio()), st.efficiency_bits);
    }

    let p = build_restart(&spec)?;
    let mut digits = ExactSampler::new(spec.mu(), 42)?;
    let out = p.run_stream(&mut digits, 1000)?;
    println!("\n1000 sampled digits gave {} bits", out.len());
    Ok(())
}
