//! Simulate a 1/4 : 3/4 coin from base-4 digits, a block of k digits at a
//! time.

use conserve::analysis::verify_reduction_exact;
use conserve::combinators::epoch_stats;
use conserve::ratio_string;
use conserve::reductions::uniform_to_rational;

fn main() -> conserve::Result<()> {
    let spec = uniform_to_rational(4, &[1, 3], 2)?;
    for (input, output) in spec.entries() {
        println!("{input:?} -> {output:?}");
    }
    let st = epoch_stats(&spec);
    println!(
        "symbols per iteration {}, latency {}",
        ratio_string(&st.production),
        ratio_string(st.require_latency()?)
    );

    let report = verify_reduction_exact(&spec, 4)?;
    println!(
        "largest prefix deviation up to length 4: {}",
        ratio_string(&report.max_deviation)
    );
    Ok(())
}
