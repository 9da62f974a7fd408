//! Chain two conversions: ternary to binary, then binary back to ternary.

use conserve::analysis::monte_carlo_efficiency;
use conserve::combinators::{build_restart, compose, epoch_stats};
use conserve::reductions::uniform_to_uniform;
use conserve::{ExactSampler, Protocol};

fn main() -> conserve::Result<()> {
    let first_spec = uniform_to_uniform(3, 2, 2)?;
    let second_spec = uniform_to_uniform(2, 3, 3)?;
    let first = build_restart(&first_spec)?;
    let second = build_restart(&second_spec)?;
    let both = compose(&first, &second)?;

    let input = ExactSampler::new(first_spec.mu(), 3)?.fill(20);
    let (_, direct) = both.step_word(both.start(), &input)?;
    let (_, bits) = first.step_word(first.start(), &input)?;
    let (_, piped) = second.step_word(second.start(), &bits)?;
    assert_eq!(direct, piped);
    println!("{input:?}\n-> {direct:?}");

    let expected = epoch_stats(&first_spec).efficiency_bits * epoch_stats(&second_spec).efficiency_bits;
    let seeds: Vec<u64> = (0..8).collect();
    let est = monte_carlo_efficiency(&both, first_spec.mu(), second_spec.nu(), 50_000, &seeds)?;
    println!(
        "efficiency {:.5} ± {:.5}, product of parts {expected:.5}",
        est.mean, est.std_error
    );
    println!("{} product states visited", both.reachable_states());
    Ok(())
}
