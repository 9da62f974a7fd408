//! Exact and statistical checks on a correct protocol and on a corrupted
//! copy of it.

use conserve::analysis::{chi_square_prefixes, output_swaps, verify_reduction_exact};
use conserve::combinators::build_restart;
use conserve::ratio_string;
use conserve::reductions::biased_to_uniform;

fn main() -> conserve::Result<()> {
    let spec = biased_to_uniform(3, 2)?;
    let report = verify_reduction_exact(&spec, 3)?;
    println!("original: deviation {}", ratio_string(&report.max_deviation));
    for row in report.rows.iter().take(4) {
        println!("  {:?}: {}", row.prefix, ratio_string(&row.computed));
    }

    let p = build_restart(&spec)?;
    let chi = chi_square_prefixes(&p, spec.mu(), spec.nu(), 3, 10_000, 0)?;
    println!("chi-square passed: {}", chi.passed);

    for swap in output_swaps(&spec) {
        let mutated = swap.apply(&spec);
        let dev = verify_reduction_exact(&mutated, 3)?.max_deviation;
        println!(
            "swap outputs {} and {}: deviation {} ({})",
            swap.first,
            swap.second,
            ratio_string(&dev),
            if swap.preserves_law { "same law" } else { "law changed" }
        );
    }
    Ok(())
}
