//! Produce a 2/5 : 3/5 source from base-4 digits. The target has no finite
//! base-4 expansion, so the protocol keeps opening new stages to spend the
//! leftover probability.

use conserve::analysis::{chi_square_prefixes, verify_reduction_lazy};
use conserve::reductions::uniform_to_arbitrary;
use conserve::{ratio, ratio_string, Dist, ExactSampler, Protocol};

fn main() -> conserve::Result<()> {
    let target = Dist::new(vec![ratio(2, 5), ratio(3, 5)])?;
    let staged = uniform_to_arbitrary(4, &target, 2)?;

    for depth in 1..=4 {
        let report = verify_reduction_lazy(&staged, &target, 3, depth)?;
        println!(
            "depth {depth}: deviation {:>10}  bound {:>10}",
            ratio_string(&report.max_deviation),
            ratio_string(&report.deviation_bound)
        );
    }
    println!("stages generated: {}", staged.stage_count());

    let digits = Dist::uniform(4)?;
    let chi = chi_square_prefixes(&staged, &digits, &target, 3, 20_000, 1)?;
    println!("chi-square {:.2} against {:.2}", chi.statistic, chi.threshold);

    let out = staged.run_stream(&mut ExactSampler::new(&digits, 7)?, 10_000)?;
    let ones = out.iter().filter(|&&s| s == 1).count();
    println!(
        "{} outputs, fraction of 1s {:.4}",
        out.len(),
        ones as f64 / out.len() as f64
    );
    Ok(())
}
