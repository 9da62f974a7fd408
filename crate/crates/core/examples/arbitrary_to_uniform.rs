//! Extract fair bits from a 1/3 : 2/3 source by ranking each block within
//! its type class.

use conserve::combinators::epoch_stats;
use conserve::reductions::{arbitrary_to_uniform, arbitrary_to_uniform_bound, type_classes};
use conserve::{ratio_string, Dist};

fn main() -> conserve::Result<()> {
    let source = Dist::from_ratios(&[(1, 3), (2, 3)])?;
    for class in type_classes(&source, 4) {
        println!(
            "counts {:?}: {} words, mass {}",
            class.sigma,
            class.t,
            ratio_string(&class.q)
        );
    }

    let bound = arbitrary_to_uniform_bound(&source, 2);
    println!("\nbound {bound:.6} bits per input");
    for k in [2, 4, 8, 12] {
        let st = epoch_stats(&arbitrary_to_uniform(&source, 2, k)?);
        let r = conserve::ratio_to_f64(&st.ratio());
        println!("k={k:2}  {r:.6} bits per input, gap {:.6}", bound - r);
    }
    Ok(())
}
