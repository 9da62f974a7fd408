//! Fair ternary symbols from a coin that lands heads one time in four.

use conserve::combinators::epoch_stats;
use conserve::reductions::{biased_bound, biased_plan, biased_to_uniform, find_dirichlet_k};

fn main() -> conserve::Result<()> {
    let r = 4;
    let k = find_dirichlet_k(r, 2, 50)?.expect("some k qualifies below 50");
    let (m, counts) = biased_plan(r, k)?;
    println!("k = {k} flips, outputs of up to {m} symbols");
    for (tails, n) in counts.iter().enumerate() {
        println!("  {n} codewords from blocks with {tails} tails");
    }

    let st = epoch_stats(&biased_to_uniform(r, k)?);
    println!("efficiency {:.6}", st.efficiency_bits);
    println!(
        "symbols per flip {:.6}, bound {:.6}",
        conserve::ratio_to_f64(&st.ratio()),
        biased_bound(r)
    );
    Ok(())
}
