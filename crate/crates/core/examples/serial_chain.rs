//! Run one iteration of each protocol in a sequence of growing block
//! lengths and watch the efficiency approach one.

use conserve::combinators::{check_growth_condition, serial_partial_efficiency};
use conserve::ratio_string;
use conserve::reductions::uniform_to_uniform_chain;

fn main() -> conserve::Result<()> {
    let chain = uniform_to_uniform_chain(3, 2, 1, None)?;
    for n in [1, 10, 100, 1000] {
        let e = serial_partial_efficiency(&chain, n)?;
        println!("{n:5} components: {:.6}", e.bits);
    }
    let growth = check_growth_condition(&chain, 100)?;
    println!(
        "longest block over inputs so far, at 100: {}",
        ratio_string(growth.last().unwrap())
    );
    Ok(())
}
