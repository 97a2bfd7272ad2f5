//! Exhaustive disc and disc2 of small systems.

use permdisc::digits::Permutation;
use permdisc::nn::materialize;
use permdisc::oracle::{exact_disc, exact_disc2};

fn main() -> permdisc::Result<()> {
    for d in 1..=2 {
        let sys = materialize(&Permutation::all(3), 3, d, false)?;
        let (disc, chi) = exact_disc(&sys)?;
        let (ms, _) = exact_disc2(&sys)?;
        println!("A_S3, d={d}: disc = {disc} via {chi:?}, disc2 = {:.4}", ms.value());
    }
    Ok(())
}
