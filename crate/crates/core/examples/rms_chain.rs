//! Exact disc2 over A_S3 and the per-coloring chain report.

use permdisc::digits::{ColoringTree, Permutation};
use permdisc::rms::{chain_report, disc2_exact, local_search_disc2, martingale_profile};
use permdisc::seed;

fn main() -> permdisc::Result<()> {
    let s3 = Permutation::all(3);
    let d = 6;
    let start = ColoringTree::random(3, d, &mut seed::rng(3))?;
    let tree = local_search_disc2(&start, &s3, 20, 4)?;
    println!("disc2: random {:.3}, optimized {:.3}", disc2_exact(&start, &s3)?.value(), disc2_exact(&tree, &s3)?.value());

    let m = martingale_profile(&tree)?;
    println!("E[Y_d²] = {}, drift zero: {}", m.ey2[d], m.drift_check);
    print!("{}", chain_report(&tree)?.to_csv());
    Ok(())
}
