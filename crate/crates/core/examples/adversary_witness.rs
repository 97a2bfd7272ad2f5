//! The minimizer/maximizer game and witnesses for disc(A_S3) and disc(A_C+).

use permdisc::adversary::{cyclic_bound, cyclic_witness, run_game, witness, witness_bound, Maximizer, Minimizer};
use permdisc::digits::ColoringTree;
use permdisc::game::seminorm;
use permdisc::seed;

fn main() -> permdisc::Result<()> {
    let tr = run_game(&Minimizer::Random { max_abs: 5 }, &Maximizer::TwoEntry, 3, 4, 1)?;
    print!("{}", tr.dump());
    println!("seminorm {}", seminorm(&tr.final_matrix)?.0);

    let d = 10;
    let tree = ColoringTree::random(3, d, &mut seed::rng(7))?;
    let w = witness(&tree)?;
    println!("σ={} a={} value={} bound={:.3}", w.sigma, w.a, w.value, witness_bound(d));
    let c = cyclic_witness(&tree)?;
    println!("cyclic witness value {} (bound {})", c.value(), cyclic_bound(d));
    Ok(())
}
