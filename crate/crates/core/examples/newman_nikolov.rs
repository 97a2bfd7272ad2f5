//! The system ([3]^d, A_P): materialize it and compare streamed edge sums.

use permdisc::digits::{ColoringTree, DigitString, Permutation};
use permdisc::nn::{edge_sum, materialize, PermSet};
use permdisc::seed;

fn main() -> permdisc::Result<()> {
    let d = 3;
    let perms = "cyclic".parse::<PermSet>()?.permutations(3)?;
    let sys = materialize(&perms, 3, d, true)?;
    println!("A_C+ on [3]^{d}: {} sets", sys.len());

    let tree = ColoringTree::random(3, d, &mut seed::rng(5))?;
    let chi: Vec<i8> = tree.leaves().iter().map(|&x| x as i8).collect();
    let (disc, idx) = sys.coloring_disc(&chi)?;
    println!("disc of a random coloring: {disc} at {}", idx.and_then(|i| sys.label(i)).unwrap_or("-"));

    let a = DigitString::parse(3, "312")?;
    for sigma in Permutation::all(3) {
        println!("χ(E_{{{sigma},{a}}}) = {}", edge_sum(&tree, &sigma, &a)?);
    }
    Ok(())
}
