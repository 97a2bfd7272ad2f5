//! k-permutation families: chains, multiset sums, colorings and restriction.

use permdisc::setsystem::{chain_family, multiset_sum};

fn main() -> permdisc::Result<()> {
    let a = chain_family(&[3, 1, 4, 2, 5])?;
    let b = chain_family(&[5, 4, 3, 2, 1])?;
    let sys = multiset_sum(&[a, b])?;
    println!("{} sets on [{}], {} incidences", sys.len(), sys.ground_size(), sys.incidences());

    let chi = [1, -1, 1, -1, 1];
    let (disc, worst) = sys.coloring_disc(&chi)?;
    let ms = sys.coloring_disc2(&chi)?;
    println!("disc = {disc} (set {worst:?}), disc2 = {:.4}", ms.value());

    let sub = sys.restrict(&[1, 3, 5])?;
    print!("{}", sub.to_file_string());
    Ok(())
}
