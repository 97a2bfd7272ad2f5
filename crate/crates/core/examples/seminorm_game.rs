//! Prefix matrices, the seminorm and its moment bounds.

use permdisc::digits::{ColoringTree, DigitString};
use permdisc::game::{frobenius_bound, moment_identity, prefix_matrix, seminorm, variance_bound, GameMatrix};
use permdisc::seed;

fn main() -> permdisc::Result<()> {
    let tree = ColoringTree::random(3, 6, &mut seed::rng(11))?;
    let a = DigitString::parse(3, "121321")?;
    let m = prefix_matrix(&tree, &a)?;
    println!("M_χ({a}) =\n{m}");
    let (norm, sigma) = seminorm(&m)?;
    let mom = moment_identity(&m)?;
    println!("‖M‖ = {norm} at σ = {sigma}");
    println!("E[σ·M] = {}, E[(σ·M)²] = {:.3}", mom.mean(), mom.second_moment());
    println!("variance bound {:.3}, frobenius form {:.3}", variance_bound(&m), frobenius_bound(&m));

    let cycle = GameMatrix::from_rows(&[vec![0, 1, -1], vec![-1, 0, 1], vec![1, -1, 0]])?;
    println!("3-cycle: ‖M‖ = {}, frobenius form {:.3}", seminorm(&cycle)?.0, frobenius_bound(&cycle));
    Ok(())
}
