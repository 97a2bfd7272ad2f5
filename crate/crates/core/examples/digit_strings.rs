//! Digit strings, the digitwise action and the induced coloring tree.

use permdisc::digits::{act_digitwise, lex_less_under, ColoringTree, DigitString, Permutation};

fn main() -> permdisc::Result<()> {
    let a = DigitString::parse(3, "213")?;
    let sigma = Permutation::parse("231")?;
    println!("a = {a}, rank {}", a.rank());
    println!("{sigma}·a = {}", act_digitwise(&sigma, &a)?);

    let b = DigitString::parse(3, "132")?;
    println!("{b} <_σ {a}: {}", lex_less_under(&sigma, &b, &a)?);

    let tree = ColoringTree::from_leaves(3, 2, vec![1, -1, 1, 1, 1, -1, -1, -1, 1])?;
    for k in 0..=tree.depth() {
        println!("level {k}: {:?}", tree.level(k));
    }
    println!("χ(2) = {}", tree.value(&DigitString::parse(3, "2")?)?);
    Ok(())
}
