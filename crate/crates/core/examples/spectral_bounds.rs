//! kgl, detlb2 and detlb on a 3-permutation family, plus the Weyl union check.

use permdisc::setsystem::{chain_family, multiset_sum};
use permdisc::spectral::{detlb2_search, detlb_search, kgl, weyl_union_check};

fn main() -> permdisc::Result<()> {
    let parts = [
        chain_family(&[1, 2, 3, 4, 5, 6, 7, 8])?,
        chain_family(&[8, 6, 4, 2, 7, 5, 3, 1])?,
        chain_family(&[2, 7, 1, 8, 3, 6, 4, 5])?,
    ];
    let sys = multiset_sum(&parts)?;
    let rep = kgl(&sys)?;
    println!("λ = {:.3?}", rep.eigenvalues);
    println!("kgl = {:.5} at l = {}", rep.kgl_value, rep.argmax_l);
    let d2 = detlb2_search(&sys, 8, 0)?;
    println!("detlb2 ≥ {:.5} with Γ = {:?}", d2.value, d2.gamma);
    let d1 = detlb_search(&sys, 8, 0)?;
    println!("detlb ≥ {:.5} (k = {})", d1.value, d1.k);
    println!("Weyl max violation {:.2e}", weyl_union_check(&parts)?.max_violation);
    Ok(())
}
