//! The Newman–Nikolov systems `([r]^d, A_P)` and `A_P⁺`.
//!
//! `E_{σ,a} = { b : σ·b < σ·a }` for `σ ∈ P` and `a ∈ [r]^d`. Vertices are
//! numbered by 1 + the lexicographic rank of the string.

use std::fmt;
use std::str::FromStr;

use crate::digits::{leaf_count, ColoringTree, DigitString, Permutation};
use crate::setsystem::SetSystem;
use crate::{Error, Result};

/// Default cap on `r^d` for [`materialize`].
pub const MATERIALIZE_LIMIT: usize = 59_049; // 3^10

/// A permutation-set specifier: `cyclic`, `symmetric`, or `list:231;312;…`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PermSet {
    Cyclic,
    Symmetric,
    List(Vec<Permutation>),
}

impl PermSet {
    pub fn permutations(&self, r: u8) -> Result<Vec<Permutation>> {
        match self {
            PermSet::Cyclic => Ok(Permutation::cyclic(r)),
            PermSet::Symmetric => {
                if r > 10 {
                    return Err(Error::LimitExceeded { what: format!("S_{r}"), limit: 10 });
                }
                Ok(Permutation::all(r))
            }
            PermSet::List(ps) => {
                if let Some(p) = ps.iter().find(|p| p.degree() != r) {
                    return Err(Error::RadixMismatch { left: p.degree(), right: r });
                }
                Ok(ps.clone())
            }
        }
    }
}

impl FromStr for PermSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cyclic" => Ok(PermSet::Cyclic),
            "symmetric" => Ok(PermSet::Symmetric),
            _ => {
                let Some(list) = s.strip_prefix("list:") else {
                    return Err(Error::InvalidArgument(format!(
                        "unknown permutation set {s:?} (expected cyclic, symmetric or list:...)"
                    )));
                };
                let perms = list
                    .split(';')
                    .filter(|t| !t.is_empty())
                    .map(Permutation::parse)
                    .collect::<Result<Vec<_>>>()?;
                if perms.is_empty() {
                    return Err(Error::InvalidArgument("empty permutation list".into()));
                }
                Ok(PermSet::List(perms))
            }
        }
    }
}

impl fmt::Display for PermSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PermSet::Cyclic => f.write_str("cyclic"),
            PermSet::Symmetric => f.write_str("symmetric"),
            PermSet::List(ps) => {
                f.write_str("list:")?;
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

/// `b ∈ E_{σ,a}`.
pub fn edge_membership(sigma: &Permutation, a: &DigitString, b: &DigitString) -> Result<bool> {
    crate::digits::lex_less_under(sigma, b, a)
}

/// Materialize `A_P` (and the full set when `plus`) as an explicit system,
/// with sets ordered by `σ` in `perms` order, then `a` in lexicographic order.
pub fn materialize(perms: &[Permutation], r: u8, d: usize, plus: bool) -> Result<SetSystem> {
    materialize_with_limit(perms, r, d, plus, MATERIALIZE_LIMIT)
}

pub fn materialize_with_limit(perms: &[Permutation], r: u8, d: usize, plus: bool, limit: usize) -> Result<SetSystem> {
    let n = leaf_count(r, d).ok().filter(|&n| n <= limit).ok_or_else(|| Error::LimitExceeded {
        what: format!("r^d = {r}^{d}"),
        limit: limit as u64,
    })?;
    if let Some(p) = perms.iter().find(|p| p.degree() != r) {
        return Err(Error::RadixMismatch { left: p.degree(), right: r });
    }
    let mut sys = SetSystem::new(n);
    let mut by_key = vec![0u32; n];
    let mut members: Vec<u32> = Vec::with_capacity(n);
    for sigma in perms {
        // by_key[k] = vertex whose image under σ has rank k
        for v in 0..n {
            by_key[sigma.act_rank(d, v)] = v as u32;
        }
        for a in 0..n {
            let key = sigma.act_rank(d, a);
            members.clear();
            members.extend_from_slice(&by_key[..key]);
            members.sort_unstable();
            let label = format!("sigma={sigma} a={}", DigitString::from_rank(r, d, a));
            sys.push_sorted(&members, Some(label));
        }
    }
    if plus {
        let all: Vec<u32> = (0..n as u32).collect();
        sys.push_sorted(&all, Some("full".into()));
    }
    Ok(sys)
}

fn check_tree(tree: &ColoringTree, sigma: &Permutation, a: &DigitString) -> Result<()> {
    if sigma.degree() != tree.radix() {
        return Err(Error::RadixMismatch { left: sigma.degree(), right: tree.radix() });
    }
    if a.radix() != tree.radix() {
        return Err(Error::RadixMismatch { left: a.radix(), right: tree.radix() });
    }
    if a.len() != tree.depth() {
        return Err(Error::LengthMismatch { expected: tree.depth(), got: a.len() });
    }
    Ok(())
}

/// `χ(E_{σ,a})` in `O(d·r)` by peeling one level at a time:
/// `χ(E_{σ,a}) = χ(E_{σ,a[d−1]}) + Σ_{σ(j) < σ(a_d)} χ(a[d−1] j)`.
pub fn edge_sum(tree: &ColoringTree, sigma: &Permutation, a: &DigitString) -> Result<i64> {
    check_tree(tree, sigma, a)?;
    let r = tree.radix() as usize;
    let mut total = 0i64;
    let mut rank = 0usize;
    for (k, &digit) in a.digits().iter().enumerate() {
        let pivot = sigma.apply(digit);
        let children = tree.children(k, rank);
        for (j, &chi) in children.iter().enumerate() {
            if sigma.apply(j as u8 + 1) < pivot {
                total += chi;
            }
        }
        rank = rank * r + (digit as usize - 1);
    }
    Ok(total)
}

/// `χ(E_{σ,a})` by enumerating all of `[r]^d`. Reference path for
/// [`edge_sum`].
pub fn edge_sum_enumerated(tree: &ColoringTree, sigma: &Permutation, a: &DigitString) -> Result<i64> {
    check_tree(tree, sigma, a)?;
    let (r, d) = (tree.radix(), tree.depth());
    let mut total = 0;
    for (v, &chi) in tree.leaves().iter().enumerate() {
        let b = DigitString::from_rank(r, d, v);
        if edge_membership(sigma, a, &b)? {
            total += chi;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    fn s(x: &str) -> DigitString {
        DigitString::parse(3, x).unwrap()
    }

    #[test]
    fn membership_examples() {
        let e = Permutation::identity(3);
        assert!(edge_membership(&e, &s("2"), &s("1")).unwrap());
        let a = s("2132");
        for sigma in Permutation::all(3) {
            assert!(!edge_membership(&sigma, &a, &a).unwrap());
        }
        assert!(edge_membership(&Permutation::reversal(3), &s("1"), &s("3")).unwrap());
        assert!(edge_membership(&e, &s("1"), &s("12")).is_err());
    }

    #[test]
    fn perm_set_specifiers() {
        assert_eq!("cyclic".parse::<PermSet>().unwrap(), PermSet::Cyclic);
        assert_eq!("symmetric".parse::<PermSet>().unwrap(), PermSet::Symmetric);
        let l: PermSet = "list:231;312".parse().unwrap();
        assert_eq!(l.to_string(), "list:231;312");
        assert_eq!(l.permutations(3).unwrap().len(), 2);
        assert!(l.permutations(4).is_err());
        assert!("cyclik".parse::<PermSet>().is_err());
        assert!("list:".parse::<PermSet>().is_err());
        assert!("list:22".parse::<PermSet>().is_err());
        assert_eq!(PermSet::Symmetric.permutations(3).unwrap().len(), 6);
    }

    #[test]
    fn materialize_examples() {
        let e = vec![Permutation::identity(3)];
        let sys = materialize(&e, 3, 1, false).unwrap();
        let sets: Vec<_> = (0..sys.len()).map(|i| sys.set(i)).collect();
        assert_eq!(sets, vec![vec![], vec![1], vec![1, 2]]);
        assert_eq!(sys.label(2), Some("sigma=123 a=3"));

        let sym = materialize(&Permutation::all(3), 3, 1, false).unwrap();
        assert_eq!(sym.len(), 18);
        let mut sets: Vec<_> = (0..sym.len()).map(|i| sym.set(i)).collect();
        sets.sort();
        let mut expected = vec![vec![]; 6];
        for x in [vec![1], vec![2], vec![3], vec![1, 2], vec![1, 3], vec![2, 3]] {
            expected.push(x.clone());
            expected.push(x);
        }
        expected.sort();
        assert_eq!(sets, expected);

        let cplus = materialize(&Permutation::cyclic(3), 3, 1, true).unwrap();
        assert_eq!(cplus.len(), 10);
        assert_eq!(cplus.set(9), vec![1, 2, 3]);

        assert!(matches!(
            materialize_with_limit(&e, 3, 3, false, 26),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn edge_sum_examples() {
        let ones = ColoringTree::from_leaves(3, 1, vec![1, 1, 1]).unwrap();
        assert_eq!(edge_sum(&ones, &Permutation::identity(3), &s("3")).unwrap(), 2);

        let mut rng = seed::rng(11);
        let t = ColoringTree::random(3, 4, &mut rng).unwrap();
        for sigma in Permutation::all(3) {
            let lowest = sigma.inverse().apply(1);
            let a = DigitString::constant(3, lowest, 4).unwrap();
            assert_eq!(edge_sum(&t, &sigma, &a).unwrap(), 0);
        }
        assert!(edge_sum(&t, &Permutation::identity(3), &s("12")).is_err());
    }

    #[test]
    fn edge_sum_matches_enumeration() {
        for d in 0..=4 {
            for trial in 0..25 {
                let mut rng = seed::rng(seed::derive_seed(5, seed::grid_index(d, trial)));
                let t = ColoringTree::random(3, d, &mut rng).unwrap();
                for sigma in Permutation::all(3) {
                    for v in 0..3usize.pow(d as u32) {
                        let a = DigitString::from_rank(3, d, v);
                        assert_eq!(edge_sum(&t, &sigma, &a).unwrap(), edge_sum_enumerated(&t, &sigma, &a).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn reversal_complement_identity() {
        let tau = Permutation::reversal(3);
        for d in 0..=6 {
            let mut rng = seed::rng(100 + d as u64);
            let t = ColoringTree::random(3, d, &mut rng).unwrap();
            for sigma in Permutation::all(3) {
                let flipped = tau.compose(&sigma).unwrap();
                for v in 0..3usize.pow(d as u32) {
                    let a = DigitString::from_rank(3, d, v);
                    let lhs = edge_sum(&t, &sigma, &a).unwrap() + edge_sum(&t, &flipped, &a).unwrap() + t.leaves()[v];
                    assert_eq!(lhs, t.root());
                }
            }
        }
    }

    #[test]
    fn materialized_disc_matches_streaming_edge_sums() {
        let perms = Permutation::all(3);
        for d in 1..=4 {
            let sys = materialize(&perms, 3, d, false).unwrap();
            let mut rng = seed::rng(d as u64);
            let t = ColoringTree::random(3, d, &mut rng).unwrap();
            let chi: Vec<i8> = t.leaves().iter().map(|&x| x as i8).collect();
            let (disc, _) = sys.coloring_disc(&chi).unwrap();
            let mut best = 0;
            for sigma in &perms {
                for v in 0..3usize.pow(d as u32) {
                    let a = DigitString::from_rank(3, d, v);
                    best = best.max(edge_sum(&t, sigma, &a).unwrap().abs());
                }
            }
            assert_eq!(disc, best);
        }
    }
}
