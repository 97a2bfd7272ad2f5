//! Spectral and determinant lower bounds computed from the incidence matrix
//! `A` (sets are rows, so the Gram matrix `AᵀA` lives on vertices).
//!
//! * `kgl = max_l (l/e)·√(λ_l / (8π·n·m))` over the eigenvalues of `AᵀA`
//! * `detlb₂` candidates `√(m·|Γ| / (8πe)) · det(G[Γ,Γ])^{1/(2|Γ|)}`
//! * `detlb` candidates `|det B|^{1/k}` over `k × k` submatrices `B`
//!
//! The searches return certified values for the subsets they visit, which
//! are lower bounds on the true maxima; they are exact at enumeration scale.

use std::cmp::Ordering;
use std::f64::consts::{E, PI};

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::seed;
use crate::setsystem::SetSystem;
use crate::{Error, Result};

/// Below this a Gram determinant counts as zero.
pub const SINGULAR_TOL: f64 = 1e-12;
/// `detlb2_search` enumerates every `Γ` up to this many vertices.
pub const DETLB2_EXACT_LIMIT: usize = 15;
/// `detlb_search` enumerates every square submatrix when `m, n ≤` this.
pub const DETLB_EXACT_LIMIT: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralReport {
    /// `λ_1 ≥ … ≥ λ_{min(n,m)}` of `AᵀA`.
    pub eigenvalues: Vec<f64>,
    pub kgl_value: f64,
    /// 1-based `l` attaining `kgl_value`.
    pub argmax_l: usize,
    /// Total number of (set, element) incidences, `tr(AᵀA)`.
    pub incidences: u64,
    pub provenance: String,
}

impl SpectralReport {
    /// `|Σλ − tr(AᵀA)| / max(1, tr(AᵀA))`. Eigenvalues beyond `min(n, m)`
    /// vanish, so the truncated list carries the whole trace.
    pub fn trace_gap(&self) -> f64 {
        let sum: f64 = self.eigenvalues.iter().sum();
        (sum - self.incidences as f64).abs() / (self.incidences as f64).max(1.0)
    }
}

fn gram_f64(sys: &SetSystem) -> DMatrix<f64> {
    sys.gram().map(|x| x as f64)
}

/// All `n` eigenvalues of a symmetric matrix, descending.
fn eigenvalues_desc(g: DMatrix<f64>) -> Vec<f64> {
    if g.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(g).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Eigenvalues of `AᵀA`, all `n` of them, descending.
pub fn gram_eigenvalues(sys: &SetSystem) -> Vec<f64> {
    eigenvalues_desc(gram_f64(sys))
}

pub fn kgl(sys: &SetSystem) -> Result<SpectralReport> {
    let (n, m) = (sys.ground_size(), sys.len());
    if n == 0 || m == 0 {
        return Err(Error::EmptySystem);
    }
    let mut eigenvalues = gram_eigenvalues(sys);
    eigenvalues.truncate(n.min(m));
    let scale = 8.0 * PI * n as f64 * m as f64;
    let (mut kgl_value, mut argmax_l) = (f64::NEG_INFINITY, 1);
    for (i, &lambda) in eigenvalues.iter().enumerate() {
        let l = i + 1;
        let v = l as f64 / E * (lambda.max(0.0) / scale).sqrt();
        if v > kgl_value {
            (kgl_value, argmax_l) = (v, l);
        }
    }
    Ok(SpectralReport {
        eigenvalues,
        kgl_value,
        argmax_l,
        incidences: sys.incidences() as u64,
        provenance: format!("kgl: symmetric eigensolver on AᵀA, n={n} m={m}"),
    })
}

fn check_gamma(n: usize, gamma: &[usize]) -> Result<()> {
    if gamma.is_empty() {
        return Err(Error::InvalidArgument("Γ must be nonempty".into()));
    }
    let mut seen = vec![false; n];
    for &v in gamma {
        if v == 0 || v > n {
            return Err(Error::InvalidArgument(format!("vertex {v} outside [1, {n}]")));
        }
        if std::mem::replace(&mut seen[v - 1], true) {
            return Err(Error::InvalidArgument(format!("vertex {v} repeated in Γ")));
        }
    }
    Ok(())
}

/// `det(G[Γ,Γ])` by LU with partial pivoting, `Γ` 0-based.
fn sub_det(g: &DMatrix<f64>, idx: &[usize]) -> f64 {
    let k = idx.len();
    let sub = DMatrix::from_fn(k, k, |i, j| g[(idx[i], idx[j])]);
    let det = sub.lu().determinant();
    if det < SINGULAR_TOL {
        0.0
    } else {
        det
    }
}

fn detlb2_value(g: &DMatrix<f64>, m: usize, idx: &[usize]) -> f64 {
    let det = sub_det(g, idx);
    let k = idx.len() as f64;
    (m as f64 * k / (8.0 * PI * E)).sqrt() * det.powf(1.0 / (2.0 * k))
}

/// The `detlb₂` expression for one `Γ` (1-based). `m` is the size of the
/// whole family.
pub fn detlb2_on_subset(sys: &SetSystem, gamma: &[usize]) -> Result<f64> {
    check_gamma(sys.ground_size(), gamma)?;
    let idx: Vec<usize> = gamma.iter().map(|v| v - 1).collect();
    Ok(detlb2_value(&gram_f64(sys), sys.len(), &idx))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Detlb2Result {
    pub value: f64,
    /// 1-based, increasing.
    pub gamma: Vec<usize>,
    pub exact: bool,
    pub budget: usize,
    pub seed: u64,
}

/// Larger value first, then the earlier candidate.
fn better(a: (f64, usize), b: (f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(b.1.cmp(&a.1))
}

/// Best `Γ` for `detlb₂`: every nonempty subset when `n ≤ 15`, otherwise
/// `budget` seeded restarts of greedy single-vertex add/remove. Restart `i`
/// depends only on `(seed, i)`, so raising the budget never lowers the result.
pub fn detlb2_search(sys: &SetSystem, budget: usize, seed: u64) -> Result<Detlb2Result> {
    let n = sys.ground_size();
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    if n == 0 {
        return Err(Error::EmptySystem);
    }
    let g = gram_f64(sys);
    let m = sys.len();
    if n <= DETLB2_EXACT_LIMIT {
        let (value, mask) = (1u32..1 << n)
            .into_par_iter()
            .map(|mask| {
                let idx: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
                (detlb2_value(&g, m, &idx), mask as usize)
            })
            .max_by(|&a, &b| better(a, b))
            .expect("n >= 1");
        let gamma = (0..n).filter(|v| mask >> v & 1 == 1).map(|v| v + 1).collect();
        return Ok(Detlb2Result { value, gamma, exact: true, budget, seed });
    }
    let (value, _, members) = (0..budget)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed::rng(seed::derive_seed(seed, i as u64));
            let (value, members) = greedy_gamma(&g, m, &mut rng);
            (value, i, members)
        })
        .max_by(|a, b| better((a.0, a.1), (b.0, b.1)))
        .expect("budget >= 1");
    let gamma = (0..n).filter(|&v| members[v]).map(|v| v + 1).collect();
    Ok(Detlb2Result { value, gamma, exact: false, budget, seed })
}

fn greedy_gamma(g: &DMatrix<f64>, m: usize, rng: &mut impl Rng) -> (f64, Vec<bool>) {
    let n = g.nrows();
    let mut members: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    if !members.iter().any(|&b| b) {
        members[rng.gen_range(0..n)] = true;
    }
    let eval = |members: &[bool]| {
        let idx: Vec<usize> = (0..n).filter(|&v| members[v]).collect();
        if idx.is_empty() {
            f64::NEG_INFINITY
        } else {
            detlb2_value(g, m, &idx)
        }
    };
    let mut value = eval(&members);
    for _ in 0..4 * n {
        let mut best = (value, None);
        for v in 0..n {
            members[v] = !members[v];
            let cand = eval(&members);
            members[v] = !members[v];
            if cand > best.0 {
                best = (cand, Some(v));
            }
        }
        match best.1 {
            Some(v) => {
                members[v] = !members[v];
                value = best.0;
            }
            None => break,
        }
    }
    (value, members)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetlbResult {
    /// `|det B|^{1/k}`.
    pub value: f64,
    pub k: usize,
    /// 1-based set indices (rows of `A`).
    pub rows: Vec<usize>,
    /// 1-based vertices (columns of `A`).
    pub cols: Vec<usize>,
    pub exact: bool,
    pub budget: usize,
    pub seed: u64,
}

/// Fraction-free Gaussian elimination.
fn bareiss(mut a: Vec<Vec<i128>>) -> i128 {
    let k = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for p in 0..k {
        if a[p][p] == 0 {
            match (p + 1..k).find(|&i| a[i][p] != 0) {
                Some(i) => {
                    a.swap(p, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in p + 1..k {
            for j in p + 1..k {
                a[i][j] = (a[i][j] * a[p][p] - a[i][p] * a[p][j]) / prev;
            }
        }
        prev = a[p][p];
    }
    if k == 0 {
        1
    } else {
        sign * a[k - 1][k - 1]
    }
}

/// `det^{1/k}` compared exactly: `a^{1/j}` against `b^{1/k}` via `a^k` vs `b^j`.
fn cmp_root(a: u128, j: usize, b: u128, k: usize) -> Ordering {
    num_traits::pow(BigInt::from(a), k).cmp(&num_traits::pow(BigInt::from(b), j))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Best `|det B|^{1/k}` over square submatrices of the incidence matrix.
/// Exhaustive over every `k` when `m, n ≤ 10`; otherwise `budget` seeded
/// restarts of row/column swap local search.
pub fn detlb_search(sys: &SetSystem, budget: usize, seed: u64) -> Result<DetlbResult> {
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    let (m, n) = (sys.len(), sys.ground_size());
    let a = sys.incidence_matrix();
    if m == 0 || n == 0 {
        return Ok(DetlbResult { value: 0.0, k: 0, rows: vec![], cols: vec![], exact: true, budget, seed });
    }
    if m <= DETLB_EXACT_LIMIT && n <= DETLB_EXACT_LIMIT {
        let mut best = (0u128, 1usize, vec![0usize], vec![0usize]);
        for k in 1..=m.min(n) {
            let row_sets = subsets(m, k);
            let col_sets = subsets(n, k);
            let found = row_sets
                .par_iter()
                .enumerate()
                .filter_map(|(ri, rows)| {
                    let mut top: Option<(u128, usize, usize)> = None;
                    for (ci, cols) in col_sets.iter().enumerate() {
                        let b = rows.iter().map(|&i| cols.iter().map(|&j| a[(i, j)] as i128).collect()).collect();
                        let det = bareiss(b).unsigned_abs();
                        if top.is_none_or(|t| det > t.0) {
                            top = Some((det, ri, ci));
                        }
                    }
                    top
                })
                .max_by(|x, y| x.0.cmp(&y.0).then((y.1, y.2).cmp(&(x.1, x.2))))
                .expect("nonempty");
            if cmp_root(found.0, best.1, best.0, k) == Ordering::Greater {
                best = (found.0, k, row_sets[found.1].clone(), col_sets[found.2].clone());
            }
        }
        let (det, k, rows, cols) = best;
        return Ok(DetlbResult {
            value: (det as f64).powf(1.0 / k as f64),
            k,
            rows: rows.iter().map(|i| i + 1).collect(),
            cols: cols.iter().map(|j| j + 1).collect(),
            exact: true,
            budget,
            seed,
        });
    }
    let af = a.map(|x| x as f64);
    let (value, _, k, rows, cols) = (0..budget)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed::rng(seed::derive_seed(seed, i as u64));
            let (value, rows, cols) = swap_search(&af, &mut rng);
            (value, i, rows.len(), rows, cols)
        })
        .max_by(|x, y| better((x.0, x.1), (y.0, y.1)))
        .expect("budget >= 1");
    let mut rows: Vec<usize> = rows.iter().map(|i| i + 1).collect();
    let mut cols: Vec<usize> = cols.iter().map(|j| j + 1).collect();
    rows.sort_unstable();
    cols.sort_unstable();
    Ok(DetlbResult { value, k, rows, cols, exact: false, budget, seed })
}

fn root_det(a: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> f64 {
    let k = rows.len();
    let b = DMatrix::from_fn(k, k, |i, j| a[(rows[i], cols[j])]);
    b.lu().determinant().abs().powf(1.0 / k as f64)
}

fn swap_search(a: &DMatrix<f64>, rng: &mut impl Rng) -> (f64, Vec<usize>, Vec<usize>) {
    let (m, n) = a.shape();
    let k = rng.gen_range(1..=m.min(n));
    let mut all_rows: Vec<usize> = (0..m).collect();
    let mut all_cols: Vec<usize> = (0..n).collect();
    all_rows.shuffle(rng);
    all_cols.shuffle(rng);
    let mut rows = all_rows[..k].to_vec();
    let mut cols = all_cols[..k].to_vec();
    let mut value = root_det(a, &rows, &cols);
    let mut improved = true;
    let mut sweeps = 0;
    while improved && sweeps < 50 {
        improved = false;
        sweeps += 1;
        for slot in 0..k {
            for r in 0..m {
                if rows.contains(&r) {
                    continue;
                }
                let old = std::mem::replace(&mut rows[slot], r);
                let v = root_det(a, &rows, &cols);
                if v > value + 1e-12 {
                    value = v;
                    improved = true;
                } else {
                    rows[slot] = old;
                }
            }
            for c in 0..n {
                if cols.contains(&c) {
                    continue;
                }
                let old = std::mem::replace(&mut cols[slot], c);
                let v = root_det(a, &rows, &cols);
                if v > value + 1e-12 {
                    value = v;
                    improved = true;
                } else {
                    cols[slot] = old;
                }
            }
        }
    }
    (value, rows, cols)
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeylReport {
    /// `λ_l(AᵀA)` of the stacked system.
    pub union_eigenvalues: Vec<f64>,
    /// `Σ_i λ_{⌈l/k⌉}(A_iᵀA_i)`.
    pub bounds: Vec<f64>,
    /// `max_l (λ_l − bound_l) / max(1, bound_l)`, clamped at 0.
    pub max_violation: f64,
    /// 1-based `l` of the largest violation, if any.
    pub worst_l: Option<usize>,
}

impl WeylReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_violation <= tol
    }
}

/// Check `λ_l(Σ G_i) ≤ Σ_i λ_{⌈l/k⌉}(G_i)` for `G_i = A_iᵀA_i` and all `l ≤ n`.
pub fn weyl_union_check(systems: &[SetSystem]) -> Result<WeylReport> {
    let first = systems.first().ok_or(Error::EmptySystem)?;
    let n = first.ground_size();
    if let Some(s) = systems.iter().find(|s| s.ground_size() != n) {
        return Err(Error::LengthMismatch { expected: n, got: s.ground_size() });
    }
    let k = systems.len();
    let parts: Vec<Vec<f64>> = systems.iter().map(gram_eigenvalues).collect();
    let stacked = systems.iter().map(gram_f64).fold(DMatrix::zeros(n, n), |acc, g| acc + g);
    let union_eigenvalues = eigenvalues_desc(stacked);
    let bounds: Vec<f64> = (1..=n).map(|l| parts.iter().map(|ev| ev[l.div_ceil(k) - 1]).sum()).collect();
    let mut max_violation = 0.0;
    let mut worst_l = None;
    for (i, (&lam, &b)) in union_eigenvalues.iter().zip(&bounds).enumerate() {
        let v = (lam - b) / b.abs().max(1.0);
        if v > max_violation {
            max_violation = v;
            worst_l = Some(i + 1);
        }
    }
    Ok(WeylReport { union_eigenvalues, bounds, max_violation, worst_l })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setsystem::chain_family;

    fn identity(n: usize) -> SetSystem {
        SetSystem::from_sets(n, (1..=n).map(|i| vec![i])).unwrap()
    }

    fn random_chain(n: usize, rng: &mut impl Rng) -> SetSystem {
        let mut p: Vec<usize> = (1..=n).collect();
        p.shuffle(rng);
        chain_family(&p).unwrap()
    }

    #[test]
    fn kgl_examples() {
        let rep = kgl(&identity(6)).unwrap();
        assert!((rep.kgl_value - 1.0 / (E * (8.0 * PI).sqrt())).abs() < 1e-12);
        assert_eq!(rep.argmax_l, 6);
        assert!(rep.trace_gap() < 1e-9);

        let empty_set = SetSystem::from_sets(1, [Vec::<usize>::new()]).unwrap();
        let rep = kgl(&empty_set).unwrap();
        assert_eq!((rep.eigenvalues.clone(), rep.kgl_value), (vec![0.0], 0.0));

        assert!(matches!(kgl(&SetSystem::new(3)), Err(Error::EmptySystem)));
    }

    #[test]
    fn chain_eigenvalues_match_characteristic_polynomial() {
        // G = [[3,2,1],[2,2,1],[1,1,1]]: λ³ − 6λ² + 5λ − 1
        let sys = chain_family(&[1, 2, 3]).unwrap();
        let rep = kgl(&sys).unwrap();
        assert_eq!(rep.eigenvalues.len(), 3);
        for &l in &rep.eigenvalues {
            assert!((l.powi(3) - 6.0 * l * l + 5.0 * l - 1.0).abs() < 1e-10);
        }
        assert!((rep.eigenvalues.iter().sum::<f64>() - 6.0).abs() < 1e-10);
        assert!((rep.eigenvalues.iter().product::<f64>() - 1.0).abs() < 1e-10);
        assert!(rep.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        let expect = (1..=3)
            .map(|l| l as f64 / E * (rep.eigenvalues[l - 1] / (8.0 * PI * 12.0)).sqrt())
            .fold(f64::MIN, f64::max);
        assert!((rep.kgl_value - expect).abs() < 1e-15);
    }

    #[test]
    fn trace_identity_on_random_chains() {
        let mut rng = seed::rng(4);
        for n in 1..=12 {
            let sys = crate::setsystem::multiset_sum(&[random_chain(n, &mut rng), random_chain(n, &mut rng)]).unwrap();
            let rep = kgl(&sys).unwrap();
            assert!(rep.trace_gap() < 1e-9);
            assert!(rep.eigenvalues.iter().all(|&l| l > -1e-9));
            assert!(rep.kgl_value > 0.0);
        }
    }

    #[test]
    fn detlb2_examples() {
        let id = identity(5);
        let v = detlb2_on_subset(&id, &[1, 2, 3, 4, 5]).unwrap();
        assert!((v - 5.0 / (8.0 * PI * E).sqrt()).abs() < 1e-12);

        let sys = SetSystem::from_sets(3, [vec![1], vec![1, 2]]).unwrap();
        assert_eq!(detlb2_on_subset(&sys, &[2, 3]).unwrap(), 0.0);

        let chain = chain_family(&[1, 2, 3]).unwrap();
        let v = detlb2_on_subset(&chain, &[1]).unwrap();
        assert!((v - (4.0 / (8.0 * PI * E)).sqrt() * 3f64.sqrt()).abs() < 1e-12);

        assert!(detlb2_on_subset(&chain, &[]).is_err());
        assert!(detlb2_on_subset(&chain, &[4]).is_err());
        assert!(detlb2_on_subset(&chain, &[1, 1]).is_err());
    }

    #[test]
    fn detlb2_search_exact_and_heuristic() {
        let res = detlb2_search(&identity(10), 1, 0).unwrap();
        assert!(res.exact);
        assert_eq!(res.gamma, (1..=10).collect::<Vec<_>>());

        let mut rng = seed::rng(9);
        let sys = crate::setsystem::multiset_sum(&[random_chain(18, &mut rng), random_chain(18, &mut rng)]).unwrap();
        let mut last = f64::NEG_INFINITY;
        for budget in [1, 4, 16] {
            let res = detlb2_search(&sys, budget, 3).unwrap();
            assert!(!res.exact);
            assert!(res.value >= last);
            assert!((detlb2_on_subset(&sys, &res.gamma).unwrap() - res.value).abs() < 1e-12);
            last = res.value;
        }
        assert_eq!(detlb2_search(&sys, 4, 3).unwrap(), detlb2_search(&sys, 4, 3).unwrap());
    }

    #[test]
    fn detlb_examples() {
        let res = detlb_search(&identity(4), 1, 0).unwrap();
        assert_eq!((res.value, res.k), (1.0, 1));
        let res = detlb_search(&chain_family(&[1, 2, 3]).unwrap(), 1, 0).unwrap();
        assert_eq!(res.value, 1.0);
        let zero = SetSystem::from_sets(3, [Vec::<usize>::new(), vec![]]).unwrap();
        assert_eq!(detlb_search(&zero, 1, 0).unwrap().value, 0.0);
        assert!(detlb_search(&zero, 0, 0).is_err());

        // 3×3 with det 2: rows {1,2},{2,3},{1,3}
        let tri = SetSystem::from_sets(3, [vec![1, 2], vec![2, 3], vec![1, 3]]).unwrap();
        let res = detlb_search(&tri, 1, 0).unwrap();
        assert_eq!(res.k, 3);
        assert!((res.value - 2f64.cbrt()).abs() < 1e-12);
    }

    #[test]
    fn bareiss_matches_lu() {
        let mut rng = seed::rng(12);
        for k in 1..=7 {
            let rows: Vec<Vec<i128>> = (0..k).map(|_| (0..k).map(|_| rng.gen_range(0..=1)).collect()).collect();
            let f = DMatrix::from_fn(k, k, |i, j| rows[i][j] as f64);
            assert!((bareiss(rows) as f64 - f.lu().determinant()).abs() < 1e-9);
        }
    }

    #[test]
    fn detlb_heuristic_is_monotone_in_budget() {
        let mut rng = seed::rng(21);
        let sys = crate::setsystem::multiset_sum(&[random_chain(12, &mut rng), random_chain(12, &mut rng)]).unwrap();
        let mut last = 0.0;
        for budget in [1, 5, 20] {
            let res = detlb_search(&sys, budget, 8).unwrap();
            assert!(!res.exact && res.value >= last && res.value >= 1.0);
            last = res.value;
        }
    }

    #[test]
    fn weyl_examples() {
        let mut rng = seed::rng(33);
        let a = random_chain(8, &mut rng);
        let single = weyl_union_check(std::slice::from_ref(&a)).unwrap();
        for (x, y) in single.union_eigenvalues.iter().zip(&single.bounds) {
            assert!((x - y).abs() < 1e-9);
        }
        assert!(weyl_union_check(&[a.clone(), a.clone()]).unwrap().holds(1e-8));
        let three: Vec<SetSystem> = (0..3).map(|_| random_chain(8, &mut rng)).collect();
        assert!(weyl_union_check(&three).unwrap().holds(1e-8));
        assert!(matches!(weyl_union_check(&[a, identity(3)]), Err(Error::LengthMismatch { .. })));
        assert!(weyl_union_check(&[]).is_err());
    }
}
