//! The `r × r` game matrix and the permutation seminorm
//! `‖M‖_{S_r} = max_σ |σ·M|`, with `σ·M = Σ_{σ(i) > σ(j)} M_{ij}`.
//!
//! For a coloring tree, `M_χ(a)` accumulates one row per digit of `a`
//! (row `a_k` receives the children of `a[k−1]`), and `σ·M_χ(a)` equals
//! `χ(E_{σ,a})`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Sub};

use crate::digits::{ColoringTree, DigitString, Permutation};
use crate::{Error, Result};

/// Largest `r` for which [`seminorm`] and [`moment_identity`] enumerate `S_r`.
pub const BRUTE_FORCE_LIMIT: u8 = 8;

/// Largest `r` accepted by [`cutnorm_candidate`].
pub const CUTNORM_LIMIT: u8 = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GameMatrix {
    r: u8,
    entries: Vec<i64>,
}

impl GameMatrix {
    pub fn zeros(r: u8) -> Self {
        Self { r, entries: vec![0; r as usize * r as usize] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        if r == 0 || r > u8::MAX as usize {
            return Err(Error::InvalidArgument(format!("matrix dimension {r}")));
        }
        if let Some(row) = rows.iter().find(|row| row.len() != r) {
            return Err(Error::LengthMismatch { expected: r, got: row.len() });
        }
        Ok(Self { r: r as u8, entries: rows.concat() })
    }

    /// 0/1 adjacency matrix of a digraph on `r` vertices; edges are 1-based `(from, to)`.
    pub fn adjacency(r: u8, edges: &[(u8, u8)]) -> Self {
        let mut m = Self::zeros(r);
        for &(i, j) in edges {
            m[(i, j)] = 1;
        }
        m
    }

    pub fn dim(&self) -> u8 {
        self.r
    }

    pub fn row(&self, i: u8) -> &[i64] {
        let r = self.r as usize;
        let start = (i as usize - 1) * r;
        &self.entries[start..start + r]
    }

    /// Add `v` to row `i` (1-based).
    pub fn add_to_row(&mut self, i: u8, v: &[i64]) {
        let r = self.r as usize;
        let start = (i as usize - 1) * r;
        for (x, y) in self.entries[start..start + r].iter_mut().zip(v) {
            *x += y;
        }
    }

    pub fn sub_from_row(&mut self, i: u8, v: &[i64]) {
        let r = self.r as usize;
        let start = (i as usize - 1) * r;
        for (x, y) in self.entries[start..start + r].iter_mut().zip(v) {
            *x -= y;
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.r);
        for i in 1..=self.r {
            for j in 1..=self.r {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn scale(&self, c: i64) -> Self {
        Self { r: self.r, entries: self.entries.iter().map(|x| x * c).collect() }
    }

    /// `M − Mᵗ`.
    pub fn antisymmetric_part(&self) -> Self {
        self - &self.transpose()
    }

    pub fn is_antisymmetric(&self) -> bool {
        (1..=self.r).all(|i| (1..=self.r).all(|j| self[(i, j)] == -self[(j, i)]))
    }

    pub fn frobenius_sq(&self) -> i128 {
        self.entries.iter().map(|&x| (x as i128) * (x as i128)).sum()
    }

    /// `Σ_{i≠j} M_{ij}`.
    pub fn off_diagonal_sum(&self) -> i64 {
        let mut s = 0;
        for i in 1..=self.r {
            for j in 1..=self.r {
                if i != j {
                    s += self[(i, j)];
                }
            }
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    fn check_dim(&self, other: u8) -> Result<()> {
        if self.r != other {
            return Err(Error::RadixMismatch { left: self.r, right: other });
        }
        Ok(())
    }
}

impl Index<(u8, u8)> for GameMatrix {
    type Output = i64;

    fn index(&self, (i, j): (u8, u8)) -> &i64 {
        &self.entries[(i as usize - 1) * self.r as usize + (j as usize - 1)]
    }
}

impl IndexMut<(u8, u8)> for GameMatrix {
    fn index_mut(&mut self, (i, j): (u8, u8)) -> &mut i64 {
        &mut self.entries[(i as usize - 1) * self.r as usize + (j as usize - 1)]
    }
}

impl<'a> Add<&'a GameMatrix> for &'a GameMatrix {
    type Output = GameMatrix;

    fn add(self, rhs: &GameMatrix) -> GameMatrix {
        assert_eq!(self.r, rhs.r, "dimension mismatch");
        GameMatrix { r: self.r, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a GameMatrix> for &'a GameMatrix {
    type Output = GameMatrix;

    fn sub(self, rhs: &GameMatrix) -> GameMatrix {
        assert_eq!(self.r, rhs.r, "dimension mismatch");
        GameMatrix { r: self.r, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect() }
    }
}

/// `r` lines of `r` space-separated integers.
impl fmt::Display for GameMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.r {
            for (k, x) in self.row(i).iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn check_prefix(tree: &ColoringTree, a: &DigitString) -> Result<()> {
    if a.radix() != tree.radix() {
        return Err(Error::RadixMismatch { left: a.radix(), right: tree.radix() });
    }
    if a.len() > tree.depth() {
        return Err(Error::InvalidArgument(format!("|a| = {} exceeds depth {}", a.len(), tree.depth())));
    }
    Ok(())
}

/// `L_χ(a)`: row `a_k` holds `χ(a[k−1] 1), …, χ(a[k−1] r)`.
pub fn level_matrix(tree: &ColoringTree, a: &DigitString) -> Result<GameMatrix> {
    check_prefix(tree, a)?;
    let Some(last) = a.last() else {
        return Err(Error::InvalidArgument("level matrix of the empty string".into()));
    };
    let k = a.len();
    let parent = a.prefix(k - 1);
    let mut m = GameMatrix::zeros(tree.radix());
    m.add_to_row(last, tree.children(k - 1, parent.rank()));
    Ok(m)
}

/// `M_χ(a) = Σ_{k=1}^{|a|} L_χ(a[k])`, with `M_χ(ε) = 0`.
pub fn prefix_matrix(tree: &ColoringTree, a: &DigitString) -> Result<GameMatrix> {
    check_prefix(tree, a)?;
    let r = tree.radix() as usize;
    let mut m = GameMatrix::zeros(tree.radix());
    let mut rank = 0usize;
    for (k, &digit) in a.digits().iter().enumerate() {
        m.add_to_row(digit, tree.children(k, rank));
        rank = rank * r + (digit as usize - 1);
    }
    Ok(m)
}

/// `σ·M = Σ_{σ(i) > σ(j)} M_{ij}`.
pub fn pair(sigma: &Permutation, m: &GameMatrix) -> Result<i64> {
    m.check_dim(sigma.degree())?;
    Ok(pair_unchecked(sigma.images(), m))
}

#[inline]
fn pair_unchecked(images: &[u8], m: &GameMatrix) -> i64 {
    let r = m.r as usize;
    let mut s = 0;
    for i in 0..r {
        let row = &m.entries[i * r..i * r + r];
        for j in 0..r {
            if images[i] > images[j] {
                s += row[j];
            }
        }
    }
    s
}

/// Exact `‖M‖_{S_r}` with the lexicographically least maximizing `σ`.
pub fn seminorm(m: &GameMatrix) -> Result<(i64, Permutation)> {
    seminorm_with_limit(m, BRUTE_FORCE_LIMIT)
}

pub fn seminorm_with_limit(m: &GameMatrix, limit: u8) -> Result<(i64, Permutation)> {
    if m.r > limit {
        return Err(Error::LimitExceeded {
            what: format!("seminorm brute force over S_{} (use the Frobenius or cut-norm bounds instead)", m.r),
            limit: limit as u64,
        });
    }
    let mut sigma = Permutation::identity(m.r);
    let mut best = (pair_unchecked(sigma.images(), m).abs(), sigma.clone());
    while sigma.next_lex() {
        let v = pair_unchecked(sigma.images(), m).abs();
        if v > best.0 {
            best = (v, sigma.clone());
        }
    }
    Ok(best)
}

/// `‖M − Mᵗ‖_F / (2√2)`.
///
/// Not a lower bound on the seminorm in general: the antisymmetric 3-cycle
/// has seminorm 1 and this value √3. See [`variance_bound`].
pub fn frobenius_bound(m: &GameMatrix) -> f64 {
    (m.antisymmetric_part().frobenius_sq() as f64).sqrt() / (2.0 * 2f64.sqrt())
}

/// `‖M − Mᵗ‖_F / (2√6) ≤ √Var(σ·M) ≤ ‖M‖_{S_r}`.
pub fn variance_bound(m: &GameMatrix) -> f64 {
    (m.antisymmetric_part().frobenius_sq() as f64).sqrt() / (2.0 * 6f64.sqrt())
}

/// `Σ_i (Σ_j (M − Mᵗ)_{ij})²`.
pub fn antisymmetric_row_sums_sq(m: &GameMatrix) -> i128 {
    let a = m.antisymmetric_part();
    (1..=m.r).map(|i| a.row(i).iter().sum::<i64>() as i128).map(|s| s * s).sum()
}

/// Exact first and second moments of `σ·M` over uniform `σ ∈ S_r`, scaled by `r!`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Moments {
    /// `r!·E[σ·M] = Σ_σ σ·M`.
    pub mean_num: i128,
    /// `r!·E[(σ·M)²] = Σ_σ (σ·M)²`.
    pub second_moment_num: i128,
    /// `r!`.
    pub scale: i128,
    /// `E[σ·M] = ½·Σ_{i≠j} M_{ij}`.
    pub mean_closed_form_holds: bool,
    /// `E[(σ·M)²] = E[σ·M]² + ⅛‖M − Mᵗ‖_F²`. Holds exactly when the row
    /// sums `R_i` of `M − Mᵗ` satisfy `Σ R_i² = ‖M − Mᵗ‖_F²`.
    pub decomposition_holds: bool,
    /// `Var(σ·M) = (1/12)·Σ_i R_i² + (1/24)·‖M − Mᵗ‖_F²`.
    pub row_sum_form_holds: bool,
}

impl Moments {
    pub fn mean(&self) -> f64 {
        self.mean_num as f64 / self.scale as f64
    }

    pub fn second_moment(&self) -> f64 {
        self.second_moment_num as f64 / self.scale as f64
    }

    /// `r!²·Var(σ·M) = r!·Σ(σ·M)² − (Σ σ·M)²`.
    pub fn variance_num_scaled(&self) -> i128 {
        self.scale * self.second_moment_num - self.mean_num * self.mean_num
    }
}

pub fn moment_identity(m: &GameMatrix) -> Result<Moments> {
    if m.r > BRUTE_FORCE_LIMIT {
        return Err(Error::LimitExceeded { what: format!("moment enumeration over S_{}", m.r), limit: BRUTE_FORCE_LIMIT as u64 });
    }
    let mut sigma = Permutation::identity(m.r);
    let (mut sum, mut sum_sq, mut count) = (0i128, 0i128, 0i128);
    loop {
        let v = pair_unchecked(sigma.images(), m) as i128;
        sum += v;
        sum_sq += v * v;
        count += 1;
        if !sigma.next_lex() {
            break;
        }
    }
    let offdiag = m.off_diagonal_sum() as i128;
    let anti_sq = m.antisymmetric_part().frobenius_sq();
    // mean = offdiag / 2  <=>  2·sum = count·offdiag
    let mean_closed_form_holds = 2 * sum == count * offdiag;
    // sum_sq/count = (sum/count)² + anti_sq/8, times 8·count²
    let decomposition_holds = 8 * count * sum_sq == 8 * sum * sum + count * count * anti_sq;
    let rows_sq = antisymmetric_row_sums_sq(m);
    let row_sum_form_holds = 24 * (count * sum_sq - sum * sum) == count * count * (2 * rows_sq + anti_sq);
    Ok(Moments { mean_num: sum, second_moment_num: sum_sq, scale: count, mean_closed_form_holds, decomposition_holds, row_sum_form_holds })
}

/// Brute-force cut norm of the top-right `(r/3) × (2r/3)` block (rows
/// `1..=r/3`, columns `r/3+1..=r`): `max_{I,J} |Σ_{i∈I, j∈J} B_{ij}|`.
pub fn cutnorm_candidate(m: &GameMatrix) -> Result<i64> {
    let r = m.r;
    if r % 3 != 0 {
        return Err(Error::InvalidArgument(format!("cut-norm block needs r divisible by 3, got {r}")));
    }
    if r > CUTNORM_LIMIT {
        return Err(Error::LimitExceeded { what: format!("cut-norm enumeration for r = {r}"), limit: CUTNORM_LIMIT as u64 });
    }
    let rows = r / 3;
    let cols: Vec<u8> = (rows + 1..=r).collect();
    let mut best = 0i64;
    for mask in 1u32..(1 << rows) {
        let (mut pos, mut neg) = (0i64, 0i64);
        for &j in &cols {
            let c: i64 = (1..=rows).filter(|i| mask >> (i - 1) & 1 == 1).map(|i| m[(i, j)]).sum();
            if c > 0 {
                pos += c;
            } else {
                neg -= c;
            }
        }
        best = best.max(pos).max(neg);
    }
    Ok(best)
}
