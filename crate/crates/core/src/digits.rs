//! Digit strings over `[r]`, permutations of `[r]`, and the coloring tree.
//!
//! Digits are 1-based throughout: a string over radix `r` has entries in
//! `1..=r`. Strings of a fixed length are identified with their
//! lexicographic rank (`111…1` has rank 0), which is also the vertex order
//! used by the coloring and system file formats.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitString {
    radix: u8,
    digits: Vec<u8>,
}

impl DigitString {
    pub fn new(radix: u8, digits: Vec<u8>) -> Result<Self> {
        check_radix(radix)?;
        if let Some(&bad) = digits.iter().find(|&&x| x == 0 || x > radix) {
            return Err(Error::DigitOutOfRange { digit: bad as u32, radix });
        }
        Ok(Self { radix, digits })
    }

    /// The empty string ε.
    pub fn empty(radix: u8) -> Self {
        Self { radix, digits: Vec::new() }
    }

    /// The all-`j` string of length `len`.
    pub fn constant(radix: u8, j: u8, len: usize) -> Result<Self> {
        Self::new(radix, vec![j; len])
    }

    /// The string of length `len` with lexicographic rank `rank`.
    pub fn from_rank(radix: u8, len: usize, mut rank: usize) -> Self {
        let r = radix as usize;
        let mut digits = vec![0u8; len];
        for slot in digits.iter_mut().rev() {
            *slot = (rank % r) as u8 + 1;
            rank /= r;
        }
        Self { radix, digits }
    }

    /// Parse a digit string such as `"123"`. Radices above 9 use
    /// comma-separated digits (`"1,10,3"`); `""` and `"ε"` are the empty
    /// string.
    pub fn parse(radix: u8, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "ε" {
            return Ok(Self::empty(radix));
        }
        let digits: Vec<u8> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<u8>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::InvalidArgument(format!("digit string {s:?}: {e}")))?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|x| x as u8)
                        .ok_or_else(|| Error::InvalidArgument(format!("digit string {s:?}")))
                })
                .collect::<Result<_>>()?
        };
        Self::new(radix, digits)
    }

    pub fn radix(&self) -> u8 {
        self.radix
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// `a[k]`: the first `k` digits.
    pub fn prefix(&self, k: usize) -> DigitString {
        Self { radix: self.radix, digits: self.digits[..k.min(self.len())].to_vec() }
    }

    /// Concatenation `a j`.
    pub fn child(&self, j: u8) -> Result<DigitString> {
        if j == 0 || j > self.radix {
            return Err(Error::DigitOutOfRange { digit: j as u32, radix: self.radix });
        }
        let mut digits = self.digits.clone();
        digits.push(j);
        Ok(Self { radix: self.radix, digits })
    }

    pub fn last(&self) -> Option<u8> {
        self.digits.last().copied()
    }

    /// Lexicographic rank among strings of the same length (0-based).
    pub fn rank(&self) -> usize {
        rank_of(self.radix, &self.digits)
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return f.write_str("ε");
        }
        write_digits(f, self.radix, &self.digits)
    }
}

pub(crate) fn rank_of(radix: u8, digits: &[u8]) -> usize {
    let r = radix as usize;
    digits.iter().fold(0usize, |acc, &x| acc * r + (x as usize - 1))
}

fn write_digits(f: &mut fmt::Formatter<'_>, radix: u8, digits: &[u8]) -> fmt::Result {
    if radix <= 9 {
        for x in digits {
            write!(f, "{x}")?;
        }
    } else {
        for (i, x) in digits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
    }
    Ok(())
}

fn check_radix(radix: u8) -> Result<()> {
    if radix < 2 {
        return Err(Error::InvalidArgument(format!("radix must be at least 2, got {radix}")));
    }
    Ok(())
}

/// A permutation of `[r]` in one-line notation, `images[i-1] = σ(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn new(images: Vec<u8>) -> Result<Self> {
        let r = images.len();
        if r == 0 || r > u8::MAX as usize {
            return Err(Error::NotAPermutation(format!("{images:?}")));
        }
        let mut seen = vec![false; r];
        for &x in &images {
            let i = x as usize;
            if i == 0 || i > r || seen[i - 1] {
                return Err(Error::NotAPermutation(format!("{images:?}")));
            }
            seen[i - 1] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(r: u8) -> Self {
        Self { images: (1..=r).collect() }
    }

    /// τ(i) = r − i + 1.
    pub fn reversal(r: u8) -> Self {
        Self { images: (1..=r).rev().collect() }
    }

    /// i ↦ i + k (mod r); `rotation(3, 1)` is the cycle 1→2→3→1.
    pub fn rotation(r: u8, k: u8) -> Self {
        let (r16, k16) = (r as u16, k as u16);
        Self { images: (0..r16).map(|i| ((i + k16) % r16 + 1) as u8).collect() }
    }

    /// The cyclic group `{rotation(r, k)}`; for r = 3 this is `{e, (123), (132)}`.
    pub fn cyclic(r: u8) -> Vec<Self> {
        (0..r).map(|k| Self::rotation(r, k)).collect()
    }

    /// All of `S_r`, in lexicographic order of image sequences.
    pub fn all(r: u8) -> Vec<Self> {
        let mut cur = Self::identity(r);
        let mut out = vec![cur.clone()];
        while cur.next_lex() {
            out.push(cur.clone());
        }
        out
    }

    /// Advance to the lexicographically next permutation; false at the last one.
    pub fn next_lex(&mut self) -> bool {
        let v = &mut self.images;
        let n = v.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }

    /// Parse one-line notation, e.g. `"231"` (or `"2,3,1"`).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let images: Vec<u8> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<u8>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::NotAPermutation(s.to_string()))?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|x| x as u8))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::NotAPermutation(s.to_string()))?
        };
        Self::new(images)
    }

    pub fn degree(&self) -> u8 {
        self.images.len() as u8
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    /// σ(i) for 1-based `i`.
    #[inline]
    pub fn apply(&self, i: u8) -> u8 {
        self.images[i as usize - 1]
    }

    /// `self ∘ other`: i ↦ self(other(i)).
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::RadixMismatch { left: self.degree(), right: other.degree() });
        }
        Ok(Self { images: other.images.iter().map(|&i| self.apply(i)).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u8; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize - 1] = i as u8 + 1;
        }
        Self { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x as usize == i + 1)
    }

    /// Digitwise action `σ·a = σ(a₁)σ(a₂)…σ(a_d)`.
    pub fn act(&self, a: &DigitString) -> Result<DigitString> {
        self.check_radix(a)?;
        Ok(DigitString { radix: a.radix, digits: a.digits.iter().map(|&x| self.apply(x)).collect() })
    }

    /// Lexicographic comparison of `σ·b` and `σ·a` without materializing either.
    pub fn cmp_under(&self, b: &DigitString, a: &DigitString) -> Result<Ordering> {
        self.check_radix(a)?;
        self.check_radix(b)?;
        if a.len() != b.len() {
            return Err(Error::LengthMismatch { expected: a.len(), got: b.len() });
        }
        Ok(self.cmp_digits(b.digits(), a.digits()))
    }

    #[inline]
    pub(crate) fn cmp_digits(&self, b: &[u8], a: &[u8]) -> Ordering {
        for (&x, &y) in b.iter().zip(a) {
            if x != y {
                return self.apply(x).cmp(&self.apply(y));
            }
        }
        Ordering::Equal
    }

    /// Rank of `σ·a` among strings of length `len` given the rank of `a`.
    pub(crate) fn act_rank(&self, len: usize, rank: usize) -> usize {
        let r = self.images.len();
        let mut rest = rank;
        let mut place = 1usize;
        let mut out = 0usize;
        for _ in 0..len {
            let digit = (rest % r) as u8 + 1;
            rest /= r;
            out += (self.apply(digit) as usize - 1) * place;
            place *= r;
        }
        out
    }

    fn check_radix(&self, a: &DigitString) -> Result<()> {
        if self.degree() != a.radix {
            return Err(Error::RadixMismatch { left: self.degree(), right: a.radix });
        }
        Ok(())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_digits(f, self.degree(), &self.images)
    }
}

/// Digitwise action of σ on a string.
pub fn act_digitwise(sigma: &Permutation, a: &DigitString) -> Result<DigitString> {
    sigma.act(a)
}

/// `σ·b < σ·a` in lexicographic order; equivalently `b ∈ E_{σ,a}`.
pub fn lex_less_under(sigma: &Permutation, b: &DigitString, a: &DigitString) -> Result<bool> {
    Ok(sigma.cmp_under(b, a)? == Ordering::Less)
}

/// A leaf coloring of `[r]^d` with odd integer values, extended to every
/// prefix by `χ(b) = Σ_i χ(b i)`.
///
/// Level `k` stores `χ` for all of `[r]^k` in lexicographic order, so the
/// children of the node with rank `p` at level `k` are the contiguous slice
/// `p·r .. p·r + r` of level `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringTree {
    r: u8,
    d: usize,
    levels: Vec<Vec<i64>>,
}

impl ColoringTree {
    pub fn from_leaves(r: u8, d: usize, leaves: Vec<i64>) -> Result<Self> {
        check_radix(r)?;
        let expected = leaf_count(r, d)?;
        if leaves.len() != expected {
            return Err(Error::LengthMismatch { expected, got: leaves.len() });
        }
        if let Some((index, &value)) = leaves.iter().enumerate().find(|(_, v)| *v % 2 == 0) {
            return Err(Error::EvenEntry { index, value });
        }
        let ru = r as usize;
        let mut levels = Vec::with_capacity(d + 1);
        levels.push(leaves);
        for _ in 0..d {
            let below = levels.last().unwrap();
            let above: Vec<i64> = below.chunks_exact(ru).map(|c| c.iter().sum()).collect();
            levels.push(above);
        }
        levels.reverse();
        Ok(Self { r, d, levels })
    }

    /// Uniformly random ±1 leaves.
    pub fn random<R: Rng + ?Sized>(r: u8, d: usize, rng: &mut R) -> Result<Self> {
        let n = leaf_count(r, d)?;
        let leaves = (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
        Self::from_leaves(r, d, leaves)
    }

    pub fn radix(&self) -> u8 {
        self.r
    }

    pub fn depth(&self) -> usize {
        self.d
    }

    /// χ(ε).
    pub fn root(&self) -> i64 {
        self.levels[0][0]
    }

    pub fn leaves(&self) -> &[i64] {
        &self.levels[self.d]
    }

    pub fn level(&self, k: usize) -> &[i64] {
        &self.levels[k]
    }

    /// Values of the `r` children of the node of rank `rank` at level `k < d`.
    #[inline]
    pub fn children(&self, k: usize, rank: usize) -> &[i64] {
        let r = self.r as usize;
        &self.levels[k + 1][rank * r..rank * r + r]
    }

    /// χ(b) for `|b| ≤ d`.
    pub fn value(&self, b: &DigitString) -> Result<i64> {
        if b.radix() != self.r {
            return Err(Error::RadixMismatch { left: self.r, right: b.radix() });
        }
        if b.len() > self.d {
            return Err(Error::InvalidArgument(format!(
                "string of length {} is deeper than the tree (d = {})",
                b.len(),
                self.d
            )));
        }
        Ok(self.levels[b.len()][b.rank()])
    }

    /// Parse the `+`/`-` coloring file format; the depth is inferred from
    /// the length, which must be a power of `r`.
    pub fn parse_coloring(r: u8, text: &str) -> Result<Self> {
        check_radix(r)?;
        let line = text.strip_suffix('\n').unwrap_or(text);
        let line = line.strip_suffix('\r').unwrap_or(line);
        let mut leaves = Vec::with_capacity(line.len());
        for (i, c) in line.chars().enumerate() {
            leaves.push(match c {
                '+' => 1,
                '-' => -1,
                _ => {
                    return Err(Error::Parse { line: 1, msg: format!("invalid character {c:?} at column {}", i + 1) })
                }
            });
        }
        let mut d = 0usize;
        let mut size = 1usize;
        while size < leaves.len() {
            size = size.saturating_mul(r as usize);
            d += 1;
        }
        if size != leaves.len() {
            return Err(Error::Parse {
                line: 1,
                msg: format!("length {} is not a power of {r}", leaves.len()),
            });
        }
        Self::from_leaves(r, d, leaves)
    }

    /// Coloring file contents (one line, trailing newline). Leaves must be ±1.
    pub fn to_coloring_string(&self) -> Result<String> {
        let mut s = String::with_capacity(self.leaves().len() + 1);
        for (index, &v) in self.leaves().iter().enumerate() {
            s.push(match v {
                1 => '+',
                -1 => '-',
                value => return Err(Error::InvalidArgument(format!("leaf {index} has value {value}, not ±1"))),
            });
        }
        s.push('\n');
        Ok(s)
    }
}

pub fn build_coloring_tree(leaves: Vec<i64>, r: u8, d: usize) -> Result<ColoringTree> {
    ColoringTree::from_leaves(r, d, leaves)
}

pub fn induced_value(tree: &ColoringTree, b: &DigitString) -> Result<i64> {
    tree.value(b)
}

/// `r^d`, checked.
pub fn leaf_count(r: u8, d: usize) -> Result<usize> {
    (r as usize)
        .checked_pow(d as u32)
        .ok_or_else(|| Error::LimitExceeded { what: format!("{r}^{d}"), limit: usize::MAX as u64 })
}
