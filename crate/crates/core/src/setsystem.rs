//! Finite set systems with multiplicity.
//!
//! Elements are 1-based in the public API and in the file format. Each set
//! is stored as a bitset when the ground set has at most [`BITSET_LIMIT`]
//! elements and as a sorted index list otherwise; a ±1 coloring is then
//! evaluated on a bitset as `2·|S ∩ plus| − |S|`.

use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::{Error, Result};

pub const BITSET_LIMIT: usize = 1 << 16;

const HEADER: &str = "permdisc-system v1";

#[derive(Clone, Debug, PartialEq, Eq)]
enum Subset {
    Bits { words: Vec<u64>, len: usize },
    List(Vec<u32>),
}

impl Subset {
    /// `sorted` holds distinct 0-based elements in increasing order.
    fn from_sorted(n: usize, sorted: &[u32]) -> Self {
        if n <= BITSET_LIMIT {
            let mut words = vec![0u64; n.div_ceil(64)];
            for &x in sorted {
                words[x as usize / 64] |= 1 << (x % 64);
            }
            Subset::Bits { words, len: sorted.len() }
        } else {
            Subset::List(sorted.to_vec())
        }
    }

    fn len(&self) -> usize {
        match self {
            Subset::Bits { len, .. } => *len,
            Subset::List(v) => v.len(),
        }
    }

    fn contains(&self, x: usize) -> bool {
        match self {
            Subset::Bits { words, .. } => words.get(x / 64).is_some_and(|w| w >> (x % 64) & 1 == 1),
            Subset::List(v) => v.binary_search(&(x as u32)).is_ok(),
        }
    }

    /// 0-based elements in increasing order.
    fn elements(&self) -> Box<dyn Iterator<Item = usize> + '_> {
        match self {
            Subset::Bits { words, .. } => Box::new(words.iter().enumerate().flat_map(|(wi, &w)| {
                let mut w = w;
                std::iter::from_fn(move || {
                    if w == 0 {
                        return None;
                    }
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                })
            })),
            Subset::List(v) => Box::new(v.iter().map(|&x| x as usize)),
        }
    }

    fn signed_sum(&self, coloring: &Signs) -> i64 {
        match self {
            Subset::Bits { words, len } => {
                let plus: u32 = words.iter().zip(&coloring.plus).map(|(a, b)| (a & b).count_ones()).sum();
                2 * plus as i64 - *len as i64
            }
            Subset::List(v) => v.iter().map(|&x| coloring.values[x as usize] as i64).sum(),
        }
    }
}

/// A validated ±1 coloring with its positive-vertex bitmask.
pub(crate) struct Signs {
    values: Vec<i8>,
    plus: Vec<u64>,
}

impl Signs {
    pub(crate) fn new(n: usize, chi: &[i8]) -> Result<Self> {
        if chi.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: chi.len() });
        }
        let mut plus = vec![0u64; n.div_ceil(64)];
        for (i, &c) in chi.iter().enumerate() {
            match c {
                1 => plus[i / 64] |= 1 << (i % 64),
                -1 => {}
                other => return Err(Error::InvalidArgument(format!("coloring entry {} is {other}, not ±1", i + 1))),
            }
        }
        Ok(Self { values: chi.to_vec(), plus })
    }
}

/// `Σ_S χ(S)²` over `count` sets; the root-mean-square is `sqrt(sum_squares / count)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeanSquare {
    pub sum_squares: u128,
    pub count: u128,
}

impl MeanSquare {
    pub fn value(&self) -> f64 {
        (self.sum_squares as f64 / self.count as f64).sqrt()
    }

    pub fn mean_square(&self) -> f64 {
        self.sum_squares as f64 / self.count as f64
    }
}

/// A ground set `[n]` with a multiset of subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSystem {
    n: usize,
    sets: Vec<Subset>,
    labels: Vec<Option<String>>,
}

impl SetSystem {
    pub fn new(n: usize) -> Self {
        Self { n, sets: Vec::new(), labels: Vec::new() }
    }

    /// Build from 1-based element lists.
    pub fn from_sets<I, S>(n: usize, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[usize]>,
    {
        let mut sys = Self::new(n);
        for s in sets {
            sys.push(s.as_ref(), None)?;
        }
        Ok(sys)
    }

    /// Append a set given by 1-based elements (any order, no repeats).
    pub fn push(&mut self, elements: &[usize], label: Option<String>) -> Result<()> {
        let mut sorted = Vec::with_capacity(elements.len());
        for &x in elements {
            if x == 0 || x > self.n {
                return Err(Error::InvalidArgument(format!("element {x} outside [1, {}]", self.n)));
            }
            sorted.push((x - 1) as u32);
        }
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!("repeated element in set {elements:?}")));
        }
        self.push_sorted(&sorted, label);
        Ok(())
    }

    pub(crate) fn push_sorted(&mut self, sorted: &[u32], label: Option<String>) {
        self.sets.push(Subset::from_sorted(self.n, sorted));
        self.labels.push(label);
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    /// Number of sets `|A|`, counted with multiplicity.
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.labels.get(index).and_then(|l| l.as_deref())
    }

    pub fn set_len(&self, index: usize) -> usize {
        self.sets[index].len()
    }

    /// 1-based elements of set `index`, increasing.
    pub fn set(&self, index: usize) -> Vec<usize> {
        self.sets[index].elements().map(|x| x + 1).collect()
    }

    pub fn contains(&self, index: usize, element: usize) -> bool {
        element >= 1 && self.sets[index].contains(element - 1)
    }

    /// Total number of (set, element) incidences.
    pub fn incidences(&self) -> usize {
        self.sets.iter().map(Subset::len).sum()
    }

    /// The maximal chain `{}, {σ(1)}, {σ(1),σ(2)}, …, [n]` of a permutation
    /// given in 1-based one-line notation.
    pub fn chain_family(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &x in perm {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::NotAPermutation(format!("{perm:?}")));
            }
            seen[x - 1] = true;
        }
        let mut sys = Self::new(n);
        let mut prefix: Vec<u32> = Vec::with_capacity(n);
        sys.push_sorted(&prefix, None);
        for &x in perm {
            let pos = prefix.partition_point(|&y| y < (x - 1) as u32);
            prefix.insert(pos, (x - 1) as u32);
            sys.push_sorted(&prefix, None);
        }
        Ok(sys)
    }

    /// Multiset sum (union with multiplicity) of systems on a common ground set.
    pub fn multiset_sum(systems: &[SetSystem]) -> Result<Self> {
        let Some(first) = systems.first() else {
            return Err(Error::InvalidArgument("multiset sum of no systems".into()));
        };
        let mut out = Self::new(first.n);
        for sys in systems {
            if sys.n != first.n {
                return Err(Error::LengthMismatch { expected: first.n, got: sys.n });
            }
            out.sets.extend(sys.sets.iter().cloned());
            out.labels.extend(sys.labels.iter().cloned());
        }
        Ok(out)
    }

    /// `max_S |χ(S)|` and the lowest index attaining it. A system with no
    /// sets has discrepancy 0 and no witness.
    pub fn coloring_disc(&self, chi: &[i8]) -> Result<(i64, Option<usize>)> {
        let signs = Signs::new(self.n, chi)?;
        let mut best: (i64, Option<usize>) = (0, None);
        for (i, s) in self.sets.iter().enumerate() {
            let v = s.signed_sum(&signs).abs();
            if best.1.is_none() || v > best.0 {
                best = (v, Some(i));
            }
        }
        Ok(best)
    }

    /// Exact `Σ_S χ(S)²` over the family, for the RMS discrepancy of `χ`.
    pub fn coloring_disc2(&self, chi: &[i8]) -> Result<MeanSquare> {
        if self.sets.is_empty() {
            return Err(Error::EmptySystem);
        }
        let signs = Signs::new(self.n, chi)?;
        let sum_squares = self
            .sets
            .iter()
            .map(|s| {
                let v = s.signed_sum(&signs);
                (v * v) as u128
            })
            .sum();
        Ok(MeanSquare { sum_squares, count: self.sets.len() as u128 })
    }

    /// `A|_Γ`: intersect every set with `Γ` (1-based) and relabel `Γ` as
    /// `1..|Γ|` in increasing order.
    pub fn restrict(&self, gamma: &[usize]) -> Result<Self> {
        let mut keep = gamma.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&bad) = keep.iter().find(|&&x| x == 0 || x > self.n) {
            return Err(Error::InvalidArgument(format!("element {bad} outside [1, {}]", self.n)));
        }
        let mut relabel = vec![u32::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            relabel[old - 1] = new as u32;
        }
        let mut out = Self::new(keep.len());
        let mut buf = Vec::new();
        for (s, label) in self.sets.iter().zip(&self.labels) {
            buf.clear();
            buf.extend(s.elements().map(|x| relabel[x]).filter(|&x| x != u32::MAX));
            out.push_sorted(&buf, label.clone());
        }
        Ok(out)
    }

    /// `|A| × n` 0/1 matrix with sets as rows and vertices as columns.
    pub fn incidence_matrix(&self) -> DMatrix<i64> {
        let mut a = DMatrix::<i64>::zeros(self.sets.len(), self.n);
        for (row, s) in self.sets.iter().enumerate() {
            for x in s.elements() {
                a[(row, x)] = 1;
            }
        }
        a
    }

    /// `AᵀA` (n × n): entry `(x, y)` counts the sets containing both `x` and `y`.
    pub fn gram(&self) -> DMatrix<i64> {
        let mut g = DMatrix::<i64>::zeros(self.n, self.n);
        let mut buf = Vec::new();
        for s in &self.sets {
            buf.clear();
            buf.extend(s.elements());
            for (i, &x) in buf.iter().enumerate() {
                g[(x, x)] += 1;
                for &y in &buf[i + 1..] {
                    g[(x, y)] += 1;
                    g[(y, x)] += 1;
                }
            }
        }
        g
    }

    /// Serialize in the `permdisc-system v1` text format.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{HEADER}");
        let _ = writeln!(out, "n {}", self.n);
        let _ = writeln!(out, "m {}", self.sets.len());
        for s in &self.sets {
            let _ = write!(out, "{}", s.len());
            for x in s.elements() {
                let _ = write!(out, " {}", x + 1);
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_file(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.starts_with('#'));

        let mut next = |what: &str| {
            lines.next().ok_or_else(|| Error::Parse { line: 0, msg: format!("unexpected end of file, expected {what}") })
        };
        let (ln, header) = next("header")?;
        if header != HEADER {
            return Err(Error::Parse { line: ln, msg: format!("expected {HEADER:?}") });
        }
        let n = parse_keyed(next("n line")?, "n")?;
        let m = parse_keyed(next("m line")?, "m")?;
        let mut sys = Self::new(n);
        for _ in 0..m {
            let (ln, line) = next("set line")?;
            let fields = parse_ints(ln, line)?;
            let Some((&k, elems)) = fields.split_first() else {
                return Err(Error::Parse { line: ln, msg: "empty set line".into() });
            };
            if k != elems.len() {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("cardinality {k} but {} indices", elems.len()),
                });
            }
            if elems.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parse { line: ln, msg: "indices must be strictly increasing".into() });
            }
            if let Some(&bad) = elems.iter().find(|&&x| x == 0 || x > n) {
                return Err(Error::Parse { line: ln, msg: format!("index {bad} outside [1, {n}]") });
            }
            let sorted: Vec<u32> = elems.iter().map(|&x| (x - 1) as u32).collect();
            sys.push_sorted(&sorted, None);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse { line: ln, msg: "trailing content after last set".into() });
        }
        Ok(sys)
    }
}

fn parse_keyed((ln, line): (usize, &str), key: &str) -> Result<usize> {
    let mut parts = line.split(' ');
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(v), None) if k == key => parse_uint(ln, v),
        _ => Err(Error::Parse { line: ln, msg: format!("expected `{key} <count>`") }),
    }
}

fn parse_uint(ln: usize, s: &str) -> Result<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse { line: ln, msg: format!("not a nonnegative integer: {s:?}") });
    }
    s.parse().map_err(|e| Error::Parse { line: ln, msg: format!("{s:?}: {e}") })
}

fn parse_ints(ln: usize, line: &str) -> Result<Vec<usize>> {
    line.split(' ').map(|t| parse_uint(ln, t)).collect()
}

pub fn chain_family(perm: &[usize]) -> Result<SetSystem> {
    SetSystem::chain_family(perm)
}

pub fn multiset_sum(systems: &[SetSystem]) -> Result<SetSystem> {
    SetSystem::multiset_sum(systems)
}
