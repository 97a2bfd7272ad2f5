//! Exhaustive `disc` and `disc₂` for tiny systems.
//!
//! Vertex 1 is fixed to `+1` (both objectives are invariant under negating
//! the coloring), and the remaining `2^{n−1}` colorings are walked in Gray
//! code order so that each step flips one vertex and touches only the sets
//! containing it. The space is cut into contiguous index ranges that run in
//! parallel; each range rebuilds its starting sums from scratch.
//!
//! Among optimal colorings the lexicographically least one is returned,
//! reading a coloring as its `+`/`-` string (`+` before `-`).

use rayon::prelude::*;

use crate::setsystem::{MeanSquare, SetSystem};
use crate::{Error, Result};

pub const ORACLE_LIMIT: usize = 24;

const CHUNKS: u64 = 256;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Objective {
    Max,
    SumSquares,
}

/// `disc(sys)` and the lexicographically least optimal coloring.
pub fn exact_disc(sys: &SetSystem) -> Result<(i64, Vec<i8>)> {
    let (score, coloring) = search(sys, Objective::Max)?;
    Ok((score as i64, coloring))
}

/// `disc₂(sys)` as an exact mean square, with the lexicographically least
/// optimal coloring.
pub fn exact_disc2(sys: &SetSystem) -> Result<(MeanSquare, Vec<i8>)> {
    if sys.is_empty() {
        return Err(Error::EmptySystem);
    }
    let (score, coloring) = search(sys, Objective::SumSquares)?;
    Ok((MeanSquare { sum_squares: score as u128, count: sys.len() as u128 }, coloring))
}

fn search(sys: &SetSystem, objective: Objective) -> Result<(u64, Vec<i8>)> {
    let n = sys.ground_size();
    if n > ORACLE_LIMIT {
        return Err(Error::LimitExceeded { what: format!("exhaustive search over n = {n} vertices"), limit: ORACLE_LIMIT as u64 });
    }
    let mut by_vertex: Vec<Vec<u32>> = vec![Vec::new(); n];
    let members: Vec<Vec<usize>> = (0..sys.len()).map(|s| sys.set(s)).collect();
    for (s, elems) in members.iter().enumerate() {
        for &x in elems {
            by_vertex[x - 1].push(s as u32);
        }
    }
    let total: u64 = if n == 0 { 1 } else { 1 << (n - 1) };
    let chunk = total.div_ceil(CHUNKS).max(1);
    let starts: Vec<u64> = (0..total).step_by(chunk as usize).collect();

    let best = starts
        .par_iter()
        .map(|&lo| {
            let hi = (lo + chunk).min(total);
            let mut walk = Walk::new(n, &members, &by_vertex, gray(lo) << 1);
            let mut best = walk.candidate(objective);
            for idx in lo + 1..hi {
                walk.flip(idx.trailing_zeros() as usize + 1);
                let c = walk.candidate(objective);
                if c < best {
                    best = c;
                }
            }
            best
        })
        .min()
        .expect("at least one chunk");

    let (score, _, mask) = best;
    let coloring = (0..n).map(|v| if mask >> v & 1 == 1 { -1 } else { 1 }).collect();
    Ok((score, coloring))
}

fn gray(i: u64) -> u64 {
    i ^ (i >> 1)
}

/// Enumeration state: bit `v` of `mask` set means vertex `v + 1` is `-1`.
struct Walk<'a> {
    n: usize,
    mask: u64,
    sums: Vec<i32>,
    by_vertex: &'a [Vec<u32>],
    /// `hist[k]` = number of sets with `|χ(S)| = k`.
    hist: Vec<u32>,
    max_abs: usize,
    sum_sq: u64,
}

impl<'a> Walk<'a> {
    fn new(n: usize, members: &[Vec<usize>], by_vertex: &'a [Vec<u32>], mask: u64) -> Self {
        let sums: Vec<i32> = members
            .iter()
            .map(|elems| elems.iter().map(|&x| if mask >> (x - 1) & 1 == 1 { -1 } else { 1 }).sum())
            .collect();
        let mut hist = vec![0u32; n + 1];
        let mut sum_sq = 0u64;
        for &s in &sums {
            hist[s.unsigned_abs() as usize] += 1;
            sum_sq += (s as i64 * s as i64) as u64;
        }
        let max_abs = (0..=n).rev().find(|&k| hist[k] > 0).unwrap_or(0);
        Self { n, mask, sums, by_vertex, hist, max_abs, sum_sq }
    }

    fn flip(&mut self, v: usize) {
        let was_minus = self.mask >> v & 1 == 1;
        self.mask ^= 1 << v;
        let delta: i32 = if was_minus { 2 } else { -2 };
        for &s in &self.by_vertex[v] {
            let old = self.sums[s as usize];
            let new = old + delta;
            self.sums[s as usize] = new;
            self.hist[old.unsigned_abs() as usize] -= 1;
            let k = new.unsigned_abs() as usize;
            self.hist[k] += 1;
            self.max_abs = self.max_abs.max(k);
            self.sum_sq = self.sum_sq + (new as i64 * new as i64) as u64 - (old as i64 * old as i64) as u64;
        }
        while self.max_abs > 0 && self.hist[self.max_abs] == 0 {
            self.max_abs -= 1;
        }
    }

    /// `(score, lexicographic key, mask)`; smaller is better.
    fn candidate(&self, objective: Objective) -> (u64, u64, u64) {
        let score = match objective {
            Objective::Max => self.max_abs as u64,
            Objective::SumSquares => self.sum_sq,
        };
        let key = if self.n == 0 { 0 } else { self.mask.reverse_bits() >> (64 - self.n) };
        (score, key, self.mask)
    }
}
