//! The `d`-round minimizer/maximizer game on an `r × r` integer matrix.
//!
//! Each round the minimizer emits `r` odd integers and the maximizer adds
//! them to one row. When the minimizer plays the children of the current
//! prefix of a coloring tree, the matrix after round `k` is `M_χ(a[k])`, so
//! any maximizer strategy yields a set `E_{σ,a}` whose imbalance is the
//! final seminorm.

use std::fmt::Write as _;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::digits::{ColoringTree, DigitString, Permutation};
use crate::game::{seminorm, GameMatrix, BRUTE_FORCE_LIMIT};
use crate::nn::edge_sum;
use crate::seed;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub enum Minimizer<'a> {
    /// Play `(χ(p1), …, χ(pr))` where `p` is the prefix chosen so far.
    FromColoring(&'a ColoringTree),
    /// Independent uniform odd entries in `[-max_abs, max_abs]`.
    Random { max_abs: i64 },
    /// Fixed vectors, one per round.
    Scripted(Vec<Vec<i64>>),
    /// Exploratory: the `±1` vector minimizing the largest seminorm the
    /// maximizer could reach this round.
    Greedy,
}

#[derive(Clone, Debug)]
pub enum Maximizer {
    /// Row 1 if `v_r > 0`, else row 2.
    TwoEntry,
    Random,
    /// Fixed rows (1-based), one per round.
    Scripted(Vec<u8>),
    /// Exploratory: the row maximizing the seminorm after insertion.
    Greedy,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub vector: Vec<i64>,
    pub row: u8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameTranscript {
    pub r: u8,
    pub d: usize,
    pub rounds: Vec<Round>,
    pub final_matrix: GameMatrix,
}

impl GameTranscript {
    /// The maximizer's rows as a digit string `a = a₁…a_d`.
    pub fn rows(&self) -> DigitString {
        DigitString::new(self.r, self.rounds.iter().map(|x| x.row).collect()).expect("rows lie in [r]")
    }

    /// One line per round, `round k: v=(…) row=i`, then the final matrix.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (k, round) in self.rounds.iter().enumerate() {
            let v: Vec<String> = round.vector.iter().map(i64::to_string).collect();
            let _ = writeln!(out, "round {}: v=({}) row={}", k + 1, v.join(","), round.row);
        }
        out.push_str(&self.final_matrix.to_string());
        out
    }
}

/// Row 1 when `v_r > 0`, row 2 otherwise.
pub fn two_entry_choice(v: &[i64]) -> Result<u8> {
    if let Some((index, &value)) = v.iter().enumerate().find(|(_, x)| *x % 2 == 0) {
        return Err(Error::EvenEntry { index, value });
    }
    match v.last() {
        Some(&last) if last > 0 => Ok(1),
        Some(_) => Ok(2),
        None => Err(Error::InvalidArgument("empty minimizer vector".into())),
    }
}

pub fn run_game(minimizer: &Minimizer<'_>, maximizer: &Maximizer, r: u8, d: usize, seed: u64) -> Result<GameTranscript> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!("game needs r >= 2, got {r}")));
    }
    if let Minimizer::FromColoring(tree) = minimizer {
        if tree.radix() != r {
            return Err(Error::RadixMismatch { left: tree.radix(), right: r });
        }
        if tree.depth() != d {
            return Err(Error::LengthMismatch { expected: tree.depth(), got: d });
        }
    }
    let mut min_rng = seed::rng(seed::derive_seed(seed, 0));
    let mut max_rng = seed::rng(seed::derive_seed(seed, 1));
    let mut m = GameMatrix::zeros(r);
    let mut rounds = Vec::with_capacity(d);
    let mut prefix_rank = 0usize;

    for k in 1..=d {
        let v = minimizer_move(minimizer, &m, k, prefix_rank, &mut min_rng)?;
        if v.len() != r as usize {
            return Err(Error::LengthMismatch { expected: r as usize, got: v.len() });
        }
        if let Some(&value) = v.iter().find(|x| *x % 2 == 0) {
            return Err(Error::EvenMove { round: k, value });
        }
        let row = match maximizer {
            Maximizer::TwoEntry => two_entry_choice(&v)?,
            Maximizer::Random => max_rng.gen_range(1..=r),
            Maximizer::Scripted(rows) => {
                let row = *rows
                    .get(k - 1)
                    .ok_or_else(|| Error::InvalidArgument(format!("maximizer script has no row for round {k}")))?;
                if row == 0 || row > r {
                    return Err(Error::InvalidArgument(format!("round {k}: row {row} outside [1, {r}]")));
                }
                row
            }
            Maximizer::Greedy => greedy_row(&m, &v)?,
        };
        m.add_to_row(row, &v);
        prefix_rank = prefix_rank * r as usize + (row as usize - 1);
        rounds.push(Round { vector: v, row });
    }
    Ok(GameTranscript { r, d, rounds, final_matrix: m })
}

fn minimizer_move(
    minimizer: &Minimizer<'_>,
    m: &GameMatrix,
    k: usize,
    prefix_rank: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<i64>> {
    let r = m.dim();
    Ok(match minimizer {
        Minimizer::FromColoring(tree) => tree.children(k - 1, prefix_rank).to_vec(),
        Minimizer::Random { max_abs } => {
            let h = (max_abs.max(&1) + 1) / 2;
            (0..r).map(|_| 2 * rng.gen_range(-h..h) + 1).collect()
        }
        Minimizer::Scripted(script) => script
            .get(k - 1)
            .cloned()
            .ok_or_else(|| Error::InvalidArgument(format!("minimizer script has no vector for round {k}")))?,
        Minimizer::Greedy => greedy_vector(m)?,
    })
}

fn greedy_row(m: &GameMatrix, v: &[i64]) -> Result<u8> {
    let mut best = (i64::MIN, 1u8);
    let mut trial = m.clone();
    for row in 1..=m.dim() {
        trial.add_to_row(row, v);
        let (norm, _) = seminorm(&trial)?;
        trial.sub_from_row(row, v);
        if norm > best.0 {
            best = (norm, row);
        }
    }
    Ok(best.1)
}

fn greedy_vector(m: &GameMatrix) -> Result<Vec<i64>> {
    let r = m.dim();
    if r > 10 {
        return Err(Error::LimitExceeded { what: format!("greedy minimizer for r = {r}"), limit: 10 });
    }
    let mut best: (i64, Vec<i64>) = (i64::MAX, Vec::new());
    let mut trial = m.clone();
    for mask in 0u32..1 << r {
        let v: Vec<i64> = (0..r).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        let mut worst = i64::MIN;
        for row in 1..=r {
            trial.add_to_row(row, &v);
            worst = worst.max(seminorm(&trial)?.0);
            trial.sub_from_row(row, &v);
        }
        if worst < best.0 {
            best = (worst, v);
        }
    }
    Ok(best.1)
}

/// A set `E_{σ,a}` of `A_{S_r}` with its imbalance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub sigma: Permutation,
    pub a: DigitString,
    /// `χ(E_{σ,a})`.
    pub signed: i64,
    /// `|χ(E_{σ,a})|`.
    pub value: i64,
}

impl Witness {
    /// `value ≥ d/(2√2)`, checked as `8·value² ≥ d²`.
    pub fn meets_bound(&self, d: usize) -> bool {
        8 * (self.value as i128).pow(2) >= (d as i128).pow(2)
    }

    /// `value ≥ d/(2√6)`, checked as `24·value² ≥ d²`. This is what
    /// [`variance_bound`](crate::game::variance_bound) guarantees against any
    /// minimizer; [`meets_bound`](Self::meets_bound) can fail on adversarial
    /// colorings.
    pub fn meets_variance_bound(&self, d: usize) -> bool {
        24 * (self.value as i128).pow(2) >= (d as i128).pow(2)
    }
}

/// `d/(2√2)`.
pub fn witness_bound(d: usize) -> f64 {
    d as f64 / (2.0 * 2f64.sqrt())
}

/// Play the two-entry maximizer against the coloring, then pick the
/// permutation attaining the seminorm of the final matrix.
pub fn witness(tree: &ColoringTree) -> Result<Witness> {
    let r = tree.radix();
    if r < 3 || r % 2 == 0 {
        return Err(Error::InvalidArgument(format!("witness needs odd r >= 3, got {r}")));
    }
    if r > BRUTE_FORCE_LIMIT {
        return Err(Error::LimitExceeded { what: format!("witness seminorm over S_{r}"), limit: BRUTE_FORCE_LIMIT as u64 });
    }
    let d = tree.depth();
    let transcript = run_game(&Minimizer::FromColoring(tree), &Maximizer::TwoEntry, r, d, 0)?;
    let a = transcript.rows();
    let (value, sigma) = seminorm(&transcript.final_matrix)?;
    let signed = edge_sum(tree, &sigma, &a)?;
    if signed.abs() != value {
        return Err(Error::Inconsistent(format!(
            "edge sum {signed} for sigma={sigma} a={a} disagrees with seminorm {value}"
        )));
    }
    Ok(Witness { sigma, a, signed, value })
}

/// A set of the Newman–Nikolov system `A_C⁺` with its imbalance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CyclicWitness {
    /// The full ground set `[3]^d`.
    FullSet { value: i64 },
    /// `E_{σ,a}` with `σ` cyclic.
    Edge { sigma: Permutation, a: DigitString, signed: i64, value: i64 },
}

impl CyclicWitness {
    pub fn value(&self) -> i64 {
        match self {
            CyclicWitness::FullSet { value } | CyclicWitness::Edge { value, .. } => *value,
        }
    }
}

/// `⌊d/(4√2)⌋`, the largest `q` with `32·q² ≤ d²`.
pub fn cyclic_bound(d: usize) -> i64 {
    let d2 = (d as i128).pow(2);
    let mut q = (d as f64 / (4.0 * 2f64.sqrt())).floor() as i128;
    while 32 * (q + 1).pow(2) <= d2 {
        q += 1;
    }
    while q > 0 && 32 * q.pow(2) > d2 {
        q -= 1;
    }
    q as i64
}

/// Witness in `A_C⁺` for `r = 3`: the full set when `|χ(ε)| ≥ d/(4√2)`,
/// otherwise whichever of `E_{σ,a}`, `E_{τ∘σ,a}` has cyclic permutation,
/// using `χ(E_{τ∘σ,a}) = χ(ε) − χ(a) − χ(E_{σ,a})`.
pub fn cyclic_witness(tree: &ColoringTree) -> Result<CyclicWitness> {
    if tree.radix() != 3 {
        return Err(Error::InvalidArgument(format!("cyclic witness needs r = 3, got {}", tree.radix())));
    }
    let d = tree.depth();
    let root = tree.root();
    if 32 * (root as i128).pow(2) >= (d as i128).pow(2) {
        return Ok(CyclicWitness::FullSet { value: root.abs() });
    }
    let w = witness(tree)?;
    let cyclic = Permutation::cyclic(3);
    if cyclic.contains(&w.sigma) {
        return Ok(CyclicWitness::Edge { sigma: w.sigma, a: w.a, signed: w.signed, value: w.value });
    }
    let flipped = Permutation::reversal(3).compose(&w.sigma)?;
    debug_assert!(cyclic.contains(&flipped));
    let signed = root - tree.value(&w.a)? - w.signed;
    let direct = edge_sum(tree, &flipped, &w.a)?;
    if direct != signed {
        return Err(Error::Inconsistent(format!("complement sum {signed} but direct edge sum {direct}")));
    }
    Ok(CyclicWitness::Edge { sigma: flipped, a: w.a, signed, value: signed.abs() })
}

/// Seminorms reached by three maximizers against the greedy minimizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameSearchRow {
    pub two_entry: i64,
    pub greedy: i64,
    pub random: i64,
}

/// Exploratory search over game values: greedy minimizer against the
/// two-entry, greedy and random maximizers.
pub fn game_search(r: u8, d: usize, seed: u64) -> Result<GameSearchRow> {
    let play = |max: Maximizer| -> Result<i64> {
        let t = run_game(&Minimizer::Greedy, &max, r, d, seed)?;
        Ok(seminorm(&t.final_matrix)?.0)
    };
    Ok(GameSearchRow { two_entry: play(Maximizer::TwoEntry)?, greedy: play(Maximizer::Greedy)?, random: play(Maximizer::Random)? })
}
