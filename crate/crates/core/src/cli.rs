//! Command-line front end.
//!
//! ```text
//! permdisc gen-nn --r 3 --d 2 --perms symmetric [--plus] [--out FILE]
//! permdisc witness --d 8 (--coloring FILE | --random --seed 7) [--cyclic] [--r 3]
//! permdisc experiment --mode rms-chain|game-search|disc2-scaling --dmax 8 --trials 3 --seed 2 [--csv FILE]
//! permdisc oracle --system FILE [--measure disc|disc2]
//! permdisc spectral --system FILE [--budget 16] [--seed 0]
//! ```
//!
//! Exit codes: 0 success or bound met, 1 bound violated, 2 usage error or
//! bad input, 3 I/O error. All output is buffered, so a command prints the
//! same bytes whatever `--threads` is.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::adversary::{cyclic_bound, cyclic_witness, game_search, witness, witness_bound, CyclicWitness};
use crate::digits::{leaf_count, ColoringTree, Permutation};
use crate::nn::{materialize, PermSet};
use crate::rms::{chain_report, disc2_exact, local_search_disc2, ChainReport};
use crate::setsystem::{MeanSquare, SetSystem};
use crate::{oracle, seed, spectral, Error};

/// Largest `r^d` the witness and experiment commands will build.
pub const TREE_LEAF_LIMIT: usize = 14_348_907;

#[derive(Parser, Debug)]
#[command(name = "permdisc", version, about = "Discrepancy lab for permutation set systems")]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the system ([r]^d, A_P) to a file.
    GenNn(GenNn),
    /// Certify a large set for one coloring of [r]^d.
    Witness(WitnessArgs),
    /// Seeded experiment grid over d = 1..=dmax, emitted as CSV.
    Experiment(Experiment),
    /// Exhaustive disc or disc2 of a system file.
    Oracle(OracleArgs),
    /// kgl, detlb2 and detlb of a system file, as CSV.
    Spectral(SpectralArgs),
}

#[derive(Args, Debug)]
struct GenNn {
    #[arg(long)]
    r: u8,
    #[arg(long)]
    d: usize,
    /// cyclic, symmetric, or list:231;312
    #[arg(long)]
    perms: String,
    /// Add the full ground set.
    #[arg(long)]
    plus: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WitnessArgs {
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 3)]
    r: u8,
    /// Leaf coloring file: one line of r^d '+'/'-' characters.
    #[arg(long, conflicts_with = "random")]
    coloring: Option<PathBuf>,
    #[arg(long, requires = "seed")]
    random: bool,
    #[arg(long)]
    seed: Option<u64>,
    /// Witness in A_C+ instead of A_{S_r} (r = 3).
    #[arg(long)]
    cyclic: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    RmsChain,
    GameSearch,
    Disc2Scaling,
}

#[derive(Args, Debug)]
struct Experiment {
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long)]
    dmax: usize,
    #[arg(long)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Radix for game-search.
    #[arg(long, default_value_t = 3)]
    r: u8,
    /// Local-search passes per coloring in disc2-scaling.
    #[arg(long, default_value_t = 8)]
    passes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Measure {
    Disc,
    Disc2,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    system: PathBuf,
    #[arg(long, value_enum, default_value_t = Measure::Disc)]
    measure: Measure,
}

#[derive(Args, Debug)]
struct SpectralArgs {
    #[arg(long)]
    system: PathBuf,
    #[arg(long, default_value_t = 16)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| execute(cli.command)),
            Err(e) => Err(Error::InvalidArgument(e.to_string())),
        },
        None => execute(cli.command),
    };
    match result {
        Ok((text, code)) => match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
            Ok(()) => code,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                3
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Io(_) => 3,
                _ => 2,
            }
        }
    }
}

type Outcome = crate::Result<(String, i32)>;

fn execute(command: Command) -> Outcome {
    match command {
        Command::GenNn(a) => gen_nn(a),
        Command::Witness(a) => witness_cmd(a),
        Command::Experiment(a) => experiment(a),
        Command::Oracle(a) => oracle_cmd(a),
        Command::Spectral(a) => spectral_cmd(a),
    }
}

fn read(path: &Path) -> crate::Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn gen_nn(a: GenNn) -> Outcome {
    let perms = a.perms.parse::<PermSet>()?.permutations(a.r)?;
    let sys = materialize(&perms, a.r, a.d, a.plus)?;
    let text = sys.to_file_string();
    match a.out {
        Some(path) => {
            std::fs::write(&path, text)?;
            Ok((format!("sets={}\nground={}\n", sys.len(), sys.ground_size()), 0))
        }
        None => Ok((text, 0)),
    }
}

fn witness_cmd(a: WitnessArgs) -> Outcome {
    let tree = match (&a.coloring, a.random) {
        (Some(path), _) => {
            let t = ColoringTree::parse_coloring(a.r, &read(path)?)?;
            if let Some(d) = a.d.filter(|&d| d != t.depth()) {
                return Err(Error::InvalidArgument(format!("--d {d} but the coloring has depth {}", t.depth())));
            }
            t
        }
        (None, true) => {
            let d = a.d.ok_or_else(|| Error::InvalidArgument("--random needs --d".into()))?;
            let n = leaf_count(a.r, d)?;
            if n > TREE_LEAF_LIMIT {
                return Err(Error::LimitExceeded { what: format!("r^d = {n} leaves"), limit: TREE_LEAF_LIMIT as u64 });
            }
            ColoringTree::random(a.r, d, &mut seed::rng(a.seed.unwrap_or(0)))?
        }
        (None, false) => return Err(Error::InvalidArgument("give --coloring FILE or --random --seed N".into())),
    };
    let d = tree.depth();
    let mut out = format!("d={d}\n");
    let met = if a.cyclic {
        let w = cyclic_witness(&tree)?;
        match &w {
            CyclicWitness::FullSet { value } => {
                let _ = writeln!(out, "set=full\nvalue={value}");
            }
            CyclicWitness::Edge { sigma, a, signed, value } => {
                let _ = writeln!(out, "sigma={sigma}\na={a}\nsigned={signed}\nvalue={value}");
            }
        }
        let bound = cyclic_bound(d);
        let _ = writeln!(out, "bound={bound} (floor(d/(4*sqrt(2))))");
        w.value() >= bound
    } else {
        let w = witness(&tree)?;
        let _ = writeln!(out, "sigma={}\na={}\nsigned={}\nvalue={}", w.sigma, w.a, w.signed, w.value);
        let _ = writeln!(out, "bound={:.12} (d/(2*sqrt(2)))", witness_bound(d));
        w.meets_bound(d)
    };
    let _ = writeln!(out, "status={}", if met { "met" } else { "violated" });
    Ok((out, if met { 0 } else { 1 }))
}

fn trial_tree(r: u8, d: usize, base: u64, trial: usize) -> crate::Result<ColoringTree> {
    let n = leaf_count(r, d)?;
    if n > TREE_LEAF_LIMIT {
        return Err(Error::LimitExceeded { what: format!("r^d = {n} leaves"), limit: TREE_LEAF_LIMIT as u64 });
    }
    ColoringTree::random(r, d, &mut seed::rng(seed::derive_seed(base, seed::grid_index(d, trial))))
}

const CHAIN_COLUMNS: [&str; 11] = ["i", "i_var", "ii", "variance", "iii_a", "iii_b", "iii_c", "iv", "big_entry", "i_paper", "iii_paper"];

fn chain_row(d: usize, trial: usize, rep: &ChainReport) -> String {
    let mut row = format!("{d},{trial},{},{},{}", rep.root, rep.mean_edge_square.numer(), rep.mean_edge_square.denom());
    for id in CHAIN_COLUMNS {
        let cell = rep.link(id).map_or("na".to_string(), |l| l.pass.to_string());
        row.push(',');
        row.push_str(&cell);
    }
    let _ = write!(row, ",{}", rep.all_pass());
    row
}

fn reduced(ms: &MeanSquare) -> BigRational {
    BigRational::new(BigInt::from(ms.sum_squares), BigInt::from(ms.count))
}

fn experiment(a: Experiment) -> Outcome {
    let grid: Vec<(usize, usize)> = (1..=a.dmax).flat_map(|d| (0..a.trials).map(move |t| (d, t))).collect();
    let s3 = Permutation::all(3);
    let mut csv = String::new();
    let mut code = 0;
    match a.mode {
        Mode::RmsChain => {
            csv.push_str("d,trial,root,mean_edge_sq_num,mean_edge_sq_den,");
            csv.push_str(&CHAIN_COLUMNS.join(","));
            csv.push_str(",all_pass\n");
            let rows = grid
                .par_iter()
                .map(|&(d, t)| chain_report(&trial_tree(3, d, a.seed, t)?).map(|rep| (chain_row(d, t, &rep), rep.all_pass())))
                .collect::<crate::Result<Vec<_>>>()?;
            for (row, pass) in rows {
                csv.push_str(&row);
                csv.push('\n');
                if !pass {
                    code = 1;
                }
            }
        }
        Mode::GameSearch => {
            csv.push_str("d,trial,r,two_entry,greedy,random\n");
            let rows = grid
                .par_iter()
                .map(|&(d, t)| game_search(a.r, d, seed::derive_seed(a.seed, seed::grid_index(d, t))).map(|g| (d, t, g)))
                .collect::<crate::Result<Vec<_>>>()?;
            for (d, t, g) in rows {
                let _ = writeln!(csv, "{d},{t},{},{},{},{}", a.r, g.two_entry, g.greedy, g.random);
            }
        }
        Mode::Disc2Scaling => {
            csv.push_str("d,trial,disc2_sq_num,disc2_sq_den\n");
            let rows = grid
                .par_iter()
                .map(|&(d, t)| {
                    let start = trial_tree(3, d, a.seed, t)?;
                    let ls_seed = seed::derive_seed(a.seed ^ seed::GOLDEN, seed::grid_index(d, t));
                    let opt = local_search_disc2(&start, &s3, a.passes, ls_seed)?;
                    Ok((d, t, reduced(&disc2_exact(&opt, &s3)?)))
                })
                .collect::<crate::Result<Vec<_>>>()?;
            for (d, t, q) in rows {
                let _ = writeln!(csv, "{d},{t},{},{}", q.numer(), q.denom());
            }
        }
    }
    match a.csv {
        Some(path) => {
            std::fs::write(&path, csv)?;
            Ok((format!("rows={}\n", grid.len()), code))
        }
        None => Ok((csv, code)),
    }
}

fn coloring_string(chi: &[i8]) -> String {
    chi.iter().map(|&c| if c > 0 { '+' } else { '-' }).collect()
}

fn oracle_cmd(a: OracleArgs) -> Outcome {
    let sys = SetSystem::parse_file(&read(&a.system)?)?;
    let out = match a.measure {
        Measure::Disc => {
            let (v, chi) = oracle::exact_disc(&sys)?;
            format!("disc={v}\ncoloring={}\n", coloring_string(&chi))
        }
        Measure::Disc2 => {
            let (ms, chi) = oracle::exact_disc2(&sys)?;
            let q = reduced(&ms);
            format!("disc2_sq={}/{}\ndisc2={:.12}\ncoloring={}\n", q.numer(), q.denom(), ms.value(), coloring_string(&chi))
        }
    };
    Ok((out, 0))
}

fn spectral_cmd(a: SpectralArgs) -> Outcome {
    let sys = SetSystem::parse_file(&read(&a.system)?)?;
    let rep = spectral::kgl(&sys)?;
    let d2 = spectral::detlb2_search(&sys, a.budget, a.seed)?;
    let d1 = spectral::detlb_search(&sys, a.budget, a.seed)?;
    let mut out = String::from("quantity,value,l_or_k,gamma_size,budget,seed\n");
    let _ = writeln!(out, "kgl,{:.12},{},{},,", rep.kgl_value, rep.argmax_l, sys.ground_size());
    let _ = writeln!(out, "detlb2,{:.12},,{},{},{}", d2.value, d2.gamma.len(), a.budget, a.seed);
    let _ = writeln!(out, "detlb,{:.12},{},,{},{}", d1.value, d1.k, a.budget, a.seed);
    let _ = writeln!(out, "trace_gap,{:.3e},,,,", rep.trace_gap());
    Ok((out, 0))
}
