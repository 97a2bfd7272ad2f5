//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test --test acceptance` (add `--release` for speed).

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use num_rational::BigRational;
use permdisc::adversary::{cyclic_bound, cyclic_witness, run_game, witness, CyclicWitness, Maximizer, Minimizer};
use permdisc::digits::{ColoringTree, DigitString, Permutation};
use permdisc::game::{moment_identity, pair, prefix_matrix, seminorm, GameMatrix};
use permdisc::nn::{edge_sum, edge_sum_enumerated, materialize};
use permdisc::oracle::exact_disc;
use permdisc::rms::{cancellation_profile, chain_report, local_search_disc2, martingale_profile};
use permdisc::seed::{derive_seed, rng};
use permdisc::setsystem::{chain_family, multiset_sum, SetSystem};
use permdisc::spectral::{kgl, weyl_union_check};
use rand::seq::SliceRandom;
use rand::Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_tree(r: u8, d: usize, s: u64) -> ColoringTree {
    ColoringTree::random(r, d, &mut rng(s)).unwrap()
}

fn seminorm_edge_identity() -> Check {
    let perms = Permutation::all(3);
    let mut pairs = 0u64;
    for d in 1..=5 {
        for t in 0..25 {
            let tree = random_tree(3, d, derive_seed(101, (d * 100 + t) as u64));
            for rank in 0..3usize.pow(d as u32) {
                let a = DigitString::from_rank(3, d, rank);
                let m = prefix_matrix(&tree, &a).unwrap();
                for sigma in &perms {
                    let e = edge_sum(&tree, sigma, &a).unwrap();
                    let p = pair(sigma, &m).unwrap();
                    ensure(e == p, || format!("d={d} trial={t} sigma={sigma} a={a}: edge {e} pair {p}"))?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} (σ,a) pairs equal"))
}

fn prop_guarantee() -> Check {
    let mut worst = Vec::new();
    for d in [4usize, 8, 12] {
        let mut min = i64::MAX;
        for t in 0..100 {
            let w = witness(&random_tree(3, d, derive_seed(202, (d * 1000 + t) as u64))).unwrap();
            ensure(8 * (w.value as i128).pow(2) >= (d as i128).pow(2), || format!("d={d} trial={t}: value {}", w.value))?;
            min = min.min(w.value);
        }
        worst.push(format!("d={d} min value {min}"));
    }
    Ok(worst.join(", "))
}

fn cor_guarantee() -> Check {
    let d = 12;
    let cyclic = Permutation::cyclic(3);
    let (mut full, mut min) = (0, i64::MAX);
    for t in 0..100 {
        let tree = random_tree(3, d, derive_seed(303, t));
        let w = cyclic_witness(&tree).unwrap();
        ensure(w.value() >= 2 && cyclic_bound(d) == 2, || format!("trial {t}: value {}", w.value()))?;
        min = min.min(w.value());
        match w {
            CyclicWitness::FullSet { value } => {
                ensure(value == tree.root().abs(), || format!("trial {t}: full-set value"))?;
                full += 1;
            }
            CyclicWitness::Edge { sigma, a, signed, .. } => {
                ensure(cyclic.contains(&sigma) && a.len() == d, || format!("trial {t}: {sigma} not cyclic"))?;
                let direct = edge_sum_enumerated(&tree, &sigma, &a).unwrap();
                ensure(direct == signed, || format!("trial {t}: enumerated {direct} vs {signed}"))?;
            }
        }
    }
    Ok(format!("min value {min}, {full} full-set witnesses"))
}

fn two_entry_vs_scripts() -> Check {
    let d = 20;
    let mut g = rng(404);
    for s in 0..1000 {
        let r = g.gen_range(3..=7u8);
        let script: Vec<Vec<i64>> = (0..d).map(|_| (0..r).map(|_| 2 * g.gen_range(-5..5) + 1).collect()).collect();
        let tr = run_game(&Minimizer::Scripted(script), &Maximizer::TwoEntry, r, d, 0).unwrap();
        let a = tr.final_matrix.antisymmetric_part();
        let two = a[(1, r)].abs() + a[(2, r)].abs();
        ensure(two >= d as i64, || format!("script {s}: |A_1r|+|A_2r| = {two}"))?;
        ensure(a.frobenius_sq() >= (d as i128).pow(2), || format!("script {s}: frobenius² {}", a.frobenius_sq()))?;
    }
    Ok("1000 scripts, r in 3..=7".into())
}

fn random_matrix(g: &mut impl Rng, r: u8) -> GameMatrix {
    let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..r).map(|_| g.gen_range(-6..=6)).collect()).collect();
    GameMatrix::from_rows(&rows).unwrap()
}

fn antisymmetric_identity() -> Check {
    let mut g = rng(505);
    let (mut bad, mut total, mut example) = (0, 0, None);
    for r in 2..=6u8 {
        for _ in 0..100 {
            let a = random_matrix(&mut g, r).antisymmetric_part();
            let mom = moment_identity(&a).unwrap();
            // r!·E[(σ·A)²] = r!·‖A‖_F²/2
            if 2 * mom.second_moment_num != mom.scale * a.frobenius_sq() {
                bad += 1;
                example.get_or_insert_with(|| format!("r={r}: r!E={} vs r!F²/2={}", mom.second_moment_num, mom.scale * a.frobenius_sq() / 2));
            }
            total += 1;
        }
    }
    ensure(bad == 0, || format!("{bad}/{total} matrices violate it, e.g. {}", example.unwrap_or_default()))?;
    Ok(format!("{total} matrices"))
}

fn decomposition_identity() -> Check {
    let mut g = rng(606);
    let (mut bad, mut total, mut corrected) = (0, 0, 0);
    for r in 2..=5u8 {
        for _ in 0..100 {
            let mom = moment_identity(&random_matrix(&mut g, r)).unwrap();
            bad += usize::from(!mom.decomposition_holds);
            corrected += usize::from(mom.row_sum_form_holds);
            total += 1;
        }
    }
    ensure(bad == 0, || format!("{bad}/{total} matrices violate it (row-sum form holds for {corrected}/{total})"))?;
    Ok(format!("{total} matrices"))
}

/// Largest acyclic edge set by DP over vertex subsets: the top vertex of `S`
/// keeps its edges into the rest of `S`.
fn max_acyclic(r: usize, adj: &[Vec<bool>]) -> i64 {
    let mut f = vec![0i64; 1 << r];
    for s in 1usize..1 << r {
        f[s] = (0..r)
            .filter(|&v| s >> v & 1 == 1)
            .map(|v| {
                let rest = s & !(1 << v);
                f[rest] + (0..r).filter(|&u| rest >> u & 1 == 1 && adj[v][u]).count() as i64
            })
            .max()
            .unwrap();
    }
    f[(1 << r) - 1]
}

fn acyclic_subgraph() -> Check {
    let mut g = rng(707);
    for t in 0..50 {
        let r = g.gen_range(2..=6usize);
        let p = g.gen_range(0.2..0.9);
        let adj: Vec<Vec<bool>> = (0..r).map(|i| (0..r).map(|j| i != j && g.gen_bool(p)).collect()).collect();
        let edges: Vec<(u8, u8)> =
            (0..r).flat_map(|i| (0..r).map(move |j| (i, j))).filter(|&(i, j)| adj[i][j]).map(|(i, j)| (i as u8 + 1, j as u8 + 1)).collect();
        let sn = seminorm(&GameMatrix::adjacency(r as u8, &edges)).unwrap().0;
        let brute = max_acyclic(r, &adj);
        ensure(sn == brute, || format!("digraph {t} (r={r}): seminorm {sn}, brute force {brute}"))?;
    }
    Ok("50 digraphs".into())
}

fn random_chain(n: usize, g: &mut impl Rng) -> SetSystem {
    let mut p: Vec<usize> = (1..=n).collect();
    p.shuffle(g);
    chain_family(&p).unwrap()
}

fn oracle_ground_truth() -> Check {
    let s3 = materialize(&Permutation::all(3), 3, 1, false).unwrap();
    let (v, _) = exact_disc(&s3).unwrap();
    ensure(v == 2, || format!("exact_disc(A_S3, d=1) = {v}"))?;
    let mut g = rng(808);
    for n in 1..=12 {
        for _ in 0..10 {
            let (v, _) = exact_disc(&random_chain(n, &mut g)).unwrap();
            ensure(v <= 1, || format!("1-permutation family on [{n}] has disc {v}"))?;
        }
    }
    for n in 1..=10 {
        for _ in 0..10 {
            let sys = multiset_sum(&[random_chain(n, &mut g), random_chain(n, &mut g)]).unwrap();
            let (v, _) = exact_disc(&sys).unwrap();
            ensure(v <= 1, || format!("2-permutation family on [{n}] has disc {v}"))?;
        }
    }
    Ok("disc(A_S3, d=1) = 2; 120 one- and 100 two-permutation families have disc ≤ 1".into())
}

fn rms_chain() -> Check {
    let s3 = Permutation::all(3);
    let links = ["i", "ii", "variance", "iii_a", "iii_b", "iii_c"];
    let mut failures: Vec<String> = Vec::new();
    let mut mins: Vec<(usize, BigRational)> = Vec::new();
    let mut i_var_ok = true;
    for d in [4usize, 6, 8] {
        let mut trees: Vec<ColoringTree> = (0..50).map(|t| random_tree(3, d, derive_seed(909, (d * 100 + t) as u64))).collect();
        for t in 0..5u64 {
            let start = random_tree(3, d, derive_seed(910, d as u64 * 100 + t));
            trees.push(local_search_disc2(&start, &s3, 50, derive_seed(911, t)).unwrap());
        }
        let mut min: Option<BigRational> = None;
        let mut bad = std::collections::BTreeMap::<&str, usize>::new();
        for tree in &trees {
            let rep = chain_report(tree).unwrap();
            for id in links.iter().copied().chain(["iv", "big_entry"]) {
                if rep.link(id).is_some_and(|l| !l.pass) {
                    *bad.entry(id).or_default() += 1;
                }
            }
            i_var_ok &= rep.link("i_var").unwrap().pass;
            if min.as_ref().is_none_or(|m| rep.mean_edge_square < *m) {
                min = Some(rep.mean_edge_square.clone());
            }
        }
        for (id, n) in bad {
            failures.push(format!("d={d}: link {id} failed on {n}/{}", trees.len()));
        }
        mins.push((d, min.unwrap()));
    }
    let monotone = mins.windows(2).all(|w| w[0].1 <= w[1].1);
    let shown: Vec<String> = mins.iter().map(|(d, m)| format!("d={d}: {:.3}", permdisc::rms::ratio_to_f64(m))).collect();
    if !monotone {
        failures.push(format!("min E[χ(E)²] not nondecreasing ({})", shown.join(", ")));
    }
    let note = format!("min E[χ(E)²] {}; 1/24 link {}", shown.join(", "), if i_var_ok { "passes everywhere" } else { "fails" });
    ensure(failures.is_empty(), || format!("{}; {note}", failures.join("; ")))?;
    Ok(note)
}

fn cancellation_martingale() -> Check {
    let mut trees = 0;
    for d in 0..=10 {
        for t in 0..5 {
            let tree = random_tree(3, d, derive_seed(1010, (d * 10 + t) as u64));
            let p = cancellation_profile(&tree);
            ensure(p.identity_holds(), || format!("d={d}: C̄ᵢ = 3m̄ᵢ₊₁ − m̄ᵢ fails"))?;
            ensure(p.telescoped_holds(), || format!("d={d}: telescoped sum fails"))?;
            let m = martingale_profile(&tree).unwrap();
            ensure(m.drift_check, || format!("d={d}: nonzero drift"))?;
            ensure(m.variance_identity_holds(), || format!("d={d}: E[Y²] differs from the summed increments"))?;
            trees += 1;
        }
    }
    Ok(format!("{trees} trees, d ≤ 10"))
}

fn spectral_checks() -> Check {
    let id = SetSystem::from_sets(7, (1..=7).map(|i| vec![i])).unwrap();
    let k = kgl(&id).unwrap().kgl_value;
    let expect = 1.0 / (std::f64::consts::E * (8.0 * std::f64::consts::PI).sqrt());
    ensure((k - expect).abs() <= 1e-12, || format!("kgl(I) = {k}, expected {expect}"))?;
    let mut g = rng(1111);
    let mut worst_gap = 0f64;
    for n in [3, 8, 16] {
        let sys = multiset_sum(&[random_chain(n, &mut g), random_chain(n, &mut g), random_chain(n, &mut g)]).unwrap();
        let gap = kgl(&sys).unwrap().trace_gap();
        ensure(gap <= 1e-9, || format!("trace gap {gap} on n={n}"))?;
        worst_gap = worst_gap.max(gap);
    }
    let three: Vec<SetSystem> = (0..3).map(|_| random_chain(8, &mut g)).collect();
    let weyl = weyl_union_check(&three).unwrap();
    ensure(weyl.holds(1e-8), || format!("Weyl violation {} at l={:?}", weyl.max_violation, weyl.worst_l))?;
    Ok(format!("kgl(I) error {:.1e}, trace gap {worst_gap:.1e}, Weyl violation {:.1e}", (k - expect).abs(), weyl.max_violation))
}

fn run_cli(args: &[String]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = permdisc::cli::run(std::iter::once("permdisc".to_string()).chain(args.iter().cloned()), &mut out, &mut err);
    (code, out)
}

fn determinism() -> Check {
    let dir: PathBuf = std::env::temp_dir().join(format!("permdisc-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let sys = dir.join("s3d1.txt");
    let chain = dir.join("chains.txt");
    let coloring = dir.join("coloring.txt");
    std::fs::write(&sys, materialize(&Permutation::all(3), 3, 1, false).unwrap().to_file_string()).unwrap();
    let mut g = rng(1212);
    let chains = multiset_sum(&[random_chain(18, &mut g), random_chain(18, &mut g)]).unwrap();
    std::fs::write(&chain, chains.to_file_string()).unwrap();
    std::fs::write(&coloring, random_tree(3, 6, 1213).to_coloring_string().unwrap()).unwrap();
    let p = |x: &PathBuf| x.to_string_lossy().into_owned();

    let commands: Vec<Vec<String>> = [
        vec!["gen-nn", "--r", "3", "--d", "3", "--perms", "symmetric", "--plus"],
        vec!["gen-nn", "--r", "4", "--d", "2", "--perms", "cyclic"],
        vec!["witness", "--d", "10", "--random", "--seed", "7"],
        vec!["witness", "--d", "12", "--random", "--seed", "7", "--cyclic"],
        vec!["witness", "--coloring", &p(&coloring)],
        vec!["experiment", "--mode", "rms-chain", "--dmax", "6", "--trials", "4", "--seed", "2"],
        vec!["experiment", "--mode", "game-search", "--dmax", "8", "--trials", "4", "--seed", "3", "--r", "5"],
        vec!["experiment", "--mode", "disc2-scaling", "--dmax", "7", "--trials", "3", "--seed", "1"],
        vec!["oracle", "--system", &p(&sys)],
        vec!["oracle", "--system", &p(&sys), "--measure", "disc2"],
        vec!["spectral", "--system", &p(&chain), "--budget", "6", "--seed", "4"],
        vec!["spectral", "--system", &p(&sys)],
    ]
    .into_iter()
    .map(|c| c.into_iter().map(String::from).collect())
    .collect();

    for cmd in &commands {
        let mut runs = Vec::new();
        for threads in ["1", "4", "4"] {
            let mut args = vec!["--threads".to_string(), threads.to_string()];
            args.extend(cmd.iter().cloned());
            runs.push(run_cli(&args));
        }
        ensure(runs[0].0 != 2 && runs[0].0 != 3, || format!("`{}` exited {}", cmd.join(" "), runs[0].0))?;
        ensure(runs.windows(2).all(|w| w[0] == w[1]), || format!("`{}` output differs between runs", cmd.join(" ")))?;
    }

    // file outputs
    let mut files = Vec::new();
    for threads in ["1", "4"] {
        let out = dir.join(format!("gen-{threads}.txt"));
        let csv = dir.join(format!("exp-{threads}.csv"));
        run_cli(&["--threads", threads, "gen-nn", "--r", "3", "--d", "2", "--perms", "symmetric", "--out", &p(&out)].map(String::from));
        run_cli(&["--threads", threads, "experiment", "--mode", "disc2-scaling", "--dmax", "5", "--trials", "2", "--csv", &p(&csv)].map(String::from));
        files.push((std::fs::read(&out).map_err(|e| e.to_string())?, std::fs::read(&csv).map_err(|e| e.to_string())?));
    }
    ensure(files[0] == files[1], || "file outputs differ between thread counts".into())?;
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} commands × 3 runs (1 and 4 threads) plus 2 file outputs byte-identical", commands.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("seminorm-edge identity", seminorm_edge_identity),
        ("disc guarantee 8v² ≥ d²", prop_guarantee),
        ("cyclic witness ≥ ⌊d/(4√2)⌋", cor_guarantee),
        ("two-entry adversary", two_entry_vs_scripts),
        ("antisymmetric moment identity", antisymmetric_identity),
        ("decomposition identity", decomposition_identity),
        ("acyclic-subgraph correspondence", acyclic_subgraph),
        ("oracle ground truth", oracle_ground_truth),
        ("rms chain", rms_chain),
        ("cancellation and martingale identities", cancellation_martingale),
        ("spectral", spectral_checks),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
