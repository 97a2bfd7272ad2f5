use std::path::PathBuf;
use std::process::Command;

use permdisc::digits::ColoringTree;
use permdisc::setsystem::SetSystem;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_permdisc"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("permdisc-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn system_file_round_trips_through_the_binary() {
    let dir = scratch("round-trip");
    let path = dir.join("nn.txt");
    let status = bin().args(["gen-nn", "--r", "3", "--d", "2", "--perms", "list:123;231", "--plus", "--out"]).arg(&path).status().unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let sys = SetSystem::parse_file(&text).unwrap();
    assert_eq!((sys.ground_size(), sys.len()), (9, 19));
    assert_eq!(sys.to_file_string(), text);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn oracle_reads_generated_files() {
    let dir = scratch("oracle");
    let path = dir.join("s3.txt");
    let gen = bin().args(["gen-nn", "--r", "3", "--d", "1", "--perms", "symmetric"]).output().unwrap();
    std::fs::write(&path, &gen.stdout).unwrap();
    let out = bin().args(["oracle", "--system"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().next(), Some("disc=2"));
    let out = bin().args(["oracle", "--measure", "disc2", "--system"]).arg(&path).output().unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("disc2_sq=7/9\n"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn witness_reads_coloring_files() {
    let dir = scratch("witness");
    let path = dir.join("c.txt");
    let tree = ColoringTree::from_leaves(3, 2, vec![1, -1, 1, 1, 1, -1, -1, 1, 1]).unwrap();
    std::fs::write(&path, tree.to_coloring_string().unwrap()).unwrap();
    let out = bin().args(["witness", "--coloring"]).arg(&path).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("d=2\n"));
    assert_eq!(out.status.code(), Some(if text.contains("status=met") { 0 } else { 1 }));

    let out = bin().args(["witness", "--d", "3", "--coloring"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    std::fs::write(&path, "++-x+++++\n").unwrap();
    let out = bin().args(["witness", "--coloring"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(bin().args(["gen-nn", "--r", "3", "--d", "1", "--perms", "cyclik"]).output().unwrap().status.code(), Some(2));
    assert_eq!(bin().args(["oracle", "--system", "/nonexistent/sys.txt"]).output().unwrap().status.code(), Some(3));
    assert_eq!(bin().args(["experiment", "--mode", "nope", "--dmax", "1", "--trials", "1"]).output().unwrap().status.code(), Some(2));
    let out = bin().args(["experiment", "--mode", "disc2-scaling", "--dmax", "3", "--trials", "0", "--seed", "1"]).output().unwrap();
    assert_eq!(out.stdout, b"d,trial,disc2_sq_num,disc2_sq_den\n");
}

#[test]
fn spectral_csv_header() {
    let dir = scratch("spectral");
    let path = dir.join("chain.txt");
    std::fs::write(&path, SetSystem::from_sets(3, [vec![], vec![1], vec![1, 2], vec![1, 2, 3]]).unwrap().to_file_string()).unwrap();
    let out = bin().args(["spectral", "--system"]).arg(&path).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "quantity,value,l_or_k,gamma_size,budget,seed");
    assert!(lines[1].starts_with("kgl,"));
    assert!(lines[3].starts_with("detlb,1.000000000000,"));
    std::fs::remove_dir_all(dir).unwrap();
}
