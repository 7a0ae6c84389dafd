use std::path::Path;
use std::process::{Command, Output};

use projgeom::io::{parse_all, write_all};
use projgeom::linalg::spectral_norm;
use projgeom::random::{random_projection, rng_from_seed, structured_pair, PairSpec};
use projgeom::ComplexMatrix;
use serde_json::Value;
use tempfile::TempDir;

fn projgeom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_projgeom")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_pair(dir: &TempDir, name: &str, p: &ComplexMatrix, q: &ComplexMatrix) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, write_all([p, q])).unwrap();
    path.to_str().unwrap().to_string()
}

fn without_elapsed(report: &str) -> Value {
    let mut v: Value = serde_json::from_str(report).unwrap();
    v.as_object_mut().unwrap().remove("elapsed");
    v
}

fn equal_rank_pair(seed: u64) -> (ComplexMatrix, ComplexMatrix) {
    let mut rng = rng_from_seed(seed);
    let spec = PairSpec { d11: 1, d00: 0, d10: 1, d01: 1, angles: vec![0.3, 1.2] };
    let (p, q) = structured_pair(&mut rng, &spec);
    (p.into_matrix(), q.into_matrix())
}

#[test]
fn lemmas_suite_passes() {
    let out = projgeom(&["check", "lemmas", "--n", "8", "--trials", "100", "--seed", "42"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["failures"], 0);
    assert_eq!(report["trials"], 100);
    assert_eq!(report["seed"], 42);
    assert!(report["worst_residuals"]["lemmas.sum_difference_identity"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn corrupt_input_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("corrupt.txt");
    std::fs::write(&path, "cplxmat 2 2\n1 0\n0 0\nnot-a-number 0\n").unwrap();
    let file = path.to_str().unwrap();
    let out = projgeom(&["check", "midpoint", "--n", "2", "--trials", "1", "--seed", "1", "--input", file]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());
    assert_eq!(code(&projgeom(&["midpoint", "--input", file])), 2);
    assert_eq!(code(&projgeom(&["midpoint", "--input", "/nonexistent/pair.txt"])), 2);
}

#[test]
fn reports_are_deterministic() {
    let args = ["check", "all", "--n", "4", "--trials", "10", "--seed", "7"];
    let (a, b) = (projgeom(&args), projgeom(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(without_elapsed(&stdout(&a)), without_elapsed(&stdout(&b)));
    let text_a: Vec<_> = stdout(&a).lines().filter(|l| !l.contains("elapsed")).map(String::from).collect();
    let text_b: Vec<_> = stdout(&b).lines().filter(|l| !l.contains("elapsed")).map(String::from).collect();
    assert_eq!(text_a, text_b);
    let other = projgeom(&["check", "all", "--n", "4", "--trials", "10", "--seed", "8"]);
    assert_ne!(without_elapsed(&stdout(&a)), without_elapsed(&stdout(&other)));
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(code(&projgeom(&["check", "lemmas", "--n", "65"])), 2);
    assert_eq!(code(&projgeom(&["check", "lemmas", "--trials", "0"])), 2);
    assert_eq!(code(&projgeom(&["check", "lemmas", "--tol", "rank_tol=2"])), 2);
    assert_eq!(code(&projgeom(&["check", "lemmas", "--tol", "speed=0.1"])), 2);
    assert_eq!(code(&projgeom(&["check", "nonsense"])), 2);
    assert_eq!(code(&projgeom(&["frobnicate"])), 2);
}

#[test]
fn check_accepts_input_pairs_and_output_file() {
    let dir = TempDir::new().unwrap();
    let (p, q) = equal_rank_pair(3);
    let input = write_pair(&dir, "pair.txt", &p, &q);
    let report_path = dir.path().join("report.json");
    let out = projgeom(&[
        "check",
        "midpoint",
        "--n",
        "3",
        "--trials",
        "2",
        "--seed",
        "1",
        "--input",
        &input,
        "--output",
        report_path.to_str().unwrap(),
        "--tol",
        "residual_tol=1e-9",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["input_pairs"], 1);
    assert_eq!(report["tolerances"]["residual_tol"], 1e-9);
}

#[test]
fn midpoint_command_finds_common_ball() {
    let dir = TempDir::new().unwrap();
    let (p, q) = equal_rank_pair(11);
    let input = write_pair(&dir, "pair.txt", &p, &q);
    let out = projgeom(&["midpoint", "--input", &input]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = parse_all(&stdout(&out)).unwrap().remove(0);
    assert!(spectral_norm(&(&p - &r)) <= 0.70710679);
    assert!(spectral_norm(&(&q - &r)) <= 0.70710679);
}

#[test]
fn domain_failures_exit_one() {
    let dir = TempDir::new().unwrap();
    let p = random_projection(4, 1, 1).unwrap().into_matrix();
    let q = random_projection(4, 2, 2).unwrap().into_matrix();
    let input = write_pair(&dir, "ranks.txt", &p, &q);
    assert_eq!(code(&projgeom(&["midpoint", "--input", &input])), 1);
    let far = write_pair(
        &dir,
        "far.txt",
        &ComplexMatrix::from_diagonal(&[1.0, 0.0]),
        &ComplexMatrix::from_diagonal(&[0.0, 1.0]),
    );
    assert_eq!(code(&projgeom(&["path", "--input", &far])), 1);
}

#[test]
fn halmos_prints_sorted_angles() {
    let dir = TempDir::new().unwrap();
    let (p, q) = equal_rank_pair(5);
    let input = write_pair(&dir, "pair.txt", &p, &q);
    let basis = dir.path().join("u.txt");
    let out = projgeom(&["halmos", "--input", &input, "--basis", basis.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let angles: Vec<f64> = stdout(&out).lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(angles.len(), 2);
    assert!((angles[0] - 0.3).abs() < 1e-10 && (angles[1] - 1.2).abs() < 1e-10);
    for line in stdout(&out).lines() {
        let mantissa = line.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.replace('.', "").len(), 17);
    }
    assert_eq!(String::from_utf8_lossy(&out.stderr).trim(), "d11 1 d00 0 d10 1 d01 1 generic 4");
    assert_eq!(parse_all(&std::fs::read_to_string(basis).unwrap()).unwrap()[0].rows(), 7);
}

#[test]
fn path_emits_samples_plus_one_blocks() {
    let dir = TempDir::new().unwrap();
    let mut rng = rng_from_seed(2);
    let spec = PairSpec { d11: 1, d00: 1, d10: 0, d01: 0, angles: vec![0.5] };
    let (p, q) = structured_pair(&mut rng, &spec);
    let input = write_pair(&dir, "pair.txt", p.matrix(), q.matrix());
    let out_path = dir.path().join("path.txt");
    let out = projgeom(&["path", "--input", &input, "--samples", "8", "--output", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let blocks = parse_all(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(blocks.len(), 9);
    assert!((&blocks[0] - p.matrix()).max_abs() <= 1e-10);
    assert!((&blocks[8] - q.matrix()).max_abs() <= 1e-10);
}

fn chart(args: &[&str], input: &Path) -> Output {
    let mut full = vec!["chart"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--input", input.to_str().unwrap()]);
    projgeom(&full)
}

#[test]
fn chart_commands_round_trip() {
    let dir = TempDir::new().unwrap();
    let q = random_projection(5, 2, 9).unwrap().into_matrix();
    let q_file = dir.path().join("q.txt");
    std::fs::write(&q_file, write_all([&q])).unwrap();

    let coords = chart(&["coords", "--index", "1,2"], &q_file);
    assert_eq!(code(&coords), 0);
    let a = parse_all(&stdout(&coords)).unwrap().remove(0);
    assert_eq!((a.rows(), a.cols()), (3, 2));

    let a_file = dir.path().join("a.txt");
    std::fs::write(&a_file, stdout(&coords)).unwrap();
    let back = chart(&["reconstruct", "--index", "{1,2}"], &a_file);
    assert_eq!(code(&back), 0);
    let q2 = parse_all(&stdout(&back)).unwrap().remove(0);
    assert!(spectral_norm(&(&q2 - &q)) <= 1e-8);

    let selected = chart(&["coords"], &q_file);
    assert_eq!(code(&selected), 0);
    assert_eq!(parse_all(&stdout(&selected)).unwrap()[0].rows(), 3);

    assert_eq!(code(&chart(&["coords", "--index", "1,9"], &q_file)), 2);
    assert_eq!(code(&chart(&["reconstruct"], &q_file)), 2);
}

#[test]
fn dedekind_commands() {
    let demo = projgeom(&["dedekind", "demo"]);
    assert_eq!(code(&demo), 0);
    let text = stdout(&demo);
    assert!(text.contains("p = vals mod 3 {0} +{} -{}"));
    assert!(text.contains("q = vals mod 3 {0,1} +{} -{}"));
    assert_eq!(text.lines().filter(|l| l.ends_with("true")).count(), 4);
    let family = projgeom(&["dedekind", "family", "--k", "3"]);
    assert_eq!(code(&family), 0);
    assert_eq!(stdout(&family).lines().count(), 3);
}
