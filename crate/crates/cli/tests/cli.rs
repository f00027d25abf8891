use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holeflow")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

const THETA_EVEN: &str = "vertices 2
edge 0 0 1 1
edge 1 0 1 1
edge 2 0 1 2
rot 0 0 1 2
rot 1 2 1 0
outer 0 +
hole 1 0 -
hole 2 1 -
hole 3 0 +
";

#[test]
fn validate_prints_the_canonical_form() {
    let o = run(&["validate", path_str(&fixture("t0_112_d2.txt"))]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("vertices 2\n"));
    assert!(!text.contains('#'));

    let dir = TempDir::new().unwrap();
    let again = write(&dir, "canon.txt", &text);
    let o = run(&["validate", path_str(&again)]);
    assert_eq!(stdout(&o), text);
}

#[test]
fn validate_reports_line_numbers_and_parity() {
    let dir = TempDir::new().unwrap();
    let missing = THETA_EVEN.replace("rot 1 2 1 0\n", "");
    let p = write(&dir, "missing.txt", &missing);
    let o = run(&["validate", path_str(&p)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 1"), "{}", stderr(&o));

    let odd = format!("{THETA_EVEN}demand 0 1 1 1\n");
    let p = write(&dir, "odd.txt", &odd);
    let o = run(&["validate", path_str(&p)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("not Eulerian"), "{}", stderr(&o));
}

#[test]
fn check_reports_the_bounds() {
    let o = run(&["check", path_str(&fixture("t0_111_d5.txt"))]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.contains("nu3 -2\n"), "{text}");
    assert!(text.ends_with("verdict INFEASIBLE\n"), "{text}");

    let o = run(&["check", path_str(&fixture("t0_112_d2.txt"))]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("verdict OK\n"));

    let o = run(&["check", "--skip-metric", path_str(&fixture("t0_112_d2.txt"))]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("mu_hat skipped"));
}

#[test]
fn check_refuses_long_boundaries_under_a_cap() {
    let o = run(&["check", "--max-quad", "1", path_str(&fixture("t0_112_d2.txt"))]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("quadruple cap"), "{}", stderr(&o));
}

#[test]
fn solve_writes_files_that_verify() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("d3.out");
    let input = fixture("t0_111_d3.txt");
    let o = run(&["solve", path_str(&input), "-o", path_str(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = run(&["verify", path_str(&input), path_str(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("admissible: 3 paths"));
}

#[test]
fn solve_matches_the_golden_files() {
    for name in ["t0_112_d2", "t0_111_d3", "t0_111_d5"] {
        let o = run(&["solve", path_str(&fixture(&format!("{name}.txt")))]);
        let expected = fs::read_to_string(fixture(&format!("{name}.out"))).unwrap();
        assert_eq!(stdout(&o), expected, "{name}");
        let want = if name.ends_with("d5") { 1 } else { 0 };
        assert_eq!(code(&o), want, "{name}");
    }
}

#[test]
fn solve_with_no_demands_has_no_paths() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "empty.txt", THETA_EVEN);
    let o = run(&["solve", "--trace", path_str(&p)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "verdict SOLVED\n");
    assert!(stderr(&o).contains("iterations"));
}

#[test]
fn verify_rejects_an_overloaded_solution() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.out", "verdict SOLVED\npath 2 0 0 1\n");
    let o = run(&["verify", path_str(&fixture("t0_112_d2.txt")), path_str(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("edge 0 carries 2 over capacity 1"), "{}", stderr(&o));
}

#[test]
fn verify_accepts_a_true_infeasibility_claim() {
    let o = run(&[
        "verify",
        path_str(&fixture("t0_111_d5.txt")),
        path_str(&fixture("t0_111_d5.out")),
    ]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
}

#[test]
fn gen_is_deterministic_and_valid() {
    let a = run(&["gen", "--seed", "1", "--n", "6"]);
    let b = run(&["gen", "--seed", "1", "--n", "6"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let dir = TempDir::new().unwrap();
    let p = write(&dir, "g.txt", &stdout(&a));
    let o = run(&["validate", path_str(&p)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), stdout(&a));
}

#[test]
fn generated_solvable_instances_pass_the_oracle() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("s.txt");
    let o = run(&["gen", "--seed", "4", "--n", "8", "--target", "solvable", "-o", path_str(&p)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = run(&["oracle", path_str(&p)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).ends_with("verdict SOLVABLE\n"));
    let o = run(&["solve", path_str(&p)]);
    assert_eq!(code(&o), 0);
}

#[test]
fn oracle_refuses_large_instances() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("big.txt");
    assert_eq!(code(&run(&["gen", "--seed", "2", "--n", "15", "-o", path_str(&p)])), 0);
    let o = run(&["oracle", path_str(&p)]);
    assert_eq!(code(&o), 3);
    let o = run(&["oracle", "--size-bound", "4", path_str(&fixture("t0_111_d5.txt"))]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("cut all -2"), "{}", stdout(&o));
}

#[test]
fn gen_reports_bad_parameters() {
    let o = run(&["gen", "--holes", "4"]);
    assert_eq!(code(&o), 2);
    let o = run(&["gen", "--n", "12", "--target", "metric-violating"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("limited to"), "{}", stderr(&o));
}
