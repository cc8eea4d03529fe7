use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_squarish"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn tree_count_of_quartered_diamond() {
    let o = run(&["trees", "QUARTERED", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "4\n");
}

#[test]
fn census_rows() {
    let o = run(&["census", "holes", "--max-n", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "H 1 2 2^1*1^2\nH 2 196 2^2*7^2\n");
}

#[test]
fn formula_lines() {
    let o = run(&["verify", "formula", "EQ2_5", "--n", "2..8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 7);
    assert!(lines
        .iter()
        .all(|l| l.starts_with("FORMULA EQ2_5 ") && l.ends_with(" PASS")));
    assert_eq!(lines[1], "FORMULA EQ2_5 3 expected 4 got 4 PASS");
}

#[test]
fn highdim_cube() {
    let o = run(&["highdim", "verify", "--d", "3", "--n", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("HIGHDIM 3 2 PASS"));
}

#[test]
fn failing_check_sets_exit_code() {
    // The tabulated fifth cube entry is short by degree 12.
    let o = run(&["highdim", "verify", "--d", "3", "--n", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn theorem_certificates() {
    let o = run(&["verify", "theorem", "grid", "--n", "2..4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 3);
    assert!(text
        .lines()
        .all(|l| l.starts_with("CERT grid ") && l.contains(" explicit-basis PASS")));

    let o = run(&["verify", "theorem", "odd", "--n", "2", "--mode", "charpoly"]);
    assert!(o.status.success(), "{}", stdout(&o));

    let o = run(&["verify", "theorem", "odd", "--n", "2", "--mode", "explicit"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn output_is_reproducible() {
    let args = ["matchings", "AZTEC", "--n", "1..4", "--oracle"];
    let a = stdout(&run(&args));
    let b = stdout(&run(&args));
    assert_eq!(a, b);
    assert_eq!(a.lines().next(), Some("AZTEC 1 2 oracle 2 PASS"));
}

#[test]
fn symmetry_classes() {
    let o = run(&[
        "symmetry",
        "HOLED_SQUARE",
        "--n",
        "1..2",
        "--group",
        "h",
        "--oracle",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("HOLED_SQUARE 1 h "));
}

#[test]
fn report_file() {
    let dir = std::env::temp_dir().join(format!("squarish-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("trees.csv");
    let o = run(&[
        "trees",
        "AZTEC",
        "--n",
        "1..2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv, "family,n,trees\nAZTEC,1,4\nAZTEC,2,768\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn build_round_trips() {
    let o = run(&["build", "AZTEC", "2"]);
    assert!(o.status.success());
    let g = squarish::lattice::LatticeGraph::parse(&stdout(&o)).unwrap();
    assert_eq!(g.vertex_count(), 12);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["trees", "NOPE", "2"]).status.code(), Some(2));
    assert_eq!(run(&["trees", "AZTEC"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "formula", "EQ9_9", "--n", "1..2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "formula", "EQ2_5", "--n", "5..2"])
            .status
            .code(),
        Some(2)
    );
}
