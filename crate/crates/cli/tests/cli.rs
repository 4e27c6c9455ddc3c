use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

fn brauer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brauer")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_example() {
    let o = brauer(&["validate", path(&data("ex2_7.bcf"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("valid: 19 angles"));
}

#[test]
fn validate_lists_every_violation() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.bcf");
    std::fs::write(&f, "vertex v multiplicity 0 cycle a b\npolygon P a\n").unwrap();
    let o = brauer(&["validate", path(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("- ")).count(), 3);
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.bcf");
    std::fs::write(&f, "vertex v multiplicity one cycle a\n").unwrap();
    for args in [
        vec!["validate", path(&f)],
        vec!["info", path(&f)],
        vec!["info", "/definitely/missing.bcf"],
        vec!["flip", "--polygon", "NOPE", path(&data("ex2_7.bcf"))],
        vec!["verify", "--polygon", "U1", "--level", "nonsense", path(&data("ex2_7.bcf"))],
    ] {
        let o = brauer(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!String::from_utf8_lossy(&o.stderr).contains("panicked"));
    }
}

#[test]
fn flip_emits_golden_configuration() {
    let o = brauer(&["flip", "--polygon", "U1", "--direction", "left", path(&data("ex2_7.bcf"))]);
    assert_eq!(o.status.code(), Some(0));
    let golden = std::fs::read_to_string(data("ex2_7_flipped.bcf")).unwrap();
    let expected: Vec<&str> = golden.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).collect();
    let got = stdout(&o);
    let got: Vec<&str> = got.lines().filter(|l| !l.is_empty()).collect();
    assert_eq!(got, expected);
}

#[test]
fn left_then_right_flip_is_isomorphic() {
    let dir = tempfile::tempdir().unwrap();
    for (file, polygon) in [("ex2_7.bcf", "U1"), ("ex2_12_d4.bcf", "V1"), ("kx2.bcf", "E")] {
        let (a, b) = (dir.path().join("a.bcf"), dir.path().join("b.bcf"));
        let input = data(file);
        assert!(brauer(&["flip", "--polygon", polygon, path(&input), "-o", path(&a)]).status.success());
        assert!(brauer(&["validate", path(&a)]).status.success());
        assert!(brauer(&["flip", "--polygon", polygon, "--direction", "right", path(&a), "-o", path(&b)])
            .status
            .success());
        let o = brauer(&["iso", path(&input), path(&b)]);
        assert_eq!(o.status.code(), Some(0), "{file}");
        assert!(stdout(&o).starts_with("isomorphic"));
    }
}

#[test]
fn check_e_reports_witness() {
    let o = brauer(&["check-e", "--polygon", "U", "--direction", "left", path(&data("two_3gons.bcf"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("fails at U"));
    let o = brauer(&["check-e", "--polygon", "U1", path(&data("ex2_7.bcf"))]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("H1=a6\n"));
    assert!(text.contains("x=e~:a1,d:a2,c~:a3,g~:a7"));
}

#[test]
fn check_e_json_dump() {
    let o = brauer(&["--json", "check-e", "--polygon", "U1", path(&data("ex2_7.bcf"))]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["decomposition"]["H2"], serde_json::json!(["a3", "a4"]));
    assert_eq!(v["decomposition"]["x"]["d"], "a2");
}

#[test]
fn verify_levels() {
    let ex = data("ex2_7.bcf");
    for level in ["dims", "homotopy", "phi"] {
        let o = brauer(&["verify", "--polygon", "U1", "--level", level, path(&ex)]);
        assert_eq!(o.status.code(), Some(0), "{level}: {}", stdout(&o));
        assert!(stdout(&o).contains("identity"));
    }
    let o = brauer(&["verify", "--polygon", "U1", "--level", "phi", path(&ex)]);
    assert!(stdout(&o).contains("verdict: isomorphism"));
    assert!(stdout(&o).contains("p = 73"));

    let o = brauer(&["verify", "--polygon", "U1", "--level", "phi", "--prime", "97", path(&ex)]);
    assert_eq!(o.status.code(), Some(0));
    let o = brauer(&["verify", "--polygon", "U1", "--level", "phi", "--prime", "53", path(&ex)]);
    assert_eq!(o.status.code(), Some(1));

    let d4 = data("ex2_12_d4.bcf");
    let o = brauer(&["verify", "--polygon", "V2", "--level", "homotopy", path(&d4)]);
    assert_eq!(o.status.code(), Some(0));
    let o = brauer(&["verify", "--polygon", "V2", "--level", "dims", path(&d4)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_json_matches_table() {
    let o = brauer(&["--json", "verify", "--polygon", "U1", path(&data("ex2_7.bcf"))]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["checks"][0]["lhs"], "11");
    assert_eq!(v["checks"][0]["pass"], true);
}

#[test]
fn quiver_and_relations() {
    let o = brauer(&["quiver", "--format", "dot", path(&data("kx2.bcf"))]);
    assert!(stdout(&o).starts_with("digraph"));
    let o = brauer(&["relations", path(&data("ex2_7.bcf"))]);
    let text = stdout(&o);
    assert!(text.contains("# BC1") && text.contains("= 0"));
}

#[test]
fn mutate_dumps_complex() {
    let o = brauer(&["mutate", "--polygon", "U1", "--dump-complex", path(&data("ex2_7.bcf"))]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("degree -1: P_U1"));
    assert!(text.contains("d[0][0]"));
}

#[test]
fn random_is_deterministic() {
    let a = brauer(&["random", "--angles", "12", "--seed", "5"]);
    let b = brauer(&["random", "--angles", "12", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("r.bcf");
    std::fs::write(&f, &a.stdout).unwrap();
    assert!(brauer(&["validate", path(&f)]).status.success());
    assert_eq!(brauer(&["random", "--angles", "1"]).status.code(), Some(2));
}

#[test]
fn corpus_summary_is_deterministic() {
    let a = brauer(&["corpus", "--seed", "3", "--count", "24"]);
    let b = brauer(&["corpus", "--seed", "3", "--count", "24"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().filter(|l| l.starts_with("pass")).count(), 8);
}
