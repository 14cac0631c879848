use std::process::Command;

fn ultraseq(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ultraseq"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn norm_prints_closed_form_and_nine_digits() {
    let (code, out, _) = ultraseq(&["norm", "n^2", "--space", "colombeau"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("exact e^2 ≈ 7.38905610\n"), "{}", out);
    assert!(out.contains("witness:"), "{}", out);
}

#[test]
fn assoc_of_inverse_log_and_zero_holds() {
    let (code, out, _) = ultraseq(&[
        "assoc",
        "1/log(n)",
        "0",
        "--kind",
        "weak",
        "--space",
        "colombeau",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("weak: holds"), "{}", out);
}

#[test]
fn exp_is_divergent_and_decided() {
    let (code, out, _) = ultraseq(&["classify", "exp(n)", "--space", "colombeau"]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: divergent"), "{}", out);
}

#[test]
fn parse_errors_exit_one_with_a_column() {
    let (code, _, err) = ultraseq(&["norm", "n^2 + * 3"]);
    assert_eq!(code, 1);
    assert!(err.contains("column 7"), "{}", err);
    let (code, _, err) = ultraseq(&["classify", "n", "--space", "nonsense"]);
    assert_eq!(code, 1);
    assert!(err.contains("nonsense"), "{}", err);
}

#[test]
fn inconclusive_queries_exit_two() {
    // temperate certificates are not decided over Egorov step families
    let (code, out, _) = ultraseq(&["check-map", "x^2", "--space", "egorov:1..4"]);
    assert_eq!(code, 2, "{}", out);
}

#[test]
fn check_map_reports_a_replayable_refutation() {
    let (code, out, _) = ultraseq(&["check-map", "exp", "--space", "colombeau-scale"]);
    assert_eq!(code, 0);
    assert!(out.contains("refuted"), "{}", out);
    assert!(
        out.contains("witness replay: confirms the failure"),
        "{}",
        out
    );
    let (code, out, _) = ultraseq(&[
        "check-map",
        "x^0.5",
        "--role",
        "compatible",
        "--space",
        "colombeau-scale",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("certified"), "{}", out);
}

#[test]
fn convert_scale_prints_members_and_axioms() {
    let (code, out, _) = ultraseq(&["convert-scale", "exp", "--hi", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("r^3"), "{}", out);
    assert!(out.contains("axioms: all pass"), "{}", out);
}

#[test]
fn spec_file_runs_every_query() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/sample.spec");
    let (code, out, err) = ultraseq(&["run", path]);
    assert_eq!(code, 0, "{}{}", out, err);
    assert_eq!(out.matches("\n== ").count(), 7, "{}", out);
    assert!(out.contains("weak: holds"), "{}", out);
    assert!(out.contains("s-dual:1: holds"), "{}", out);
    assert!(out.contains("weak-s:1: fails"), "{}", out);
    assert!(out.contains("verdict: moderate, not negligible"), "{}", out);
}

#[test]
fn spec_file_errors_name_file_line_and_column() {
    let dir = std::env::temp_dir().join(format!("ultraseq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.spec");
    std::fs::write(&path, "[sequences]\na = n^2\n[queries]\nassoc = a b\n").unwrap();
    let (code, _, err) = ultraseq(&["run", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(
        err.contains("bad.spec:4:11: unknown sequence 'b'"),
        "{}",
        err
    );
}

#[test]
fn output_is_deterministic() {
    let a = ultraseq(&["norm", "alt(n^2, n^-1) + 3*log(n)"]);
    let b = ultraseq(&["norm", "alt(n^2, n^-1) + 3*log(n)"]);
    assert_eq!(a, b);
}

#[test]
fn extend_certifies_square_and_refuses_exp() {
    let (code, out, _) = ultraseq(&["extend", "square", "delta"]);
    assert_eq!(code, 0, "{}", out);
    assert!(out.contains("certified on the probe corpus"), "{}", out);
    assert!(out.contains("verdict: moderate, not negligible"), "{}", out);
    let (code, out, _) = ultraseq(&["extend", "exp", "sin"]);
    assert_eq!(code, 0, "{}", out);
    assert!(out.contains("does not extend"), "{}", out);
    let (code, _, err) = ultraseq(&["extend", "square", "n^2"]);
    assert_eq!(code, 1);
    assert!(err.contains("function sequence"), "{}", err);
}

#[test]
fn delta_demo_runs_end_to_end() {
    let (code, out, _) = ultraseq(&["demo", "delta"]);
    assert_eq!(code, 0, "{}", out);
    assert!(
        out.contains("slope of log p_3(delta_n) vs log n: 4.0000"),
        "{}",
        out
    );
    assert!(
        out.contains("delta_n^2 weakly associated to (int phi^2) delta: fails"),
        "{}",
        out
    );
}
