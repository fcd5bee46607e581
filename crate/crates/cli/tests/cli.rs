use assert_cmd::Command;
use tempfile::tempdir;

fn hcgap() -> Command {
    Command::cargo_bin("hcgap").unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = hcgap().args(args).assert().success().get_output().stdout.clone();
    String::from_utf8(out).unwrap()
}

#[test]
fn classify_band_point() {
    let out = stdout(&["classify", "9", "19", "11"]);
    assert!(out.starts_with("Band(5)"));
    assert!(out.contains("\"kind\": \"band\""));
}

#[test]
fn classify_above_band_is_d2() {
    assert!(stdout(&["classify", "9", "19", "12"]).starts_with("D2"));
}

#[test]
fn classify_out_of_range_exits_2() {
    hcgap().args(["classify", "9", "5", "0"]).assert().code(2);
}

#[test]
fn certify_delegated_exits_3() {
    hcgap().args(["certify", "9", "18", "4"]).assert().code(3);
}

#[test]
fn certify_then_verify() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("c.json");
    hcgap().args(["certify", "9", "19", "11"]).arg(&path).assert().success();
    hcgap().arg("verify").arg(&path).assert().success();
}

#[test]
fn tampered_certificate_exits_4() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("c.json");
    hcgap().args(["certify", "9", "19", "11"]).arg(&path).assert().success();
    let text = std::fs::read_to_string(&path).unwrap();
    let tampered = text.replacen("\"g\": 11", "\"g\": 12", 1);
    assert_ne!(text, tampered);
    std::fs::write(&path, tampered).unwrap();
    hcgap().arg("verify").arg(&path).assert().code(4);
}

#[test]
fn garbage_certificate_exits_4() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, "{}").unwrap();
    hcgap().arg("verify").arg(&path).assert().code(4);
}

#[test]
fn scan_is_deterministic() {
    let dir = tempdir().unwrap();
    let run = |tag: &str, extra: &[&str]| {
        let csv = dir.path().join(format!("{tag}.csv"));
        let svg = dir.path().join(format!("{tag}.svg"));
        hcgap()
            .args(extra)
            .args(["scan", "--n", "9", "--d", "19..40", "--modes", "build,verify", "--csv"])
            .arg(&csv)
            .arg("--svg")
            .arg(&svg)
            .assert()
            .success();
        (std::fs::read(csv).unwrap(), std::fs::read(svg).unwrap())
    };
    let a = run("a", &[]);
    assert_eq!(a, run("b", &[]));
    assert_eq!(a, run("c", &["--sequential"]));
}

#[test]
fn scan_empty_range() {
    let out = stdout(&["scan", "--n", "9", "--d", "30..29"]);
    assert_eq!(out.lines().count(), 1);
}

#[test]
fn scan_space_curves_marks_gaps() {
    let out = stdout(&["scan", "--n", "3", "--d", "9..9"]);
    assert!(out.lines().any(|l| l.starts_with("9,11,") && l.contains(",gap,")));
    assert!(out.lines().any(|l| l.starts_with("9,12,") && l.contains(",gap_free,")));
}

#[test]
fn scan_help_lists_columns() {
    let out = stdout(&["scan", "--help"]);
    assert!(out.contains("surface_p") && out.contains("annotated"));
}

#[test]
fn table_has_one_row_per_degree() {
    let out = stdout(&["table", "--n", "9", "--d", "19..22"]);
    assert_eq!(out.lines().count(), 5);
    assert!(out.lines().nth(1).unwrap().starts_with("19,12,11,"));
}

#[test]
fn oracle_audit_clean() {
    let out = stdout(&["oracle", "audit", "--n", "8..9", "--d-span", "60"]);
    assert!(out.contains("\"violations\": 0"));
}
