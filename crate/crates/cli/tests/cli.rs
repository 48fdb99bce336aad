use std::path::PathBuf;
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ifsdyn")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn value(out: &Output, key: &str) -> String {
    stdout(out)
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")).map(str::to_string))
        .unwrap_or_else(|| panic!("no {key} in {}", stdout(out)))
}

fn assert_single_error(out: &Output, kind: &str) {
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(out);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with(&format!("error[{kind}]: ")), "{err}");
}

#[test]
fn distance_reports_value_and_tail() {
    let out = run(&["distance", "pair", "tail"]);
    assert!(out.status.success());
    assert_eq!(value(&out, "truncation_depth"), "40");
    assert_eq!(value(&out, "tail_bound"), "9.09494701773e-13");
    let v: f64 = value(&out, "value").parse().unwrap();
    assert!(v > 0.0 && v < 1.0);
    let same = run(&["distance", "pair", "pair"]);
    assert_eq!(value(&same, "value"), "0");
}

#[test]
fn distance_csv_has_header() {
    let out = run(&["distance", "pair", "tail", "--csv"]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().count() >= 2);
}

#[test]
fn tolerance_flag_changes_depth() {
    let out = run(&["--tolerance", "0.001", "distance", "pair", "tail"]);
    assert_eq!(value(&out, "truncation_depth"), "10");
}

#[test]
fn shift_and_classify() {
    assert_eq!(stdout(&run(&["shift", "tail"])).trim(), "pre=() period=(f1,f2)");
    assert_eq!(stdout(&run(&["shift", "pair", "--steps", "3"])).trim(), "pre=() period=(f2,f1)");
    assert_eq!(value(&run(&["classify", "tail"]), "classification"), "eventually_periodic(1,2)");
    assert_eq!(value(&run(&["classify", "fixed"]), "classification"), "fixed");
}

#[test]
fn dimension_under_scale_evolution() {
    let base = run(&["dimension", "sierpinski"]);
    assert_eq!(value(&base, "s"), "1.58496250072");
    let evolved = run(&["dimension", "sierpinski", "--operator", "scale", "--time", "0.6931471805599453"]);
    assert!(evolved.status.success(), "{}", stderr(&evolved));
    assert_eq!(value(&evolved, "s_evolved_formula"), "0.792481250361");
    assert_eq!(value(&evolved, "s_evolved_resolved"), "0.792481250361");
}

#[test]
fn osc_verdicts() {
    assert_eq!(value(&run(&["osc", "sierpinski"]), "verdict"), "satisfied");
    let cantor = scenario("cantor.json");
    let out = run(&["--scenario", cantor.to_str().unwrap(), "osc", "blocks"]);
    assert_eq!(value(&out, "verdict"), "violated");
    let out = run(&["osc", "sierpinski", "--open-set", "0:1,0:0.9"]);
    assert_eq!(value(&out, "not_contained"), "f3");
}

#[test]
fn attractor_writes_pgm() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli_det.pgm");
    let out = run(&["--resolution", "64", "attractor", "sierpinski", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let pgm = std::fs::read_to_string(&path).unwrap();
    assert!(pgm.starts_with("P2\n64 64\n255\n"));
    assert_eq!(pgm.lines().count(), 3 + 64);
}

#[test]
fn verify_writes_csv_and_summary() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli_verify.csv");
    let out = run(&["verify", "--suite", "osc", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("passed="));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("case,status,measured,bound,detail\n"));
    assert!(csv.lines().skip(1).all(|l| l.contains(",pass,")));
}

#[test]
fn unknown_names_are_reported() {
    assert_single_error(&run(&["distance", "pair", "nope"]), "unknown_name");
    assert_single_error(&run(&["evolve", "pair", "--operator", "nope", "--time", "1"]), "unknown_name");
}

#[test]
fn bad_input_exits_with_one_line() {
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let broken = tmp.join("broken.json");
    std::fs::write(&broken, "{\n  \"space\": ").unwrap();
    assert_single_error(&run(&["--scenario", broken.to_str().unwrap(), "classify", "x"]), "parse");

    let expanding = tmp.join("expanding.json");
    let text = std::fs::read_to_string(scenario("minimal.json")).unwrap().replace("0.5", "1.5");
    std::fs::write(&expanding, text).unwrap();
    assert_single_error(&run(&["--scenario", expanding.to_str().unwrap(), "classify", "x"]), "validation");

    assert_single_error(&run(&["--scenario", "/nonexistent/file.json", "classify", "x"]), "io");
    assert_single_error(&run(&["bogus"]), "usage");
    assert_single_error(&run(&["verify", "--suite", "nope"]), "unknown_name");
}

#[test]
fn help_exits_zero() {
    assert!(run(&["--help"]).status.success());
}
