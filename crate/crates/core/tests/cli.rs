use std::path::PathBuf;
use std::process::Command;

use bordered::ainfty::Bimodule;
use bordered::cli::{execute, Outcome};

fn run(args: &[&str]) -> Outcome {
    let mut v = vec!["bordered".to_string()];
    v.extend(args.iter().map(|s| s.to_string()));
    execute(&v)
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).to_string_lossy().into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bordered-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn algebra_homology_rank() {
    let o = run(&["algebra", "homology", "--pmc", "split:2", "--i", "0"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.lines().any(|l| l.trim() == "98"), "{}", o.stdout);
    let o = run(&["algebra", "homology", "--pmc", "antipodal:2", "--i", "-1"]);
    assert!(o.stdout.lines().any(|l| l.trim() == "32"), "{}", o.stdout);
}

#[test]
fn algebra_aprime_table() {
    let o = run(&["algebra", "aprime", "--pmc", "torus"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("dim(A')"));
}

#[test]
fn out_of_range_strand_count_is_invalid_input() {
    let o = run(&["algebra", "homology", "--pmc", "torus", "--i", "5"]);
    assert_eq!(o.code, 1);
    assert_eq!(run(&["algebra", "homology", "--pmc", "nonsense", "--i", "0"]).code, 1);
}

#[test]
fn unknown_subcommand_is_invalid_input() {
    assert_eq!(run(&["frobnicate"]).code, 1);
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn mcg_word_and_inverse_simplify_to_identity() {
    let o = run(&["torus", "mcg", "--word", "m,M", "--simplify"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("identity bimodule (2 generators)"), "{}", o.stdout);
    let o = run(&["torus", "mcg", "--word", "m", "--simplify"]);
    assert!(!o.stdout.contains("identity bimodule"));
}

#[test]
fn mcg_output_round_trips() {
    let path = scratch("twist.json");
    let p = path.to_string_lossy().into_owned();
    let o = run(&["torus", "mcg", "--word", "l,m", "--simplify", "--out", &p]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let m = Bimodule::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    m.check_structure(6).unwrap();
    let o = run(&["check", "--bimodule", &p]);
    assert_eq!(o.code, 0, "{}", o.stdout);
}

#[test]
fn duality_check_passes() {
    let o = run(&["torus", "duality-check"]);
    assert_eq!(o.code, 0, "{}{}", o.stdout, o.stderr);
}

#[test]
fn check_shipped_bimodule() {
    let o = run(&["check", "--bimodule", &data("cfaa_id.json")]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.contains("pass"));
}

#[test]
fn check_reports_grading_mismatch() {
    let o = run(&["check", "--bimodule", &data("dehn_twist_m_da.json"), "--twist", "m"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let o = run(&["check", "--bimodule", &data("dehn_twist_l_da.json"), "--twist", "l"]);
    assert_eq!(o.code, 1, "{}", o.stdout);
}

#[test]
fn missing_file_is_invalid_input() {
    assert_eq!(run(&["check", "--bimodule", "/no/such/file.json"]).code, 1);
}

#[test]
fn hochschild_table() {
    let o = run(&["hochschild", "--bimodule", &data("cfaa_id.json"), "--max-len", "3"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("identified with"));
    let o = run(&["hochschild", "--word", "m", "--max-len", "3"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
}

#[test]
fn dualize_writes_a_type_a_module() {
    let path = scratch("dual.json");
    let p = path.to_string_lossy().into_owned();
    let o = run(&["dualize", "--typeD", &data("solid_torus_d_0.json"), "--pmc", "torus", "--out", &p]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let m = Bimodule::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(m.right().is_some());
    assert!(m.left().is_none());
    m.check_structure(6).unwrap();
    assert!(o.stdout.contains("for all i >= 0"), "{}", o.stdout);
    let reference = bordered::torus::solid_torus_a();
    let keys = bordered::ainfty::all_keys(&m.shape, &m.gens, 10);
    let sigma = |k: &bordered::ainfty::Key| k.2.iter().map(|&a| reference.right().unwrap().algebra.label(a).to_string()).collect::<Vec<_>>();
    let nonzero = |x: &Bimodule| keys.iter().filter(|k| !x.op(k).is_empty()).map(sigma).collect::<Vec<_>>();
    assert_eq!(nonzero(&m), nonzero(&reference));
}

#[test]
fn diagram_admissibility() {
    let o = run(&["diagram", "admissible", "--file", "heegaard-aa"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let o = run(&["diagram", "admissible", "--file", &data("canonical_identity.json")]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("not admissible"), "{}", o.stdout);
}

#[test]
fn output_is_deterministic() {
    let args = ["torus", "mcg", "--word", "m,l", "--simplify"];
    assert_eq!(run(&args), run(&args));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_bordered");
    let ok = Command::new(bin).args(["algebra", "homology", "--pmc", "torus", "--i", "0"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).lines().last().map(str::trim), Some("8"));
    let bad = Command::new(bin).args(["algebra", "homology", "--pmc", "torus", "--i", "9"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
