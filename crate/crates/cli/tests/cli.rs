use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_diffcheb"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn run_writes_artifacts_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["run", config("gm_pade.json").to_str().unwrap(), "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("pade: verdict pass"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/gm_pade.json")).unwrap()).unwrap();
    assert_eq!(json["verdict"], "pass");
    assert_eq!(json["fit"]["denominator"], serde_json::json!(["1", "-8", "7"]));
    let csv = std::fs::read_to_string(dir.path().join("out/gm_pade.csv")).unwrap();
    assert!(csv.starts_with("Q,count,exact,n,zeta_decimal,zeta_exact\n7,6,true,1,6,6\n"), "{csv}");
}

#[test]
fn validate_lists_domains() {
    let o = bin().args(["validate", config("kummer_density.json").to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("Σ: size 3\ndomains: 3\n"));
    let o = bin().args(["validate", config("twisted_kummer.json").to_str().unwrap()]).output().unwrap();
    assert!(stdout(&o).contains("Σ: size 3\ndomains: 1\n"));
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_config(
        dir.path(),
        "bad.json",
        r#"{"schemaVersion":1,"base":{"p":2,"q":4,"q0":8},"experiment":{"kind":"count","nRange":[1,2]}}"#,
    );
    let o = bin().arg("run").arg(&p).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("q0 must divide q"));

    let p = write_config(
        dir.path(),
        "version.json",
        r#"{"schemaVersion":2,"base":{"p":2,"q":2},"experiment":{"kind":"count","nRange":[1,2]}}"#,
    );
    assert_eq!(bin().arg("run").arg(&p).output().unwrap().status.code(), Some(1));

    let o = bin().args(["run", "/nonexistent/config.json"]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bad_relation_names_the_module() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(config("kummer_density.json"))
        .unwrap()
        .replace(r#"{ "y": "2*y" }"#, r#"{ "y": "y + 1" }"#);
    let p = write_config(dir.path(), "translate.json", &text);
    let o = bin().arg("validate").arg(&p).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("cover"), "{}", stderr(&o));
}

#[test]
fn failed_verdict_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(config("ideals.json"))
        .unwrap()
        .replace(r#""expect": "yes""#, r#""expect": "no""#)
        .replace(r#", "corpusSize": 50"#, "");
    let p = write_config(dir.path(), "wrong.json", &text);
    let o = bin().arg("run").arg(&p).arg("--out-dir").arg(dir.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stdout(&o).contains("verdict fail"));
}

#[test]
fn budget_exhaustion_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_config(
        dir.path(),
        "big.json",
        r#"{"schemaVersion":1,"base":{"p":5,"q":5},
            "variety":{"vars":["x","y","z"],"equations":["x@1 - y*z"]},
            "experiment":{"kind":"count","nRange":[1,3]}}"#,
    );
    let o = bin().arg("run").arg(&p).args(["--budget", "1000"]).output().unwrap();
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("budget"));
}

#[test]
fn precision_bits_control_decimals() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .env("FROB_PRECISION_BITS", "20")
        .args(["run", config("kummer_density.json").to_str().unwrap(), "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("density estimate 0.3333333, Haar mean 0.3333333,"), "{}", stdout(&o));
    let o = bin()
        .env("FROB_PRECISION_BITS", "lots")
        .args(["validate", config("gm_zeta.json").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn ideal_member_subcommand() {
    let o = bin().args(["ideal-member", "--p", "2", "--vars", "x", "--gen", "x*x@1", "--f", "x"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "yes: ν = 1+σ");
    let o = bin().args(["ideal-member", "--p", "2", "--vars", "x,y", "--gen", "x", "--f", "y"]).output().unwrap();
    assert!(stdout(&o).starts_with("no within bounds"));
}

#[test]
fn seed_and_threads_do_not_change_count_output() {
    let dir = tempfile::tempdir().unwrap();
    let run = |extra: &[&str], sub: &str| {
        let out = dir.path().join(sub);
        let o = bin()
            .args(["run", config("langweil.json").to_str().unwrap(), "--out-dir"])
            .arg(&out)
            .args(extra)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        std::fs::read(out.join("out/langweil.csv")).unwrap()
    };
    assert_eq!(run(&["--threads", "1"], "a"), run(&["--threads", "3"], "b"));
}
