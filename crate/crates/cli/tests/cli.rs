use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dominance"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn write_values(dir: &Path, name: &str, values: &[f64]) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, values.iter().map(|v| format!("{v}\n")).collect::<String>()).unwrap();
    p
}

fn compare(a: &Path, b: &Path, extra: &[&str]) -> Output {
    bin().arg("compare").arg("--a").arg(a).arg("--b").arg(b).args(extra).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn fixtures_pass_verify() {
    for i in 0..50 {
        let a = fixture(&format!("pair_{i:02}_a.txt"));
        let b = fixture(&format!("pair_{i:02}_b.txt"));
        let out = compare(&a, &b, &["--verify", "--resamples", "100", "--seed", &i.to_string()]);
        assert!(out.status.success(), "fixture {i}: {}", stderr(&out));
        assert!(stdout(&out).starts_with("C_P="));
    }
}

#[test]
fn identical_files() {
    let a = fixture("pair_06_a.txt");
    let out = compare(&a, &a, &["--resamples", "200"]);
    assert!(out.status.success());
    let line = stdout(&out);
    assert!(line.starts_with("C_P=0.500000 ["), "{line}");
    assert!(line.contains("C_D=0.500000 ["), "{line}");
    assert!(line.trim_end().ends_with("verdict=equal"), "{line}");
}

#[test]
fn disjoint_files_and_maximize() {
    let dir = tempfile::tempdir().unwrap();
    let lo: Vec<f64> = (0..120).map(|i| i as f64 / 120.0).collect();
    let hi: Vec<f64> = lo.iter().map(|v| v + 5.0).collect();
    let a = write_values(dir.path(), "a.txt", &lo);
    let b = write_values(dir.path(), "b.txt", &hi);

    let line = stdout(&compare(&a, &b, &["--resamples", "100"]));
    assert!(line.starts_with("C_P=1.000000 "), "{line}");
    assert!(line.contains("verdict=a_dominates"), "{line}");

    let line = stdout(&compare(&a, &b, &["--resamples", "100", "--maximize"]));
    assert!(line.starts_with("C_P=0.000000 "), "{line}");
    assert!(line.contains("verdict=b_dominates"), "{line}");
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_values(dir.path(), "a.txt", &[1.0, 2.0, 3.0]);
    let b = write_values(dir.path(), "b.txt", &[1.0, 2.0]);
    let out = compare(&a, &b, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("sample sizes differ"));

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "# values\n1.0\n2,5\n3.0\n").unwrap();
    let out = compare(&bad, &a, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bad.txt:3"), "{}", stderr(&out));

    let out = compare(&a, &dir.path().join("missing.txt"), &[]);
    assert_eq!(out.status.code(), Some(2));

    let out = compare(&a, &a, &["--alpha", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn small_samples_warn() {
    let out = compare(&fixture("pair_00_a.txt"), &fixture("pair_00_b.txt"), &["--resamples", "100"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("warning: n = 40"));
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (fixture("pair_12_a.txt"), fixture("pair_12_b.txt"));
    let run = |tag: &str| {
        let names = ["svg", "json", "csv"].map(|ext| dir.path().join(format!("{tag}.{ext}")));
        let out = bin()
            .arg("compare")
            .arg("--a")
            .arg(&a)
            .arg("--b")
            .arg(&b)
            .args(["--resamples", "300", "--seed", "5"])
            .arg("--out")
            .arg(&names[0])
            .arg("--report")
            .arg(&names[1])
            .arg("--csv")
            .arg(&names[2])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
        names.map(|p| fs::read(p).unwrap())
    };
    let first = run("one");
    let second = run("two");
    assert_eq!(first[0], second[0]);
    assert_eq!(first[2], second[2]);
    let strip = |bytes: &[u8]| {
        let mut v: serde_json::Value = serde_json::from_slice(bytes).unwrap();
        v.as_object_mut().unwrap().remove("outputs");
        v
    };
    assert_eq!(strip(&first[1]), strip(&second[1]));

    let report: serde_json::Value = serde_json::from_slice(&first[1]).unwrap();
    for key in [
        "c_p",
        "c_d",
        "c_p_interval",
        "c_d_interval",
        "n",
        "alpha",
        "resamples",
        "seed",
        "verdict",
        "quantile_crossings",
    ] {
        assert!(report.get(key).is_some(), "{key}");
    }
    assert_eq!(report["resamples"], 300);
    assert_eq!(report["seed"], 5);
}

#[test]
fn analytic_command() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    fs::write(&a, r#"{"components":[{"kind":"gaussian","params":[0,1],"weight":1}]}"#).unwrap();
    fs::write(&b, r#"{"components":[{"kind":"gaussian","params":[1,1],"weight":1}]}"#).unwrap();
    let out = bin().arg("analytic").arg("--a").arg(&a).arg("--b").arg(&b).args(["--n", "150"]).output().unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("c_p = 0.76024993"), "{text}");
    assert!(text.contains("verdict = a_dominates"));
    assert!(text.contains("hellinger = "));
    assert!(text.contains("empirical (n = 150): C_P="));

    fs::write(&b, r#"{"components":[{"kind":"gaussian","params":[1,-1],"weight":1}]}"#).unwrap();
    let out = bin().arg("analytic").arg("--a").arg(&a).arg("--b").arg(&b).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn properties_command() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("props.json");
    let out =
        bin().args(["properties", "--measure", "c_d", "--trials", "10", "--report"]).arg(&report).output().unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("match"));
    let parsed: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(parsed[0]["outcomes"].as_array().unwrap().len(), 8);

    let out = bin().args(["properties", "--measure", "hellinger", "--trials", "10"]).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("hellinger property 7"));

    let out = bin().args(["properties", "--measure", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
