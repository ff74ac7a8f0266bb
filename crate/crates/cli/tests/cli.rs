use std::path::{Path, PathBuf};
use std::process::Command;

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn run(cmd: &str, config: &Path, out: &Path, extra: &[&str]) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_pqbm"))
        .arg(cmd)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap();
    let mut text = String::from_utf8_lossy(&o.stdout).into_owned();
    text.push_str(&String::from_utf8_lossy(&o.stderr));
    (o.status.code().unwrap(), text)
}

fn rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path).unwrap().records().map(|r| r.unwrap()).collect()
}

fn header(path: &Path) -> csv::StringRecord {
    csv::Reader::from_path(path).unwrap().headers().unwrap().clone()
}

fn col(path: &Path, name: &str) -> usize {
    header(path).iter().position(|h| h == name).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn summary(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn counterexample_is_an_expected_failure() {
    let out = tempfile::tempdir().unwrap();
    let (code, text) = run("check-global", &scenario("gz-counterexample.toml"), out.path(), &["--budget", "200000"]);
    assert_eq!(code, 0, "{text}");
    let csv = out.path().join("gz-counterexample.csv");
    let v = col(&csv, "verdict");
    let r = rows(&csv);
    assert!(r.iter().any(|row| &row[v] == "fails"));
    let s = summary(&out.path().join("gz-counterexample.summary.json"));
    assert_eq!(s["status"], "failed-as-expected");
    assert_eq!(s["summary_schema"], 1);
}

#[test]
fn gaussian_log_scenario_passes() {
    let out = tempfile::tempdir().unwrap();
    let (code, text) = run(
        "check-global",
        &scenario("gauss-logbm-n2.toml"),
        out.path(),
        &["--budget", "100000", "--jobs", "4"],
    );
    assert_eq!(code, 0, "{text}");
    let csv = out.path().join("gauss-logbm-n2.csv");
    let (v, c) = (col(&csv, "verdict"), col(&csv, "condition_slack"));
    for row in rows(&csv) {
        assert_ne!(&row[v], "fails");
        if !row[c].is_empty() && &row[col(&csv, "statistic")] == "deficit" {
            assert!(row[c].parse::<f64>().unwrap() >= 0.0);
        }
    }
    for name in ["formula", "anchor", "seed", "budget"] {
        col(&csv, name);
    }
}

#[test]
fn equal_bodies_give_zero_deficits() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "same.toml",
        r#"
command = "check-global"
name = "same"
budget = 20000
density = { kind = "gaussian" }
[[midpoint]]
name = "k-equals-l"
k = { kind = "box", half = [1.0, 0.5] }
l = { kind = "box", half = [1.0, 0.5] }
lambda = [0.2, 0.5]
p = [0.0, 1.0]
q = [0.0, 0.5]
"#,
    );
    let (code, text) = run("check-global", &cfg, &dir.path().join("out"), &[]);
    assert_eq!(code, 0, "{text}");
    let csv = dir.path().join("out/same.csv");
    let value = col(&csv, "value");
    let r = rows(&csv);
    assert_eq!(r.len(), 6);
    assert!(r.iter().all(|row| row[value].parse::<f64>().unwrap() == 0.0));
}

#[test]
fn reports_are_byte_identical() {
    let dirs: Vec<_> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    let jobs = ["1", "1", "3"];
    for (d, j) in dirs.iter().zip(jobs) {
        let (code, _) = run(
            "check-global",
            &scenario("gauss-logbm-n2.toml"),
            d.path(),
            &["--budget", "50000", "--jobs", j, "--seed", "9"],
        );
        assert_eq!(code, 0);
    }
    for f in ["gauss-logbm-n2.csv", "gauss-logbm-n2.summary.json", "gauss-logbm-n2.config.toml"] {
        let a = std::fs::read(dirs[0].path().join(f)).unwrap();
        for d in &dirs[1..] {
            assert_eq!(a, std::fs::read(d.path().join(f)).unwrap(), "{f}");
        }
    }
    let other = tempfile::tempdir().unwrap();
    run("check-global", &scenario("gauss-logbm-n2.toml"), other.path(), &["--budget", "50000", "--seed", "10"]);
    assert_ne!(
        std::fs::read(dirs[0].path().join("gauss-logbm-n2.csv")).unwrap(),
        std::fs::read(other.path().join("gauss-logbm-n2.csv")).unwrap()
    );
}

#[test]
fn resolved_config_records_overrides() {
    let out = tempfile::tempdir().unwrap();
    run("measure", &scenario("measures.toml"), out.path(), &["--seed", "77", "--budget", "5000"]);
    let text = std::fs::read_to_string(out.path().join("measures.config.toml")).unwrap();
    assert!(text.contains("seed = 77"));
    assert!(text.contains("budget = 5000"));
    let s = summary(&out.path().join("measures.summary.json"));
    let e = &s["cases"][2]["estimate"];
    assert_eq!(e["method"], "monte-carlo");
    assert_eq!(e["budget"], 5000);
    for k in ["value", "stderr", "seed"] {
        assert!(!e[k].is_null());
    }
}

#[test]
fn local_form_examples() {
    let out = tempfile::tempdir().unwrap();
    let (code, text) = run("check-local", &scenario("local-forms.toml"), out.path(), &[]);
    assert_eq!(code, 0, "{text}");
    let csv = out.path().join("local-forms.csv");
    let (m, mode, v) = (col(&csv, "max_eigenvalue"), col(&csv, "mode"), col(&csv, "verdict"));
    let r = rows(&csv);
    assert!(r[0][m].parse::<f64>().unwrap() <= 1e-8);
    assert!(r[1][m].parse::<f64>().unwrap().abs() <= 1e-8);
    assert_eq!(&r[1][mode], "support-function");
    assert_eq!(&r[2][v], "holds");
}

#[test]
fn matrices_are_exported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "logbm.toml",
        r#"
command = "check-local"
name = "logbm"
[[local]]
name = "disk"
body = { kind = "ball", dim = 2, r = 1.0 }
density = { kind = "lebesgue" }
p = 0.0
q = 0.0
basis = { kind = "trig", k_max = 4 }
export_matrices = true
"#,
    );
    let (code, text) = run("check-local", &cfg, dir.path(), &[]);
    assert_eq!(code, 0, "{text}");
    for m in ["form", "gram"] {
        assert_eq!(rows(&dir.path().join(format!("logbm.disk.{m}.csv"))).len(), 81);
    }
}

#[test]
fn condition_table_examples() {
    let out = tempfile::tempdir().unwrap();
    let (code, text) = run("conditions", &scenario("conditions.toml"), out.path(), &[]);
    assert_eq!(code, 0, "{text}");
    let csv = out.path().join("conditions.csv");
    let (label, ev, sat, hyp, p) = (
        col(&csv, "label"),
        col(&csv, "evaluator"),
        col(&csv, "satisfied"),
        col(&csv, "in_hypothesis"),
        col(&csv, "p"),
    );
    let r = rows(&csv);
    let find = |l: &str, e: &str| r.iter().find(|row| &row[label] == l && &row[ev] == e).unwrap().clone();
    assert_eq!(&find("gauss-n3-logbm", "main-condition")[sat], "true");
    assert_eq!(&find("lebesgue-n4", "main-condition")[hyp], "false");
    let cross: f64 = find("p-sweep-n3", "sweep-crossing")[p].parse().unwrap();
    assert!((cross - (1.0 - 2.0 / 4.0)).abs() < 1e-12);
    let pc = out.path().join("conditions.poincare.csv");
    let est: f64 = rows(&pc)[0][col(&pc, "inv_sq_estimate")].parse().unwrap();
    assert!(est >= 1.0);
}

#[test]
fn polytope_pair_report() {
    let out = tempfile::tempdir().unwrap();
    let (code, text) = run("polytope", &scenario("polytope-pair.toml"), out.path(), &[]);
    assert_eq!(code, 0, "{text}");
    let csv = out.path().join("polytope-pair.csv");
    let (m, d) = (col(&csv, "measure"), col(&csv, "derivative"));
    let r = rows(&csv);
    let mu: Vec<f64> = r.iter().map(|row| row[m].parse().unwrap()).collect();
    assert_eq!(mu[0], 4.0);
    assert!((mu[4] - 4.0).abs() < 1e-12);
    // a centred difference of the measure tracks the reported derivative
    let fd = (mu[3] - mu[1]) / 0.5;
    let mid: f64 = r[2][d].parse().unwrap();
    assert!((fd - mid).abs() < 0.05 * mid.abs().max(1.0), "{fd} {mid}");
}

#[test]
fn schema_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let unknown = write(dir.path(), "a.toml", "command = \"measure\"\nname = \"a\"\ncolour = 1\n");
    assert_eq!(run("measure", &unknown, &out, &[]).0, 2);
    assert_eq!(run("check-global", &scenario("measures.toml"), &out, &[]).0, 2);
    assert_eq!(run("measure", &dir.path().join("missing.toml"), &out, &[]).0, 2);
    let rows = write(
        dir.path(),
        "b.toml",
        "command = \"conditions\"\nname = \"b\"\n[conditions]\n[[conditions.rows]]\nlabel = \"bad\"\ndensity = \"gaussian\"\nn = 2\np = 0.1\nq = 0.5\nr = 1.0\n",
    );
    let (code, text) = run("conditions", &rows, &out, &[]);
    assert_eq!(code, 2, "{text}");
    assert!(text.contains("bad"));
    let budget = run("measure", &scenario("measures.toml"), &out, &["--budget", "10"]);
    assert_eq!(budget.0, 2, "{}", budget.1);
}

#[test]
fn numeric_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "thin.toml",
        r#"
command = "conditions"
name = "thin"
[conditions]
[[conditions.poincare]]
name = "thin-box"
body = { kind = "box", half = [1.0, 1e-4] }
density = { kind = "lebesgue" }
degree = 4
"#,
    );
    let (code, text) = run("conditions", &cfg, dir.path(), &[]);
    assert_eq!(code, 3, "{text}");
}

#[test]
fn missing_expected_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "x.toml",
        r#"
command = "check-global"
name = "x"
expect_fail = true
density = { kind = "lebesgue" }
[[midpoint]]
name = "balls"
k = { kind = "ball", dim = 2, r = 1.0 }
l = { kind = "ball", dim = 2, r = 2.0 }
p = [1.0]
q = [0.5]
"#,
    );
    let (code, _) = run("check-global", &cfg, dir.path(), &[]);
    assert_eq!(code, 1);
    assert_eq!(summary(&dir.path().join("x.summary.json"))["status"], "unexpected-pass");
}
