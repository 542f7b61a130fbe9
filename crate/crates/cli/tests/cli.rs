use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

fn junction(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_junction")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/square_dnd_sweep.csv")
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let j = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(j).unwrap().to_string()).collect()
}

#[test]
fn constants_table() {
    let o = junction(&["constants", "--k-max", "3"]);
    assert!(o.status.success());
    let kappa: Vec<f64> = column(&stdout(&o), "kappa_lead").iter().map(|s| s.parse().unwrap()).collect();
    let want = [PI / 2.0, PI / 4.0, 3.0 * PI / 8.0];
    assert_eq!(kappa.len(), 3);
    for (g, w) in kappa.iter().zip(want) {
        assert!((g - w).abs() < 1e-15, "{g} vs {w}");
    }
}

#[test]
fn exact_square_and_disk() {
    let values = |domain: &str, count: &str| -> Vec<f64> {
        let o = junction(&["exact", "--domain", domain, "--count", count]);
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        v["eigenvalues"].as_array().unwrap().iter().map(|e| e["value"].as_f64().unwrap()).collect()
    };
    assert_eq!(values("square", "4"), [2.0, 5.0, 5.0, 8.0]);
    let v = values("disk", "3");
    assert!((v[0] - 2.404825557695773f64.powi(2)).abs() < 1e-9);
    assert_eq!(v[1], v[2]);
}

#[test]
fn expansion_json() {
    let o = junction(&["expand", "--domain", "square", "--index", "2", "--eps", "0.1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["half_problem"], "dnd");
    assert_eq!(v["source"], "closed-form");
    assert_eq!(v["exponent"], 2);
    let c = v["coefficient"].as_f64().unwrap();
    assert!((c + 16.0 / PI).abs() < 1e-12);
    assert!((v["prediction"].as_f64().unwrap() - (5.0 - 0.16 / PI)).abs() < 1e-12);
}

#[test]
fn fit_on_the_golden_sweep() {
    let o = junction(&["fit", "--in", fixture().to_str().unwrap(), "--index", "1", "--lambda0", "5", "--kind", "power"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let c = v["coefficient_extrapolated"].as_f64().unwrap();
    assert!((c - 16.0 / PI).abs() < 0.02 * 16.0 / PI, "{c}");
    let p = v["exponent_fit"].as_f64().unwrap();
    assert!((1.9..=2.1).contains(&p));
    assert_eq!(v["kind"], "power");
}

#[test]
fn fit_svg_output() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("fit.svg");
    let o = junction(&["fit", "--in", fixture().to_str().unwrap(), "--lambda0", "5", "--svg", svg.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(svg).unwrap();
    assert!(text.contains("<svg") && text.matches("<circle").count() == 5 && text.contains("<polyline"));
}

#[test]
fn wrong_law_is_a_numerical_failure() {
    let o = junction(&["fit", "--in", fixture().to_str().unwrap(), "--lambda0", "5", "--kind", "log"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("numerical failure:"), "{}", stderr(&o));
}

#[test]
fn error_classes_have_distinct_prefixes() {
    let o = junction(&["constants", "--bogus"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("usage error:"));

    let o = junction(&["profile", "--k", "1", "--samples", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("validation error:"));

    let o = junction(&["fit", "--in", "/nonexistent/sweep.csv", "--lambda0", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("io error:"));

    let o = junction(&["solve", "--variant", "dnd", "--eps", "0.001", "--h", "0.05", "--grading", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("validation error:"));
}

#[test]
fn help_lists_defaults() {
    let o = junction(&["solve", "--help"]);
    assert!(o.status.success());
    let h = stdout(&o);
    for flag in ["--domain", "--variant", "--eps", "--count", "--h", "--grading", "--tol", "--vector-out", "--config"] {
        assert!(h.contains(flag), "{flag}");
    }
    assert!(h.contains("[default: 0.02]"));
}

#[test]
fn solve_is_byte_deterministic() {
    let args = ["solve", "--variant", "ndn", "--eps", "0.3", "--count", "3", "--h", "0.1", "--grading", "2"];
    let a = junction(&args);
    let b = junction(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(column(&stdout(&a), "index"), ["1", "2", "3"]);
}

#[test]
fn solve_writes_the_eigenvector() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.csv");
    let o = junction(&[
        "solve", "--variant", "dnd", "--eps", "0.3", "--count", "2", "--h", "0.1", "--grading", "2", "--vector", "2",
        "--vector-out", path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("vertex_index,x,y,value\n"));
}

#[test]
fn config_file_sets_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# constants table\nk_max = 2\n").unwrap();
    let o = junction(&["--config", cfg.to_str().unwrap(), "constants"]);
    assert_eq!(column(&stdout(&o), "k"), ["1", "2"]);
    let o = junction(&["constants", "--config", cfg.to_str().unwrap(), "--k-max", "4"]);
    assert_eq!(column(&stdout(&o), "k"), ["1", "2", "3", "4"]);
    std::fs::write(&cfg, "k_max = 2\nunknown_key = 1\n").unwrap();
    let o = junction(&["--config", cfg.to_str().unwrap(), "constants"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_to_file_with_plot() {
    let dir = tempfile::tempdir().unwrap();
    let (out, svg) = (dir.path().join("s.csv"), dir.path().join("s.svg"));
    let o = junction(&[
        "sweep", "--variant", "dnd", "--eps-list", "0.4,0.3,0.2", "--count", "1", "--h", "0.1", "--grading", "2",
        "--out", out.to_str().unwrap(), "--svg", svg.to_str().unwrap(), "--lambda0", "5",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(out).unwrap();
    assert!(csv.starts_with("epsilon,index,lambda,residual,n_dof,h_min\n"));
    assert_eq!(csv.lines().count(), 4);
    assert!(std::fs::read_to_string(svg).unwrap().contains("</svg>"));

    let o = junction(&["sweep", "--variant", "dnd", "--eps-list", "0.3,0.2", "--svg", "x.svg"]);
    assert_eq!(o.status.code(), Some(1));
    let o = junction(&["sweep", "--variant", "dnd", "--eps-list", "0.3,abc"]);
    assert!(stderr(&o).starts_with("validation error:"));
}

#[test]
fn ab_table_labels_the_branches() {
    let o = junction(&["ab", "--domain", "square", "--eps-list", "0.3,0.2", "--count", "4", "--h", "0.1", "--grading", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 9);
    let halves = column(&s, "half_problem");
    assert_eq!(&halves[..4], ["ndn", "dnd", "ndn", "dnd"]);
    let lambda: Vec<f64> = column(&s, "lambda").iter().map(|v| v.parse().unwrap()).collect();
    assert!(lambda[..4].windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn profile_vanishes_off_the_window() {
    let o = junction(&["profile", "--k", "1", "--samples", "5", "--radius", "2"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 26);
    let rows: Vec<Vec<f64>> = s.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    for r in rows.iter().filter(|r| r[1] == 0.0 && r[0].abs() > 1.0) {
        assert!(r[4].abs() < 1e-12, "{r:?}");
    }
    for r in &rows {
        assert!((r[2] + r[3] - r[4]).abs() < 1e-12);
    }
}

#[test]
fn blowup_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let o = junction(&["blowup", "--eps", "0.1", "--R", "2", "--h", "0.04", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["relative_rms"].as_f64().unwrap() < 0.15);
    assert!((v["beta"].as_f64().unwrap() - 4.0 * 2f64.sqrt() / PI).abs() < 1e-15);
    let csv = std::fs::read_to_string(out).unwrap();
    assert!(csv.starts_with("x1,x2,rescaled,profile\n"));
    assert_eq!(csv.lines().count() as u64, v["samples"].as_u64().unwrap() + 1);

    let o = junction(&["blowup", "--eps", "0.1", "--m", "1", "--n", "1"]);
    assert_eq!(o.status.code(), Some(1));
}
