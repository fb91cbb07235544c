use std::path::Path;
use std::process::{Command, Output};

use edudyn::output::validate_csv;

fn edudyn(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_edudyn"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("EDUDYN_THREADS", t),
        None => cmd.env_remove("EDUDYN_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn error_record(out: &Output) -> serde_json::Value {
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(stderr.trim()).unwrap_or_else(|e| panic!("{e}: {stderr}"))
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn simulate_preset_writes_the_attractor_band() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let run = edudyn(&["simulate", "--preset", "fig3", "--out", out], None);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let text = read(&dir.path().join("simulate.csv"));
    let v = validate_csv(&text).unwrap();
    assert_eq!(v.rows, 300);
    for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let e: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((0.33..=0.64).contains(&e));
    }
    let check = edudyn(&["validate", dir.path().join("simulate.csv").to_str().unwrap()], None);
    assert!(check.status.success());
}

#[test]
fn bad_values_name_the_field() {
    let r = edudyn(&["simulate", "--preset", "fig3", "--set", "model.price_education=-1"], None);
    let rec = error_record(&r);
    assert_eq!(rec["error"], "config_invalid");
    assert_eq!(rec["experiment"], "simulate");
    assert!(rec["message"].as_str().unwrap().contains("model.price_education"));
}

#[test]
fn unknown_keys_report_their_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "experiment = simulate\n# comment\nmodel.sgima = 3\n").unwrap();
    let r = edudyn(&["run", "--config", cfg.to_str().unwrap()], None);
    let rec = error_record(&r);
    assert_eq!(rec["error"], "config_unknown_key");
    assert!(rec["message"].as_str().unwrap().contains("run.conf:3"));
}

#[test]
fn model_refusals_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let r = edudyn(
        &["absorbing-interval", "--preset", "fig3", "--out", dir.path().to_str().unwrap()],
        None,
    );
    assert_eq!(error_record(&r)["error"], "unimodality_not_certified");
}

#[test]
fn json_config_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"experiment": "fixed-points", "model": {"sigma": 3}, "mix": {"lambda": 0.5}}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let r = edudyn(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()], None);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let v = validate_csv(&read(&out.join("fixed-points.csv"))).unwrap();
    assert_eq!(v.schema, "fixed-points");
    assert!(v.rows >= 1);
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (k, threads) in [Some("1"), Some("3"), None].into_iter().enumerate() {
        let out = dir.path().join(k.to_string());
        let r = edudyn(
            &[
                "bifurcate",
                "--preset",
                "fig6",
                "--set",
                "sweep.grid_points=120",
                "--out",
                out.to_str().unwrap(),
            ],
            threads,
        );
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
        outputs.push(read(&out.join("bifurcate.csv")));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
    assert!(outputs[0].contains("# sweep.grid_points = 120"));
}

#[test]
fn bad_thread_count_is_rejected() {
    let r = edudyn(&["simulate", "--preset", "fig3", "--out", "/nonexistent/x"], Some("zero"));
    assert_eq!(error_record(&r)["error"], "usage");
}

#[test]
fn presets_are_listed() {
    let r = edudyn(&["presets"], None);
    let text = String::from_utf8(r.stdout).unwrap();
    for name in ["fig1a", "fig1b", "fig3", "fig4", "fig5-lambda", "restabilize", "fig6", "fig7"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}

#[test]
fn cobweb_writes_two_files() {
    let dir = tempfile::tempdir().unwrap();
    let r = edudyn(&["cobweb", "--preset", "fig4", "--out", dir.path().to_str().unwrap()], None);
    assert!(r.status.success());
    let stairs = validate_csv(&read(&dir.path().join("cobweb_staircase.csv"))).unwrap();
    assert_eq!(stairs.rows, 201);
    let curve = validate_csv(&read(&dir.path().join("cobweb_curve.csv"))).unwrap();
    assert_eq!(curve.rows, 1000);
}
