use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_collapse-sim"));
    cmd.env_remove("COLLAPSE_SIM_OUT");
    cmd
}

fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn code(cmd: &mut Command) -> (i32, String) {
    let out = cmd.output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn small_config(dir: &Path, extra: &str) -> PathBuf {
    let text = format!(
        r#"{{
  "version": 1,
  "run_id": "small",
  "c": 1.75,
  "scheme": "explicit",
  "N": 40,
  "dt": 1e-4,
  "ic": {{ "kind": "selfsimilar", "B": 1.0, "t0": 1.0, "t_start": 0.0 }},
  "output_dir": "{}",
  "snapshot_every": 1000{extra}
}}"#,
        dir.join("out").display()
    );
    let path = dir.join("small.json");
    fs::write(&path, text).unwrap();
    path
}

fn preset(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("presets")
        .join(format!("{name}.json"))
}

#[test]
fn simulate_writes_series_snapshots_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path(), "");
    let out = run_ok(bin().args(["simulate", "--config"]).arg(&cfg));
    let summary = String::from_utf8(out.stdout).unwrap();
    assert_eq!(summary.lines().count(), 1);
    assert!(summary.contains("t=") && summary.contains("x_f=") && summary.contains("h_max="));

    let dir = tmp.path().join("out");
    let series = fs::read_to_string(dir.join("small_series.csv")).unwrap();
    assert_eq!(series.lines().next().unwrap(), "t,x_L,x_R,h_max");
    let snap = fs::read_to_string(dir.join("small_snap_0.csv")).unwrap();
    assert_eq!(snap.lines().next().unwrap(), "xi,h,x_phys");
    assert_eq!(snap.lines().count(), 42);

    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["artifact_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(manifest["config"]["N"], 40);
    assert_eq!(manifest["config"]["record_every"], 1);
}

#[test]
fn rerun_from_manifest_is_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path(), "");
    run_ok(bin().args(["simulate", "--config"]).arg(&cfg));
    let first = tmp.path().join("out");
    let again = tmp.path().join("again");
    run_ok(
        bin()
            .args(["simulate", "--manifest"])
            .arg(first.join("manifest.json"))
            .arg("--out")
            .arg(&again),
    );
    let a = fs::read(first.join("small_series.csv")).unwrap();
    let b = fs::read(again.join("small_series.csv")).unwrap();
    assert_eq!(a, b);
    for entry in fs::read_dir(&first).unwrap() {
        let name = entry.unwrap().file_name();
        if name.to_string_lossy().contains("_snap_") {
            assert_eq!(
                fs::read(first.join(&name)).unwrap(),
                fs::read(again.join(&name)).unwrap()
            );
        }
    }
}

#[test]
fn environment_overrides_output_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path(), "");
    let target = tmp.path().join("from_env");
    run_ok(
        bin()
            .env("COLLAPSE_SIM_OUT", &target)
            .args(["simulate", "--config"])
            .arg(&cfg),
    );
    assert!(target.join("small_series.csv").exists());
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn conflicting_physics_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let rf = r#", "rock_fluid": { "permeability": 1e-12, "block_porosity": 0.05,
        "fissure_porosity": 0.02, "absorption_fraction": 0.7, "density": 1000.0,
        "viscosity": 1e-3 }"#;
    let cfg = small_config(tmp.path(), rf);
    let (status, err) = code(bin().args(["simulate", "--config"]).arg(&cfg));
    assert_eq!(status, 1);
    assert!(err.contains("mutually exclusive"), "{err}");
}

#[test]
fn bad_time_step_and_unknown_keys_are_config_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path(), "");
    let text = fs::read_to_string(&cfg).unwrap();
    for bad in [
        text.replace("\"dt\": 1e-4", "\"dt\": 0.0"),
        text.replace("\"dt\": 1e-4", "\"dt\": -1e-4"),
        text.replace("\"N\": 40", "\"N\": 40, \"extra\": 1"),
        text.replace("\"version\": 1", "\"version\": 7"),
    ] {
        fs::write(&cfg, bad).unwrap();
        let (status, _) = code(bin().args(["simulate", "--config"]).arg(&cfg));
        assert_eq!(status, 1);
    }
}

#[test]
fn numerical_abort_exits_two_and_names_the_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("abort.json");
    fs::write(
        &cfg,
        format!(
            r#"{{"version": 1, "run_id": "abort", "c": 1.75, "scheme": "implicit", "N": 40,
            "dt": 0.2, "ic": {{"kind": "nonsymmetric"}}, "output_dir": "{}"}}"#,
            tmp.path().join("o").display()
        ),
    )
    .unwrap();
    let (status, err) = code(bin().args(["simulate", "--config"]).arg(&cfg));
    assert_eq!(status, 2);
    assert!(err.contains("negative level"), "{err}");
    assert!(tmp.path().join("o/abort_series.csv").exists());
}

#[test]
fn sweep_runs_each_c_in_its_own_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path(), "");
    let out = run_ok(
        bin()
            .args(["simulate", "--config"])
            .arg(&cfg)
            .args(["--sweep", "1.75,2.5"]),
    );
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 2);
    for c in ["1.75", "2.5"] {
        let dir = tmp.path().join("out").join(format!("small_c{c}"));
        assert!(dir.join(format!("small_c{c}_series.csv")).exists());
        let m: Value =
            serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
        assert_eq!(m["c_resolved"].as_f64().unwrap(), c.parse::<f64>().unwrap());
    }
}

#[test]
fn fit_reports_exponent_of_self_similar_run() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("f4");
    run_ok(
        bin()
            .args(["simulate", "--config"])
            .arg(preset("figure4"))
            .arg("--out")
            .arg(&out),
    );
    let stdout = run_ok(
        bin()
            .args(["fit", "--series"])
            .arg(out.join("figure4_series.csv"))
            .args(["--c", "1.75"]),
    )
    .stdout;
    let report: Value = serde_json::from_slice(&stdout).unwrap();
    for key in [
        "t0",
        "B",
        "mu",
        "r2_linear",
        "r2_loglog",
        "window_start",
        "window_end",
    ] {
        assert!(report[key].is_number(), "{key}");
    }
    assert!((report["mu"].as_f64().unwrap() - 1.5).abs() < 0.03);
    let fig2a = fs::read_to_string(out.join("figure4_series_fig2a.csv")).unwrap();
    assert!(fig2a.starts_with("t,xf2_over_hmax"));
    let fig2b = fs::read_to_string(out.join("figure4_series_fig2b.csv")).unwrap();
    assert!(fig2b.starts_with("ln_t0_minus_t,ln_xf"));
}

#[test]
fn fit_of_truncated_series_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_config(tmp.path(), "");
    run_ok(bin().args(["simulate", "--config"]).arg(&cfg));
    let full = fs::read_to_string(tmp.path().join("out/small_series.csv")).unwrap();
    let cut: String = full.lines().take(12).map(|l| format!("{l}\n")).collect();
    let path = tmp.path().join("cut.csv");
    fs::write(&path, cut).unwrap();
    let (status, err) = code(
        bin()
            .args(["fit", "--series"])
            .arg(&path)
            .args(["--c", "1.75"]),
    );
    assert_eq!(status, 2, "{err}");
}

#[test]
fn selfsimilar_profile_series_and_errors() {
    let out = run_ok(bin().args([
        "selfsimilar",
        "--c",
        "1.75",
        "--B",
        "1",
        "--t0",
        "1",
        "--t",
        "0",
        "--points",
        "5",
    ]));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (x, h) = l.split_once(',').unwrap();
            (x.parse().unwrap(), h.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0], (-1.0, 0.0));
    assert_eq!(rows[2], (0.0, 1.0));
    assert_eq!(rows[4], (1.0, 0.0));

    let out = run_ok(bin().args([
        "selfsimilar",
        "--c",
        "1.75",
        "--B",
        "1",
        "--t0",
        "1",
        "--series",
        "--t-start",
        "0",
        "--t-end",
        "0.5",
        "--points",
        "3",
    ]));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("t,x_f,h_max"));
    assert_eq!(text.lines().count(), 4);

    let out = run_ok(bin().args([
        "selfsimilar",
        "--c",
        "1.5",
        "--theta",
        "2",
        "--C",
        "1",
        "--t",
        "1",
        "--points",
        "3",
    ]));
    assert!(String::from_utf8(out.stdout).unwrap().lines().count() == 4);

    let (status, _) = code(bin().args([
        "selfsimilar",
        "--c",
        "1.75",
        "--B",
        "1",
        "--t0",
        "1",
        "--t",
        "1",
    ]));
    assert_eq!(status, 1);
}

#[test]
fn shoot_reports_error_against_closed_form() {
    let tmp = tempfile::tempdir().unwrap();
    let profile = tmp.path().join("f.csv");
    let out = run_ok(
        bin()
            .args(["shoot", "--c", "1.75", "--profile"])
            .arg(&profile),
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let err: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("abs_error = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(err < 1e-5, "{text}");
    assert!(fs::read_to_string(&profile).unwrap().starts_with("xi,F"));

    let out = run_ok(bin().args(["shoot", "--c", "2"]));
    let text = String::from_utf8(out.stdout).unwrap();
    let mu: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("mu_numeric = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((mu - 1.0).abs() < 1e-5);
}

#[test]
fn shoot_exit_codes() {
    assert_eq!(code(bin().args(["shoot", "--c", "1.4"])).0, 1);
    let (status, err) = code(bin().args([
        "shoot", "--c", "1.75", "--method", "shooting", "--mu-lo", "2", "--mu-hi", "3",
    ]));
    assert_eq!(status, 2, "{err}");
}

#[test]
fn reduce_prints_c() {
    let out = run_ok(
        bin()
            .args(["reduce", "--params"])
            .arg(preset("rock_fluid_example")),
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["c"].as_f64().unwrap() - 1.75).abs() < 1e-12);
    assert_eq!(v["regime"], "FiniteTimeCollapse");
}

#[test]
fn presets_parse() {
    for name in ["figure1", "figure3", "figure4"] {
        let cfg = collapse_sim::config::RunConfig::load(&preset(name)).unwrap();
        cfg.resolve().unwrap();
    }
}
