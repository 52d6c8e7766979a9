//! End-to-end tests of the `entcap` binary: exit codes, output formats,
//! config-file handling, and determinism.

use std::path::Path;
use std::process::{Command, Output};

fn entcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entcap"))
        .args(args)
        .env_remove("ENTCAP_OUTPUT_DIR")
        .output()
        .expect("failed to launch binary")
}

fn entcap_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entcap"))
        .args(args)
        .current_dir(dir)
        .env_remove("ENTCAP_OUTPUT_DIR")
        .output()
        .expect("failed to launch binary")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn verdict_entangled_exit_0() {
    let out = entcap(&["verdict", "--scenario", "ising-tunable", "--lambda", "0", "--omega", "0"]);
    assert_eq!(code(&out), 0, "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("entangled"), "{text}");
    assert!(text.contains("5.0000000000"), "negativity 0.5 missing: {text}");
}

#[test]
fn verdict_separable_exit_1() {
    let out =
        entcap(&["verdict", "--scenario", "ising-tunable", "--lambda", "1.4", "--omega", "0"]);
    assert_eq!(code(&out), 1, "{out:?}");
    assert!(stdout(&out).contains("separable"));
}

#[test]
fn verdict_laplace_entangled() {
    let out =
        entcap(&["verdict", "--scenario", "ising-laplace", "--lambda", "0.5", "--omega", "0.5"]);
    assert_eq!(code(&out), 0, "{out:?}");
}

#[test]
fn verdict_indeterminate_exit_2() {
    // negativity of this family decays like e^{-omega^2}; at width 5 the
    // minimal PT eigenvalue sits below the decision tolerance
    let out = entcap(&["verdict", "--scenario", "xy-family", "--lambda", "1", "--omega", "5"]);
    assert_eq!(code(&out), 2, "{out:?}");
    assert!(stdout(&out).contains("boundary"));
}

#[test]
fn verdict_json_report() {
    let out = entcap(&[
        "verdict", "--scenario", "xyz-tunable", "--lambda", "0.5", "--omega", "0.3", "--zbar",
        "0.7", "--json",
    ]);
    assert_eq!(code(&out), 0, "{out:?}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("invalid JSON");
    assert_eq!(v["scenario"], "xyz-tunable");
    assert!(v["negativity"].as_f64().unwrap() > 0.0);
    assert!(v["predicate_margin"].is_number());
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        &["verdict", "--scenario", "nonsense", "--lambda", "0"][..],
        &["verdict", "--lambda", "0"][..],
        &["verdict", "--scenario", "ising-tunable", "--lambda", "-1"][..],
        &["verdict", "--scenario", "ising-tunable", "--lambda", "abc"][..],
        &["verdict", "--scenario", "ising-tunable", "--lambda", "0", "--capital-lambda", "1"][..],
        &["verdict", "--scenario", "ising-tunable", "--lambda", "0", "--zbar", "0.5"][..],
        &["frobnicate"][..],
        &[][..],
    ] {
        let out = entcap(args);
        assert_eq!(code(&out), 64, "args {args:?}: {out:?}");
    }
}

#[test]
fn version_exit_0() {
    let out = entcap(&["version"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn boundary_threshold_and_exit_codes() {
    let out = entcap(&[
        "boundary", "--scenario", "ising-tunable", "--omega", "0", "--axis", "lambda",
        "--bracket", "0:3",
    ]);
    assert_eq!(code(&out), 0, "{out:?}");
    assert!(stdout(&out).contains("1.3276"), "{}", stdout(&out));

    // entangled along the whole omega axis at lambda = 0
    let out = entcap(&[
        "boundary", "--scenario", "ising-tunable", "--lambda", "0", "--axis", "omega",
        "--bracket", "0:5",
    ]);
    assert_eq!(code(&out), 3, "{out:?}");
}

#[test]
fn sweep_csv_schema_and_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let outpath = dir.path().join("out.csv");
    let out = entcap(&[
        "sweep", "--scenario", "ising-tunable", "--grid", "lambda=0:2:0.5", "--grid",
        "omega=0:1:0.5", "--output", outpath.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{out:?}");

    let text = std::fs::read_to_string(&outpath).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "scenario,lambda,omega_or_capital_lambda,zbar,phi,predicate_margin,predicate_class,\
         min_pt_eigenvalue,negativity,initial_entropy_bits,method"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 15);
    for row in rows {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f.len(), 11);
        assert_eq!(f[0], "ising-tunable");
        for idx in [1, 2, 5, 7, 8, 9] {
            f[idx].parse::<f64>().unwrap_or_else(|_| panic!("bad float '{}'", f[idx]));
        }
        assert!(f[3].is_empty() && f[4].is_empty(), "zbar/phi should be empty: {row}");
        assert!(["entangled", "separable", "boundary"].contains(&f[6]));
        assert_eq!(f[10], "closed-form");
    }

    let manifest_path = dir.path().join("out.csv.manifest.json");
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(manifest_path).unwrap()).unwrap();
    assert_eq!(manifest["points"], 15);
    assert_eq!(manifest["method"], "closed-form");
}

#[test]
fn sweep_deterministic_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut contents = Vec::new();
    for name in ["first.csv", "second.csv"] {
        let path = dir.path().join(name);
        let out = entcap(&[
            "sweep", "--scenario", "xyz-tunable", "--grid", "lambda=0:1:0.25", "--grid",
            "zbar=-1:1:0.5", "--omega", "0.4", "--method", "quadrature:31", "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{out:?}");
        contents.push(std::fs::read_to_string(&path).unwrap());
    }
    assert_eq!(contents[0], contents[1]);
}

#[test]
fn sweep_grid_guard_exit_64() {
    let out = entcap(&[
        "sweep", "--scenario", "ising-tunable", "--grid", "lambda=0:10:0.0001", "--grid",
        "omega=0:10:0.0001", "--output", "unwritten.csv",
    ]);
    assert_eq!(code(&out), 64, "{out:?}");
}

#[test]
fn sweep_unwritable_path_exit_64() {
    let out = entcap(&[
        "sweep", "--scenario", "ising-tunable", "--grid", "lambda=0:1:1", "--output",
        "/nonexistent-dir/out.csv",
    ]);
    assert_eq!(code(&out), 64, "{out:?}");
}

#[test]
fn output_dir_override() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_entcap"))
        .args([
            "sweep", "--scenario", "ising-tunable", "--grid", "lambda=0:1:1", "--output",
            "rel.csv",
        ])
        .env("ENTCAP_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{out:?}");
    assert!(dir.path().join("rel.csv").exists());
    assert!(dir.path().join("rel.csv.manifest.json").exists());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(
        &cfg,
        "# single-point check\nscenario = ising-tunable\nlambda = 1.4\nomega = 0\n",
    )
    .unwrap();

    // config alone: separable
    let out = entcap_in(dir.path(), &["verdict", "--config", "run.conf"]);
    assert_eq!(code(&out), 1, "{out:?}");

    // flag overrides the file value: entangled
    let out = entcap_in(dir.path(), &["verdict", "--config", "run.conf", "--lambda", "0"]);
    assert_eq!(code(&out), 0, "{out:?}");

    // malformed file
    std::fs::write(&cfg, "scenario ising-tunable\n").unwrap();
    let out = entcap_in(dir.path(), &["verdict", "--config", "run.conf"]);
    assert_eq!(code(&out), 64, "{out:?}");
}

#[test]
fn validate_grid_and_samples() {
    let out = entcap(&[
        "validate", "--scenario", "ising-tunable", "--grid", "lambda=0:3:0.15", "--grid",
        "omega=0:3:0.15",
    ]);
    assert_eq!(code(&out), 0, "{out:?}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["disagreements"], 0);
    assert_eq!(v["total"], 441);

    let out = entcap(&[
        "validate", "--scenario", "xyz-tunable", "--samples", "100", "--seed", "42",
    ]);
    assert_eq!(code(&out), 0, "{out:?}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["disagreements"], 0);
    assert!(v["max_disagreement_margin"].is_number());
}
