use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cdwtunnel::transport::{current_sge, current_zener, TransportParams};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdwtunnel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn rows(path: &Path) -> Vec<Vec<f64>> {
    let text = fs::read_to_string(path).unwrap();
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn round12(v: f64) -> f64 {
    format!("{v:.11e}").parse().unwrap()
}

#[test]
fn zener_curve_is_zero_up_to_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("z.csv");
    let res = run(&[
        "curve",
        "--model",
        "zener",
        "--lo",
        "0.5",
        "--hi",
        "2",
        "--n",
        "31",
        "--spacing",
        "linear",
        "--e-t",
        "1",
        "-o",
        path_arg(&out),
    ]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let data = rows(&out);
    assert_eq!(data.len(), 31);
    for r in &data {
        if r[0] <= 1.0 {
            assert_eq!(r[1], 0.0);
        } else {
            assert!(r[1] > 0.0);
        }
    }
}

#[test]
fn both_models_share_one_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let res = run(&["curve", "--model", "both", "--n", "5", "-o", path_arg(&out)]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "E,I_sge,I_zener");
}

#[test]
fn default_grid_spans_threshold_multiples() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.csv");
    let res = run(&["curve", "--e-t", "2", "-o", path_arg(&out)]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let data = rows(&out);
    assert_eq!(data.len(), 200);
    assert_eq!(data[0][0], 2.1);
    assert_eq!(data[199][0], 20.0);
}

#[test]
fn written_values_round_trip_to_twelve_digits() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let res = run(&[
        "curve",
        "--c-tilde1",
        "0.37",
        "--c-v",
        "1.9",
        "--g-p",
        "3.3",
        "-o",
        path_arg(&out),
    ]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let tp = TransportParams {
        c_tilde1: 0.37,
        c_v: 1.9,
        g_p: 3.3,
        ..TransportParams::default()
    };
    let grid = cdwtunnel::verify::logspace(1.05, 10.0, 200);
    for (r, &e) in rows(&out).iter().zip(&grid) {
        assert_eq!(r[0].to_bits(), round12(e).to_bits());
        assert_eq!(
            r[1].to_bits(),
            round12(current_sge(e, &tp).unwrap()).to_bits()
        );
        assert_eq!(
            r[2].to_bits(),
            round12(current_zener(e, &tp).unwrap()).to_bits()
        );
    }
}

#[test]
fn missing_output_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let res = Command::new(env!("CARGO_BIN_EXE_cdwtunnel"))
        .args(["curve", "--model", "sge"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&res), 1);
    assert!(stderr(&res).contains("output"));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn invalid_grid_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bad.csv");
    for args in [
        vec!["--lo", "3", "--hi", "2"],
        vec!["--n", "1"],
        vec!["--lo", "-1", "--spacing", "log"],
        vec!["--c-v", "-1"],
    ] {
        let mut full = vec!["curve", "-o", path_arg(&out)];
        full.extend(args);
        let res = run(&full);
        assert_eq!(code(&res), 1, "{full:?}");
        assert!(!out.exists());
    }
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let out = dir.path().join("c.csv");
    fs::write(
        &cfg,
        format!(
            r#"{{"transport": {{"e_t": 2.0}}, "grid": {{"lo": 3.0, "hi": 6.0, "n": 4, "spacing": "linear"}}, "model": "zener", "output": {:?}}}"#,
            out
        ),
    )
    .unwrap();
    let res = run(&["curve", "--config", path_arg(&cfg), "--n", "7"]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let data = rows(&out);
    assert_eq!(data.len(), 7);
    assert_eq!(data[0][0], 3.0);
    let tp = TransportParams {
        e_t: 2.0,
        ..TransportParams::default()
    };
    assert_eq!(data[6][1], round12(current_zener(6.0, &tp).unwrap()));

    fs::write(&cfg, r#"{"transprt": {}}"#).unwrap();
    let res = run(&["curve", "--config", path_arg(&cfg)]);
    assert_eq!(code(&res), 1);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        assert_eq!(
            code(&run(&["matrix-element", "--n", "6", "-o", path_arg(p)])),
            0
        );
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let sa = fs::read(dir.path().join("a.csv.json")).unwrap();
    let sb = fs::read(dir.path().join("b.csv.json")).unwrap();
    assert_eq!(sa, sb);
}

fn fit_report(res: &Output) -> serde_json::Value {
    assert_eq!(code(res), 0, "{}", stderr(res));
    serde_json::from_slice(&res.stdout).unwrap()
}

#[test]
fn synthetic_self_fit_recovers_parameters() {
    let res = run(&[
        "fit",
        "--target",
        "sge",
        "--c-tilde1",
        "2.5",
        "--c-v",
        "0.7",
        "--start-c-tilde1",
        "2.1",
        "--start-c-v",
        "0.8",
    ]);
    let report = fit_report(&res);
    assert_eq!(report["converged"], true);
    assert!(report["residual_rms"].as_f64().unwrap() < 1e-10);
    assert!((report["params"]["c_tilde1"].as_f64().unwrap() - 2.5).abs() < 1e-8);
    assert!((report["params"]["c_v"].as_f64().unwrap() - 0.7).abs() < 1e-8);
}

#[test]
fn zener_fit_report_has_all_fields() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fit.json");
    let res = run(&["fit", "--free", "c_tilde1,c_v", "-o", path_arg(&out)]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let report: serde_json::Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    for key in ["params", "residual_rms", "iterations", "converged"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn fit_grid_below_threshold_is_reported_verbatim() {
    let res = run(&["fit", "--lo", "0.5", "--hi", "3"]);
    assert_eq!(code(&res), 2);
    assert!(stderr(&res).contains("not above the threshold field"));
}

#[test]
fn fit_reads_csv_data() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    let tp = TransportParams {
        c_tilde1: 1.7,
        c_v: 1.3,
        ..TransportParams::default()
    };
    let mut text = String::from("E,I\n");
    for i in 0..30 {
        let e = 1.2 + 0.1 * i as f64;
        text.push_str(&format!("{e},{}\n", current_sge(e, &tp).unwrap()));
    }
    fs::write(&data, text).unwrap();
    let report = fit_report(&run(&["fit", "--data", path_arg(&data)]));
    assert!((report["params"]["c_tilde1"].as_f64().unwrap() - 1.7).abs() < 1e-8);
    assert!((report["params"]["c_v"].as_f64().unwrap() - 1.3).abs() < 1e-8);
}

#[test]
fn malformed_csv_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    fs::write(
        &data,
        "E,I\n1.2,1\n1.3,2\n1.4,3\n1.5,4\n1.6,5\n1.7,abc\n1.8,7\n",
    )
    .unwrap();
    let res = run(&["fit", "--data", path_arg(&data)]);
    assert_eq!(code(&res), 1);
    assert!(stderr(&res).contains("line 7"), "{}", stderr(&res));
}

#[test]
fn empty_data_file_has_no_rows() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    fs::write(&data, "").unwrap();
    let res = run(&["fit", "--data", path_arg(&data)]);
    assert_eq!(code(&res), 1);
    assert!(stderr(&res).contains("no data rows"));
    fs::write(&data, "E,I\n").unwrap();
    assert!(stderr(&run(&["fit", "--data", path_arg(&data)])).contains("no data rows"));
}

#[test]
fn default_profile_has_zero_charge() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let res = run(&["profile", "-o", path_arg(&out)]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let sidecar: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("p.csv.json")).unwrap()).unwrap();
    assert!(sidecar["topological_charge"].as_f64().unwrap().abs() <= 1e-12);
    assert_eq!(rows(&out).len(), 401);
}

#[test]
fn transform_vanishes_at_first_node() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let k_out = dir.path().join("k.csv");
    let l = std::f64::consts::PI;
    let l_arg = l.to_string();
    let res = run(&[
        "profile",
        "-o",
        path_arg(&out),
        "--l",
        &l_arg,
        "--k-lo",
        "1",
        "--k-hi",
        "3",
        "--k-n",
        "3",
        "--k-output",
        path_arg(&k_out),
    ]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let k = rows(&k_out);
    assert_eq!(k[1][0], 2.0);
    assert_eq!(k[1][1], 0.0);
    assert!(k[0][1] > 0.0);
}

#[test]
fn minimal_profile_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let res = run(&["profile", "--n", "2", "-o", path_arg(&out)]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    assert_eq!(rows(&out).len(), 2);
}

#[test]
fn matrix_elements_on_both_axes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");
    let res = run(&[
        "matrix-element",
        "--axis",
        "l",
        "--n",
        "8",
        "-o",
        path_arg(&out),
    ]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    for r in rows(&out) {
        assert!((r[1] / r[2] - 0.5).abs() < 1e-11);
        assert!(r[3] > 0.0);
    }
    let res = run(&[
        "matrix-element",
        "--axis",
        "e",
        "--n",
        "5",
        "-o",
        path_arg(&out),
    ]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let header = fs::read_to_string(&out).unwrap();
    assert!(header.starts_with("E,L,x_bar,t_analytic,t_simplified,t_oracle\n"));
    assert_eq!(rows(&out).len(), 5);
    assert_eq!(
        code(&run(&[
            "matrix-element",
            "--axis",
            "q",
            "-o",
            path_arg(&out)
        ])),
        1
    );
}

#[test]
fn verify_default_run_passes() {
    let res = run(&["verify"]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stdout));
    let text = String::from_utf8_lossy(&res.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 8);
}

#[test]
fn unattainable_tolerance_fails_verification() {
    let res = run(&["verify", "--only", "ft_box", "--tol", "ft_box=1e-30"]);
    assert_eq!(code(&res), 3);
    assert!(String::from_utf8_lossy(&res.stdout).starts_with("FAIL ft_box"));
}

#[test]
fn unknown_check_lists_valid_names() {
    let res = run(&["verify", "--only", "nonexistent"]);
    assert_eq!(code(&res), 1);
    let err = stderr(&res);
    assert!(err.contains("erf_quadrature") && err.contains("oracle_slope"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["curve", "--n", "many"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}
