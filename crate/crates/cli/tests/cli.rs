use std::path::Path;
use std::process::{Command, Output};

use nalgebra::{DMatrix, SymmetricEigen};
use nilspec_core::schrodinger::{auto_domain, build_symbol_engel, discretize, SpectralConfig};
use serde_json::Value;

fn nilspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilspec")).args(args).env_remove("NILSPEC_CONFIG").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn result(o: &Output) -> Value {
    let v: Value = serde_json::from_slice(&o.stdout).expect("json output");
    assert!(v["provenance"]["config"].is_object());
    v["result"].clone()
}

fn eigenvalues_csv(text: &str) -> Vec<f64> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some("index,eigenvalue"));
    lines
        .enumerate()
        .map(|(k, l)| {
            let (i, e) = l.split_once(',').unwrap();
            assert_eq!(i.parse::<usize>().unwrap(), k);
            e.parse().unwrap()
        })
        .collect()
}

#[test]
fn group_products_are_exact() {
    let o = nilspec(&["group", "--engel", "mul", "1,0,0,0", "0,1,0,0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1,1,-1,1/2");
    let o = nilspec(&["group", "--cartan", "mul", "1,0,0,0,0", "0,1,0,0,0"]);
    assert_eq!(stdout(&o).trim(), "1,1,-1,1/2,1/2");
    let o = nilspec(&["group", "--engel", "inverse", "1,2,3,4"]);
    let inv = stdout(&o).trim().to_string();
    let o = nilspec(&["group", "--engel", "mul", "1,2,3,4", &inv]);
    assert_eq!(stdout(&o).trim(), "0,0,0,0");
    let o = nilspec(&["group", "--cartan", "dilate", "2", "1,1,1,1,1"]);
    assert_eq!(stdout(&o).trim(), "2,2,4,8,8");
    let o = nilspec(&["group", "--engel", "mul", "0.5,-1/3,0,0", "-0.5,1/3,0,0"]);
    assert_eq!(stdout(&o).trim(), "0,0,-1/6,1/24");
}

#[test]
fn commutator_tables() {
    let engel = stdout(&nilspec(&["group", "--engel", "commutators"]));
    for line in ["[I1,I2]=I3", "[I1,I3]=I4", "[I2,I3]=0", "[X1,X2]=-X3", "[X2,X3]=0"] {
        assert!(engel.lines().any(|l| l == line), "missing {line} in\n{engel}");
    }
    let cartan = stdout(&nilspec(&["group", "--cartan", "commutators"]));
    for line in ["[I2,I3]=I5", "[X2,X3]=-X5", "[I2,I5]=0"] {
        assert!(cartan.lines().any(|l| l == line), "missing {line} in\n{cartan}");
    }
}

#[test]
fn malformed_input_exits_with_usage_status() {
    let o = nilspec(&["group", "--engel", "mul", "1,0,0", "0,1,0,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("4 coordinates"));
    let o = nilspec(&["group", "--engel", "mul", "1,x,0,0", "0,1,0,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(nilspec(&["group", "--engel", "--cartan", "commutators"]).status.code(), Some(2));
    assert_eq!(nilspec(&["group", "--engel", "dilate", "-1", "1,1,1,1"]).status.code(), Some(2));
}

#[test]
fn engel_spectrum_matches_dense_oracle() {
    let o = nilspec(&["spectrum", "--engel", "-l", "1", "-m", "0", "-s", "20"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let got = eigenvalues_csv(&stdout(&o));
    assert!(got.windows(2).all(|w| w[0] < w[1]));

    let cfg = SpectralConfig::default();
    let op = build_symbol_engel(1.0, 0.0).unwrap();
    let d = auto_domain(&op, 20.0, &cfg).unwrap();
    let t = discretize(&op, d.half_width, d.points).unwrap();
    let n = t.len();
    let m = DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => t.diagonal()[i],
        1 => t.off_diagonal()[i.min(j)],
        _ => 0.0,
    });
    let mut dense: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().filter(|&e| e < 20.0).collect();
    dense.sort_by(f64::total_cmp);
    assert_eq!(got.len(), dense.len());
    for (a, b) in got.iter().zip(&dense) {
        assert!((a - b).abs() <= 1e-6, "{a} vs {b}");
    }
}

#[test]
fn harmonic_and_empty_spectra() {
    let o = nilspec(&["spectrum", "--harmonic", "-s", "10", "--ppw", "80"]);
    let e = eigenvalues_csv(&stdout(&o));
    assert_eq!(e.len(), 5);
    for (k, v) in e.iter().enumerate() {
        assert!((v - (2 * k + 1) as f64).abs() < 1e-3, "{k}: {v}");
    }
    // λ = 1, μ = 2: V = u⁴/4 + 3, nothing below 3
    let o = nilspec(&["spectrum", "--engel", "-l", "1", "-m", "2", "-s", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "index,eigenvalue\n");
}

#[test]
fn degenerate_points_name_the_constraint() {
    let o = nilspec(&["spectrum", "--engel", "-l", "0", "-s", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("lambda"), "{}", stderr(&o));
    let o = nilspec(&["spectrum", "--cartan", "-l", "1", "-m", "0", "-s", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("mu"), "{}", stderr(&o));
    assert!(nilspec(&["spectrum", "--cartan", "-l", "1", "-m", "0", "--no-inverse", "-s", "10"]).status.success());
}

#[test]
fn counting_slopes_stay_below_the_bound() {
    let o = nilspec(&["count", "--engel", "--s", "1e2:1e4:5"]);
    assert!(o.status.success());
    let r = result(&o);
    assert!(r["slope"].as_f64().unwrap() <= 1.7);
    let o = nilspec(&["count", "--cartan", "-l", "1", "-m", "1", "--rescaled", "--s", "1e2:1e4:5"]);
    assert!(o.status.success());
    let r = result(&o);
    assert!(r["slope"].as_f64().unwrap() <= 2.7);
    assert_eq!(r["limit"].as_f64().unwrap(), 2.7);
}

#[test]
fn volume_and_monte_carlo_are_seeded() {
    let run = |seed: &str| nilspec(&["--seed", seed, "volume", "--engel", "-s", "50", "--mc-samples", "20000"]);
    let (a, b) = (run("7"), run("7"));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = run("8");
    let (ra, rc) = (result(&a), result(&c));
    assert_eq!(ra["volume"], rc["volume"]);
    assert_ne!(ra["monte_carlo"]["estimate"], rc["monte_carlo"]["estimate"]);
    let ratio = ra["weyl_ratio"].as_f64().unwrap();
    assert!((ratio - 1.0).abs() < 0.1);
}

#[test]
fn trace_sweeps_and_fits() {
    let o = nilspec(&["trace", "--engel", "--s", "1e2:1e4:5", "--method", "volume"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = result(&o);
    assert!(r["fit"]["slope"].as_f64().unwrap() <= 3.3);
    assert_eq!(r["estimates"].as_array().unwrap().len(), 5);
    let o = nilspec(&["trace", "--cartan", "--s", "1e2:1e4:5", "--method", "volume", "--cross-validate"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = result(&o);
    assert!(r["fit"]["slope"].as_f64().unwrap() <= 4.8);
    assert_eq!(r["cross_validation"].as_array().unwrap().len(), 3);
}

#[test]
fn trace_rejects_thresholds_at_or_below_one() {
    let o = nilspec(&["trace", "--engel", "--s", "0.5,10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("s > 1"), "{}", stderr(&o));
    assert_eq!(nilspec(&["trace", "--engel", "--s", "10,5"]).status.code(), Some(2));
}

#[test]
fn trace_is_independent_of_thread_count() {
    let run = |threads: &str| {
        let o = nilspec(&[
            "--threads",
            threads,
            "trace",
            "--cartan",
            "--s",
            "1e2,1e3",
            "--method",
            "eigen",
            "--nodes",
            "6,6,6",
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        result(&o)
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn trace_csv() {
    let o = nilspec(&["trace", "--engel", "--s", "1e2,1e3", "--csv", "--nodes", "8,8", "--rule", "midpoint"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,estimate,method,nodes"));
    assert!(lines.next().unwrap().ends_with(",volume_bound,8x8"));
}

#[test]
fn heat_bound_reproduces_closed_form() {
    let o = nilspec(&["bound", "heat", "--engel", "-p", "4/3", "-q", "4", "-t", "1"]);
    assert!(o.status.success());
    let row = &result(&o)["rows"][0];
    let c = 1.5f64.powf(1.5) * (-1.5f64).exp();
    assert!((row["constant"].as_f64().unwrap() - c).abs() < 1e-15);
    assert!((row["exponent"].as_f64().unwrap() - 1.5).abs() < 1e-15);
    // the decimal spelling is close but not equal to 4/3
    let o = nilspec(&["bound", "heat", "--engel", "-p", "1.3333", "-q", "4", "-t", "1"]);
    let row = &result(&o)["rows"][0];
    assert!((row["constant"].as_f64().unwrap() / c - 1.0).abs() < 1e-4);
}

#[test]
fn sobolev_and_phi_bounds() {
    let o = nilspec(&["bound", "sobolev", "--cartan", "-p", "4/3", "-q", "4", "-a", "2.25", "-b", "0"]);
    assert!(o.status.success());
    let r = result(&o);
    assert_eq!(r["holds"], Value::Bool(true));
    assert!(r["margin"].as_f64().unwrap().abs() < 1e-12);
    let o = nilspec(&["bound", "sobolev", "--cartan", "-p", "4/3", "-q", "4", "-a", "2"]);
    assert_eq!(o.status.code(), Some(1));

    let o = nilspec(&["bound", "phi", "--engel", "--power", "1.0", "-p", "1.3333", "-q", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let r = result(&o);
    assert_eq!(r["finite"], Value::Bool(false));
    let o = nilspec(&["bound", "phi", "--engel", "--power", "2", "-p", "4/3", "-q", "4"]);
    assert!(o.status.success());
    assert_eq!(result(&o)["finite"], Value::Bool(true));
    assert_eq!(nilspec(&["bound", "phi", "--engel", "-p", "0.5", "-q", "4", "--heat", "1"]).status.code(), Some(2));
}

#[test]
fn custom_table_and_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("phi.csv");
    let mut text = String::from("s,phi\n");
    for j in 0..=200 {
        let s = 10f64.powf(-3.0 + 5.0 * j as f64 / 200.0);
        text.push_str(&format!("{s},{}\n", (-s).exp()));
    }
    std::fs::write(&table, text).unwrap();
    let o = nilspec(&["bound", "phi", "--engel", "--table", table.to_str().unwrap(), "-p", "4/3", "-q", "4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let sup = result(&o)["sup"].as_f64().unwrap();
    assert!((sup / (1.5f64.powf(1.5) * (-1.5f64).exp()) - 1.0).abs() < 1e-2);

    let o = nilspec(&[
        "bound",
        "e2e",
        "--engel",
        "--heat",
        "1",
        "-p",
        "4/3",
        "-q",
        "4",
        "--s",
        "1e2:1e3:3",
        "--nodes",
        "16,16",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = result(&o);
    let slope = r["slope"].as_f64().unwrap();
    assert!((r["exponent"].as_f64().unwrap() - slope * 0.5).abs() < 1e-12);
}

fn provenance_lines(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path).unwrap().lines().filter(|l| l.starts_with('#')).map(String::from).collect()
}

#[test]
fn config_file_overrides_flags_and_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "kappa = 5.0\nseed = 11\n").unwrap();
    let out = dir.path().join("spec.csv");
    let o = nilspec(&[
        "--config",
        cfg.to_str().unwrap(),
        "--kappa",
        "3",
        "--seed",
        "2",
        "-o",
        out.to_str().unwrap(),
        "spectrum",
        "-s",
        "10",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let header = provenance_lines(&out);
    let config = header.iter().find(|l| l.starts_with("# config=")).unwrap();
    let v: Value = serde_json::from_str(config.trim_start_matches("# config=")).unwrap();
    assert_eq!(v["spectral"]["kappa"].as_f64(), Some(5.0));
    assert_eq!(v["seed"].as_u64(), Some(11));
    assert!(!eigenvalues_csv(&std::fs::read_to_string(&out).unwrap()).is_empty());

    let env = Command::new(env!("CARGO_BIN_EXE_nilspec"))
        .args(["count", "--s", "1e2,1e3"])
        .env("NILSPEC_CONFIG", &cfg)
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&env.stdout).unwrap();
    assert_eq!(v["provenance"]["config"]["spectral"]["kappa"].as_f64(), Some(5.0));

    std::fs::write(&cfg, "kappa = -1\n").unwrap();
    assert_eq!(nilspec(&["--config", cfg.to_str().unwrap(), "count"]).status.code(), Some(2));
    std::fs::write(&cfg, "unknown = 1\n").unwrap();
    assert_eq!(nilspec(&["--config", cfg.to_str().unwrap(), "count"]).status.code(), Some(2));
}

#[test]
fn quick_report_passes() {
    let o = nilspec(&["report", "--quick"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let r = result(&o);
    assert_eq!(r["pass"], Value::Bool(true));
    assert!(r["checks"].as_array().unwrap().len() >= 10);
}
