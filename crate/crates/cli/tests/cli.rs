use std::process::{Command, Output};

use mmqss_cli::sweep::{self, SweepConfig};

const SET_A: [&str; 10] = ["--k0", "2500", "--et", "10", "--k1", "1", "--k2", "500", "--km1", "500"];

fn mmqss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmqss")).args(args).output().unwrap()
}

fn with_set_a(args: &[&str]) -> Vec<String> {
    SET_A.iter().chain(args).map(|s| s.to_string()).collect()
}

fn run_ok(args: &[String]) -> String {
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let out = mmqss(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn qualifiers_for_the_reference_set() {
    let text = run_ok(&with_set_a(&["qualifiers"]));
    for key in [r#""eps_ss":0.01"#, r#""alpha":0.5"#, r#""beta":1.0"#, r#""discrepancy":0.142857"#] {
        assert!(text.contains(key), "{key} missing from {text}");
    }
}

#[test]
fn qualifiers_from_a_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("set.json");
    std::fs::write(&path, r#"{"params":{"k0":0,"eT":10,"k1":1,"k2":500,"km1":500,"omega":1}}"#).unwrap();
    let text = run_ok(&["--config".into(), path.display().to_string(), "qualifiers".into()]);
    assert!(text.contains(r#""alpha":0.0"#) && text.contains(r#""discrepancy":0.0"#), "{text}");
}

#[test]
fn exit_codes() {
    let out = mmqss(&["--k0", "7500", "--et", "10", "--k1", "1", "--k2", "500", "--km1", "500", "qualifiers"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha = 1.5"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"params": {"k0": 1,}"#).unwrap();
    let out = mmqss(&["--config", path.to_str().unwrap(), "qualifiers"]);
    assert_eq!(out.status.code(), Some(2));

    assert_eq!(mmqss(&["qualifiers"]).status.code(), Some(2));
    assert_eq!(mmqss(&["frobnicate"]).status.code(), Some(2));
    let args = with_set_a(&["ode", "--kind", "sideways"]);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(mmqss(&args).status.code(), Some(2));
    let args = with_set_a(&["ode", "--step", "0.01"]);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(mmqss(&args).status.code(), Some(3));

    let args = with_set_a(&["--out", "/nonexistent/dir/out.csv", "lna"]);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(mmqss(&args).status.code(), Some(1));
}

#[test]
fn ode_final_row_reaches_the_fixed_point() {
    let text = run_ok(&with_set_a(&["ode"]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,s,c"));
    let last = lines.last().unwrap();
    let s: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    assert!((s - 1000.0).abs() / 1000.0 < 1e-6, "{last}");

    let text = run_ok(&with_set_a(&["ode", "--kind", "sqssa", "--t-end", "1", "--step", "0.01", "--product"]));
    assert!(text.starts_with("t,s,c,p\n"));
    assert_eq!(text.lines().count(), 102);
}

#[test]
fn lna_reference_values() {
    let v: serde_json::Value = serde_json::from_str(&run_ok(&with_set_a(&["lna"]))).unwrap();
    assert!((v["sigma2_full"].as_f64().unwrap() - 1748.13).abs() < 0.005);
    assert_eq!(v["sigma2_red"].as_f64().unwrap(), 2000.0);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["sigma2_full", "sigma2_red", "sigma2_lyapunov", "discrepancy"] {
        assert!(keys.contains(&k));
    }
}

#[test]
fn project_pi1_at_the_fixed_point() {
    let text = run_ok(&with_set_a(&["project", "--tfpv", "pi1", "--points", "1000,500"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v[0]["pi"], serde_json::json!([[1.0, 0.75], [0.0, 0.0]]));
    let r = v[1]["reduced_field"][0].as_f64().unwrap();
    assert!((r - 2500.0 / 3.0).abs() < 1e-9);

    let text = run_ok(&with_set_a(&["project", "--tfpv", "reverse_closed", "--points", "4"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v[0]["reduced_field"], serde_json::json!([0.0, -2000.0]));
}

#[test]
fn simulate_outputs() {
    let text = run_ok(&with_set_a(&["simulate", "--t-end", "0.01", "--seed", "4"]));
    assert!(text.starts_with("t,n_S,n_C,n_P\n"));
    let text = run_ok(&with_set_a(&["simulate", "--network", "reduced", "--t-end", "1", "--sample-interval", "0.25"]));
    assert_eq!(text.lines().count(), 1 + 5);

    let text = run_ok(&with_set_a(&["simulate", "--moments", "--budget", "300000", "--seed", "2"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for k in ["mean", "variance", "std", "se_mean", "se_variance", "events", "burn_in", "seed"] {
        assert!(v.get(k).is_some(), "{k}");
    }
    assert_eq!(v["events"], 300_000);
}

#[test]
fn sweep_csv_shape_and_determinism() {
    let args = ["sweep-beta", "--budget", "400000", "--betas", "1,10", "--seed", "3"];
    let a = mmqss(&args);
    let b = mmqss(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(sweep::CSV_HEADER));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 9);
    assert_eq!(row[0], "1");
    assert!((row[5].parse::<f64>().unwrap() - 1748.13f64.sqrt()).abs() < 1e-3);
    assert!((row[6].parse::<f64>().unwrap() - 2000f64.sqrt()).abs() < 1e-9);
    assert!((row[7].parse::<f64>().unwrap() - 1.0 / 7.0).abs() < 1e-12);
}

#[test]
fn sweep_with_too_small_budget_is_a_domain_error() {
    let out = mmqss(&["sweep-beta", "--quick", "--betas", "0.01"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn measured_discrepancy_increases_with_beta() {
    let rows = sweep::run_sweep(&SweepConfig {
        seed: 2,
        ..Default::default()
    })
    .unwrap();
    for pair in rows.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let noise = a.measured_discrepancy_se().hypot(b.measured_discrepancy_se());
        assert!(
            b.measured_discrepancy() - a.measured_discrepancy() > -3.0 * noise,
            "beta {} -> {}: {} -> {} (se {noise})",
            a.beta,
            b.beta,
            a.measured_discrepancy(),
            b.measured_discrepancy()
        );
    }
    let first = &rows[1];
    let last = rows.last().unwrap();
    let noise = first.measured_discrepancy_se().hypot(last.measured_discrepancy_se());
    assert!(last.measured_discrepancy() - first.measured_discrepancy() > 3.0 * noise);
}
