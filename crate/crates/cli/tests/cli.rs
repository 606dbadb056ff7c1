use std::process::{Command, Output};

use golden_susy::coherent::Cutoff;
use golden_susy::fock::SpectrumKind;
use golden_susy::verify::Fault;
use golden_susy_cli::{cmd_spectrum, cmd_verify, OutputFormat, RunConfig, EXIT_CONFIG, EXIT_OK, EXIT_TOLERANCE};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_golden-susy"))
        .args(args)
        .env_remove("GOLDEN_SUSY_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv_text: &str, name: &str) -> Vec<String> {
    let mut r = csv::Reader::from_reader(csv_text.as_bytes());
    let idx = r.headers().unwrap().iter().position(|h| h == name).unwrap();
    r.records().map(|rec| rec.unwrap()[idx].to_string()).collect()
}

#[test]
fn spectrum_k5_n4() {
    let o = run(&["spectrum", "--k", "5", "--n-max", "4"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert_eq!(column(&stdout(&o), "half_quanta"), ["0", "1", "11", "122", "1353"]);
}

#[test]
fn spectrum_k1_and_k0() {
    let o = run(&["spectrum", "--k", "1,0", "--n-max", "5"]);
    let q = column(&stdout(&o), "half_quanta");
    assert_eq!(&q[1..6], ["1", "1", "2", "3", "5"]);
    assert_eq!(&q[6..], ["0", "1", "2", "3", "4", "5"]);
}

#[test]
fn integer_columns_stay_integers() {
    let o = run(&["spectrum", "--k", "3", "--n-max", "40", "--format", "json"]);
    let text = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let last = &v.as_array().unwrap()[40];
    let hq = last["half_quanta"].to_string();
    assert!(!hq.contains('.') && !hq.contains('e'), "{hq}");
    assert_eq!(hq, golden_susy::golden::fib_divisor(3, 40).unwrap().to_string());
    let csv_text = stdout(&run(&["spectrum", "--k", "2"]));
    assert!(!column(&csv_text, "half_quanta").iter().any(|s| s.contains('.')));
}

#[test]
fn json_field_order_is_stable() {
    let text = stdout(&run(&["spectrum", "--k", "1", "--n-max", "1", "--format", "json"]));
    let pos: Vec<usize> = ["\"k\"", "\"n\"", "\"kind\"", "\"half_quanta\"", "\"energy\"", "\"closed_form\""]
        .iter()
        .map(|f| text.find(f).unwrap())
        .collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn output_is_byte_identical() {
    for args in [
        &["concurrence", "--k", "0,1,2", "--steps", "5"][..],
        &["coherent", "--k", "1", "--steps", "3", "--format", "json"][..],
        &["bloch", "--k", "2", "--n", "3", "--theta", "0.7", "--phi", "2.1", "--format", "json"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(EXIT_OK), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn config_errors_exit_2() {
    for args in [
        &["spectrum", "--k", "2", "--kind", "fermionic"][..],
        &["spectrum", "--tol", "0"][..],
        &["spectrum", "--dim", "1"][..],
        &["bloch", "--k", "1", "--theta", "4"][..],
        &["bloch", "--k", "1", "--n", "9", "--theta", "1", "--dim", "8"][..],
        &["bloch", "--k", "1", "--n", "0", "--theta", "1"][..],
        &["concurrence", "--k", "1", "--beta-max", "7"][..],
        &["spectrum", "--format", "xml"][..],
    ] {
        assert_eq!(run(args).status.code(), Some(EXIT_CONFIG), "{args:?}");
    }
}

#[test]
fn concurrence_tolerance_breach_exits_3() {
    let o = run(&["concurrence", "--k", "1", "--steps", "5", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(EXIT_TOLERANCE));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("worst row"), "{err}");
}

#[test]
fn env_var_overrides_tol() {
    let o = Command::new(env!("CARGO_BIN_EXE_golden-susy"))
        .args(["concurrence", "--k", "1", "--steps", "5"])
        .env("GOLDEN_SUSY_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(EXIT_TOLERANCE));
    let o = Command::new(env!("CARGO_BIN_EXE_golden-susy"))
        .args(["concurrence", "--k", "1", "--steps", "5", "--tol", "1e-8"])
        .env("GOLDEN_SUSY_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(EXIT_OK));
}

#[test]
fn concurrence_beta_zero_column() {
    let text = stdout(&run(&["concurrence", "--k", "0,1,2", "--family", "B", "--steps", "3"]));
    let betas = column(&text, "beta");
    let c = column(&text, "c_closed");
    for (i, k) in [0u32, 1, 2].into_iter().enumerate() {
        assert_eq!(betas[3 * i].parse::<f64>().unwrap(), 0.0);
        let pk = golden_susy::golden::phi_pow(k);
        let expect = 2.0 * pk / (1.0 + pk * pk);
        assert!((c[3 * i].parse::<f64>().unwrap() - expect).abs() < 1e-12);
    }
}

#[test]
fn bloch_reports() {
    let json = |args: &[&str]| -> serde_json::Value { serde_json::from_str(&stdout(&run(args))).unwrap() };
    let f = |v: &serde_json::Value| v.as_f64().unwrap();
    let eq = json(&[
        "bloch",
        "--k",
        "3",
        "--n",
        "5",
        "--theta",
        &std::f64::consts::FRAC_PI_2.to_string(),
        "--format",
        "json",
    ]);
    assert!((f(&eq["concurrence"]) - 1.0).abs() < 1e-12);
    assert_eq!(eq["eigenvalue"].to_string(), "305");
    assert!(f(&eq["eigen_residual"]) < 1e-10);
    let pole = json(&["bloch", "--k", "1", "--theta", "0", "--format", "json"]);
    assert_eq!(f(&pole["concurrence"]), 0.0);
    assert_eq!(f(&pole["entropy"]), 0.0);
    let theta = 2.0 * golden_susy::golden::phi_pow(2).atan();
    let l = json(&["bloch", "--k", "2", "--theta", &theta.to_string(), "--format", "json"]);
    assert_eq!(l["reference"], "L+");
}

#[test]
fn verify_library_paths() {
    let cfg = RunConfig { format: OutputFormat::Json, ..Default::default() };
    let out = cmd_verify(&cfg, None).unwrap();
    assert_eq!(out.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["all_passed"], true);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["passed"] == true && c.get("safe_rows").is_some()));

    let out = cmd_verify(&cfg, Some(Fault::PerturbedDivisorTable)).unwrap();
    assert_eq!(out.code, 1);
    assert!(out.stderr.unwrap().contains("triple-recurrence"));

    let tight = RunConfig { tol: 1e-14, format: OutputFormat::Json, ..Default::default() };
    let out = cmd_verify(&tight, None).unwrap();
    assert_eq!(out.code, 1);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    for c in v["checks"].as_array().unwrap() {
        if c["exact"] == true {
            assert_eq!(c["passed"], true, "{c}");
        }
    }
}

#[test]
fn spectrum_library_matches_table() {
    let cfg = RunConfig { k_list: vec![4], n_max: 5, cutoff: Cutoff::Fixed(8), ..Default::default() };
    let out = cmd_spectrum(&cfg, SpectrumKind::Susy).unwrap();
    assert_eq!(column(&out.stdout, "half_quanta"), ["0", "1", "7", "48", "329", "2255"]);
}
