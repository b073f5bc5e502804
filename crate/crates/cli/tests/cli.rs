use std::io::Write;
use std::process::{Command, Stdio};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde_json::Value;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_env(args: &[&str], stdin: Option<&str>, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_biphoton"));
    cmd.args(args)
        .env_remove("BIPHOTON_SEED")
        .stdin(if stdin.is_some() { Stdio::piped() } else { Stdio::null() })
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("binary runs");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    let out = child.wait_with_output().unwrap();
    Output {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    run_env(args, stdin, &[])
}

fn ok_json(args: &[&str], stdin: Option<&str>) -> Value {
    let out = run(args, stdin);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

/// Runs `simulate | simulate --basis rotated45 | reconstruct`.
fn pipeline(amps: &str, extra: &[&str]) -> Output {
    let mut first = vec!["simulate", "--amplitudes", amps];
    first.extend_from_slice(extra);
    let a = run(&first, None);
    assert_eq!(a.code, 0, "{}", a.stderr);
    let mut second = first.clone();
    second.extend_from_slice(&["--basis", "rotated45"]);
    let b = run(&second, Some(&a.stdout));
    assert_eq!(b.code, 0, "{}", b.stderr);
    assert_eq!(b.stdout.lines().count(), 2);
    run(&["reconstruct"], Some(&b.stdout))
}

fn min_concurrence_error(result: &Value, truth: f64) -> f64 {
    let mut sols = vec![result["amplitudes"].clone()];
    sols.extend(result["alternates"].as_array().unwrap().iter().map(|a| a["amplitudes"].clone()));
    sols.iter()
        .map(|amps| {
            let list: Vec<String> = amps
                .as_array()
                .unwrap()
                .iter()
                .map(|z| format!("{}{:+}i", f(&z["re"]), f(&z["im"])))
                .collect();
            let q = ok_json(&["quantify", "--amplitudes", &list.join(",")], None);
            (f(&q["concurrence"]) - truth).abs()
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn quantify_examples() {
    let q = ok_json(&["quantify", "--amplitudes", "0,1,0"], None);
    assert_eq!(q["kind"], "qutrit");
    close(f(&q["schmidt_k"]), 2.0, 1e-12);
    close(f(&q["concurrence"]), 1.0, 1e-12);
    close(f(&q["entropy"]), 1.0, 1e-12);
    close(f(&q["polarization"]["degree_p"]), 0.0, 1e-12);

    let q = ok_json(&["quantify", "--amplitudes", "1,0,0"], None);
    close(f(&q["schmidt_k"]), 1.0, 1e-12);
    close(f(&q["polarization"]["degree_p"]), 1.0, 1e-12);

    let q = ok_json(&["quantify", "--amplitudes", "1,0,0,1"], None);
    assert_eq!(q["kind"], "ququart");
    close(f(&q["schmidt_k"]), 4.0, 1e-12);
    close(f(&q["i_concurrence"]), 1.5f64.sqrt(), 1e-12);
}

#[test]
fn quantify_families_and_density() {
    let q = ok_json(&["quantify", "--family", "psi_phi", "--param", "0.7853981633974483"], None);
    close(f(&q["schmidt_k"]), 4.0, 1e-12);
    let q = ok_json(&["quantify", "--family", "non_entangled", "--param", "1.0,0.3,-0.2"], None);
    close(f(&q["schmidt_k"]), 1.0, 1e-12);
    let q = ok_json(&["quantify", "--family", "max_entangled", "--param", "1.0,0.3,-0.2"], None);
    close(f(&q["schmidt_k"]), 2.0, 1e-12);
    let q = ok_json(&["quantify", "--amplitudes", "1,1i,0", "--density"], None);
    assert_eq!(q["density_matrix"].as_array().unwrap().len(), 4);
    let q = ok_json(&["quantify", "--amplitudes", "1,0,0,1", "--density"], None);
    assert_eq!(q["density_matrix"].as_array().unwrap().len(), 16);
}

#[test]
fn spec_from_file_and_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.json");
    std::fs::write(&path, r#"{"kind":"qutrit","amplitudes":[{"re":0},{"re":1,"im":0},0]}"#).unwrap();
    let q = ok_json(&["quantify", "--spec", path.to_str().unwrap()], None);
    close(f(&q["schmidt_k"]), 2.0, 1e-12);
    let q = ok_json(&["quantify", "--spec", "-"], Some(r#"{"family":"psi_phi_prime","params":[2.356194490192345]}"#));
    close(f(&q["schmidt_k"]), 4.0, 1e-12);
}

#[test]
fn input_errors_exit_2() {
    for (args, stdin) in [
        (vec!["quantify", "--spec", "-"], Some("{not json")),
        (vec!["quantify", "--spec", "-"], Some(r#"{"amplitudes":[1,0]}"#)),
        (vec!["quantify", "--amplitudes", "1,zz,0"], None),
        (vec!["quantify", "--amplitudes", "0,0,0"], None),
        (vec!["quantify", "--amplitudes", "1,0,0", "--kind", "ququart"], None),
        (vec!["quantify"], None),
        (vec!["quantify", "--bogus"], None),
        (vec!["compare-2qubit", "--amplitudes", "1,0,0"], None),
        (vec!["simulate", "--amplitudes", "1,0,0", "--eta", "0"], None),
        (vec!["sweep", "--family", "fig1", "--param", "2"], None),
    ] {
        let out = run(&args, stdin);
        assert_eq!(out.code, 2, "{args:?}: {}", out.stderr);
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn io_errors_exit_3() {
    let out = run(&["quantify", "--spec", "/nonexistent/spec.json"], None);
    assert_eq!(out.code, 3);
    let out = run(&["reconstruct", "/nonexistent/a.json"], None);
    assert_eq!(out.code, 3);
    let out = run(&["sweep", "--family", "fig4", "--out", "/nonexistent/dir/out.csv"], None);
    assert_eq!(out.code, 3);
}

#[test]
fn compare_two_qubit() {
    let c = ok_json(&["compare-2qubit", "--amplitudes", "1,0,0,0"], None);
    close(f(&c["two_qudit"]["schmidt_k"]), 2.0, 1e-12);
    close(f(&c["two_qubit_model"]["k_2qb"]), 1.0, 1e-12);
    close(f(&c["k_ratio"]), 2.0, 1e-12);
}

#[test]
fn sweep_csv() {
    let out = run(&["sweep", "--family", "fig1"], None);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "c_plus,K,C,S_r");
    assert_eq!(lines.len(), 102);
    let mid: Vec<f64> = lines[51].split(',').map(|x| x.parse().unwrap()).collect();
    close(mid[0], 0.0, 1e-15);
    close(mid[1], 2.0, 1e-12);
    close(mid[2], 1.0, 1e-12);
    close(mid[3], 1.0, 1e-12);

    let out = run(&["sweep", "--family", "fig4", "--param", "0.7853981633974483"], None);
    let row: Vec<f64> = out.stdout.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    close(row[1], 4.0, 1e-12);
    close(row[3], 2.0, 1e-12);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig5.csv");
    let out = run(&["sweep", "--family", "fig5", "--param", "0.7853981633974483,2.356194490192345", "--out", path.to_str().unwrap()], None);
    assert_eq!(out.code, 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let ks: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    close(ks[0], 2.0, 1e-12);
    close(ks[1], 4.0, 1e-12);
    assert!(text.starts_with("phi,K,C_I,S_r\n"));
}

#[test]
fn simulate_hv_record() {
    let rec = ok_json(&["simulate", "--amplitudes", "0,1,0", "--pairs", "1000"], None);
    assert_eq!(rec["schema"], "coincidence/1");
    assert_eq!(rec["basis"], "natural");
    assert_eq!(rec["mode"], "ideal");
    let counts = &rec["counts"];
    close(f(&counts["H|V"]), 250.0, 1e-9);
    close(f(&counts["V|H"]), 250.0, 1e-9);
    close(f(&counts["H|H"]), 0.0, 1e-9);
}

#[test]
fn output_is_deterministic() {
    let args = ["simulate", "--amplitudes", "0.3,0.5-0.2i,0.8", "--noise", "sampled", "--seed", "9"];
    let a = run(&args, None);
    let b = run(&args, None);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&args[..5], None);
    let via_env = run_env(&args[..5], None, &[("BIPHOTON_SEED", "9")]);
    assert_eq!(via_env.stdout, a.stdout);
    assert_ne!(c.stdout, a.stdout);
    let sampled: Value = serde_json::from_str(&a.stdout).unwrap();
    assert!(sampled["counts"]["H|H"].is_u64());
    assert_eq!(sampled["seed"], 9);
}

#[test]
fn json_keys_sorted_and_floats_full_precision() {
    let out = run(&["quantify", "--amplitudes", "1,1,1,1"], None);
    let text = out.stdout.trim();
    let amp_pos = text.find("\"amplitudes\"").unwrap();
    let kind_pos = text.find("\"kind\"").unwrap();
    assert!(amp_pos < kind_pos);
    assert!(text.contains("5.0000000000000000e-1"));
}

#[test]
fn round_trip_seed_42() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let amps: Vec<String> = (0..3)
        .map(|_| {
            let (re, im): (f64, f64) = (StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng));
            format!("{re}{im:+}i")
        })
        .collect();
    let amps = amps.join(",");
    let truth = f(&ok_json(&["quantify", "--amplitudes", &amps], None)["concurrence"]);

    let out = pipeline(&amps, &[]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let result: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(result["schema"], "recon/1");
    assert!(min_concurrence_error(&result, truth) <= 1e-6);

    let out = pipeline(&amps, &["--noise", "sampled", "--seed", "42"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let result: Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(min_concurrence_error(&result, truth) <= 0.05);
}

#[test]
fn reconstruct_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let nat = run(&["simulate", "--amplitudes", "1,0.5,0.3+0.2i,-0.4"], None);
    let rot = run(&["simulate", "--amplitudes", "1,0.5,0.3+0.2i,-0.4", "--basis", "rotated45"], None);
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    std::fs::write(&a, &nat.stdout).unwrap();
    std::fs::write(&b, &rot.stdout).unwrap();
    let r = ok_json(&["reconstruct", b.to_str().unwrap(), a.to_str().unwrap()], None);
    assert_eq!(r["kind"], "ququart");
    assert_eq!(r["gauge"], "sum(phi)=0");

    // Contract mismatches.
    let out = run(&["reconstruct", a.to_str().unwrap(), a.to_str().unwrap()], None);
    assert_eq!(out.code, 4, "{}", out.stderr);
    let out = run(&["reconstruct", a.to_str().unwrap()], None);
    assert_eq!(out.code, 4);
    let qutrit = run(&["simulate", "--amplitudes", "1,0,0", "--basis", "rotated45"], None);
    let out = run(&["reconstruct", a.to_str().unwrap(), "-"], Some(&qutrit.stdout));
    assert_eq!(out.code, 4, "{}", out.stderr);
    let out = run(&["reconstruct"], Some("{\"schema\":\"nope\"}\n{}"));
    assert_eq!(out.code, 2);
}

#[test]
fn unobservable_phase_prints_partial_result() {
    let out = pipeline("1,0,1", &[]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r: Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(r["warnings"].as_array().unwrap().iter().any(|w| w.as_str().unwrap().starts_with("phase_unobservable")));
    assert_eq!(r["gauge"], "phi1=0");
}

#[test]
fn simulate_passes_records_through() {
    let first = run(&["simulate", "--amplitudes", "1,0,0"], None);
    let second = run(&["simulate", "--amplitudes", "1,0,0", "--basis", "rotated45"], Some(&first.stdout));
    assert!(second.stdout.starts_with(first.stdout.trim_end()));
    let ignored = run(&["simulate", "--amplitudes", "1,0,0", "--no-stdin"], Some(&first.stdout));
    assert_eq!(ignored.stdout.lines().count(), 1);
    let bad = run(&["simulate", "--amplitudes", "1,0,0"], Some("garbage"));
    assert_eq!(bad.code, 2);
}
