//! End-to-end runs of the `pvi` binary: outputs, oracles and exit codes.

use std::process::{Command, Output};

use serde_json::Value;

fn pvi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pvi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = pvi(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn pair(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

fn close(v: &Value, re: f64, im: f64, tol: f64) -> bool {
    let (a, b) = pair(v);
    (a - re).hypot(b - im) < tol
}

#[test]
fn connect_inverse_example() {
    let v = json(&["connect", "--triple", "sqrt2,0,sqrt2", "--mu", "0.5"]);
    assert!(close(&v["sigma"], 0.5, 0.0, 1e-14) && close(&v["a"], 1.0, 0.0, 1e-13));
    assert_eq!(v["case"]["tag"], "GenericI");
    assert_eq!(v["provenance"]["command"], "connect");
    assert_eq!(v["provenance"]["version"], env!("CARGO_PKG_VERSION"));
    assert!(v["relation_residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn connect_forward_example() {
    let v = json(&["connect", "--sigma", "0", "--a", "0.5", "--mu", "0.25"]);
    let t = &v["triple"];
    assert!(
        close(&t[0], 0.0, 0.0, 1e-14)
            && close(&t[1], 1.0, 0.0, 1e-14)
            && close(&t[2], 1.0, 0.0, 1e-14)
    );
    // The JSON triple feeds straight back into the inverse direction.
    let back = json(&["connect", "--triple", &t.to_string(), "--mu", "0.25"]);
    assert!(close(&back["a"], 0.5, 0.0, 1e-14));
}

#[test]
fn connect_at_the_other_critical_points() {
    let v = json(&[
        "connect",
        "--triple",
        "sqrt2,0,sqrt2",
        "--mu",
        "0.5",
        "--point",
        "one",
    ]);
    assert!(close(&v["sigma"], 0.0, 0.0, 1e-14) && close(&v["a"], 0.5, 0.0, 1e-14));
    let v = json(&[
        "connect", "--triple", "0,1,1", "--mu", "0.25", "--point", "one",
    ]);
    assert!(close(&v["sigma"], 1.0 / 3.0, 0.0, 1e-14));
    let v = json(&[
        "connect",
        "--triple",
        "sqrt2,0,sqrt2",
        "--mu",
        "0.5",
        "--point",
        "infinity",
    ]);
    assert!(close(&v["sigma"], 0.5, 0.0, 1e-14));
}

#[test]
fn connect_rejects_excluded_traces() {
    let out = pvi(&["connect", "--triple", "2,1,1", "--mu", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("excluded"));
    let out = pvi(&["connect", "--triple", "1,2", "--mu", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = pvi(&["connect", "--mu", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_connection_pipeline() {
    let v = json(&["verify", "--triple", "sqrt2,0,sqrt2", "--mu", "0.5"]);
    assert_eq!(v["pass"], true);
    assert!(close(&v["predicted_one"]["a"], 0.5, 0.0, 1e-14));
    assert!(v["profile_deviation"].as_f64().unwrap() < 1e-2);
    let out = pvi(&[
        "verify",
        "--triple",
        "sqrt2,0,sqrt2",
        "--mu",
        "0.5",
        "--corrupt-a",
        "1.3",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], false);
}

#[test]
fn verify_generic_complex_data() {
    let fwd = json(&[
        "connect",
        "--sigma",
        "0.45+0.2i",
        "--a",
        "1.2-0.3i",
        "--mu",
        "0.7",
    ]);
    let t = fwd["triple"].to_string();
    let v = json(&["verify", "--triple", &t, "--mu", "0.7"]);
    assert_eq!(v["pass"], true, "{v}");
}

#[test]
fn verify_exact_oracles() {
    let v = json(&["verify", "--pipeline", "picard"]);
    assert!(v["max_error"].as_f64().unwrap() < 1e-6);
    let v = json(&["verify", "--pipeline", "rational"]);
    assert!(v["max_error"].as_f64().unwrap() < 1e-8);
    let out = pvi(&["verify", "--pipeline", "rational", "--mu", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn trace_is_deterministic_csv() {
    let args = [
        "trace",
        "--mu",
        "0.5",
        "--sigma",
        "0.5",
        "--a",
        "1",
        "--path",
        "1e-3,0;0.1,0;0.3,0.4",
    ];
    let a = pvi(&args);
    let b = pvi(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("# tool: \"pvi\""));
    assert!(text.contains("# mu: [0.5,0.0]") && text.contains("rel_tol"));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "abs_x,arg_x,re_y,im_y,re_dy,im_dy,local_err");
    // Along the real axis the solution is √x up to the seed error.
    let cols: Vec<f64> = rows[rows.len() - 1]
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    assert!((cols[0] - 0.3).abs() < 1e-15 && (cols[1] - 0.4).abs() < 1e-15);
}

#[test]
fn trace_errors() {
    let out = pvi(&[
        "trace", "--mu", "0.5", "--sigma", "0.5", "--a", "1", "--path", "1e-3,0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // μ = 1 rational solution 2x/(1 + x), continued through its pole at x = −1.
    let out = pvi(&[
        "trace",
        "--mu",
        "1",
        "--y",
        "0.6666666666666666",
        "--dy",
        "0.8888888888888888",
        "--path",
        "0.5,0;1,1.5707963267948966;1,4.71238898038469",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("# completed: false"));
}

#[test]
fn elliptic_representation() {
    let v = json(&[
        "elliptic", "--mu", "0.5", "--nu1", "1", "--nu2", "0.5", "--x", "0.01,0",
    ]);
    assert!(close(&v["y"], 0.1, 0.0, 1e-10) && pair(&v["v"]) == (0.0, 0.0));
    let v = json(&[
        "elliptic",
        "--mu",
        "1",
        "--nu1",
        "1",
        "--nu2",
        "0.5",
        "--x",
        "0.01,0",
        "--residual",
    ]);
    assert!(v["residual"].as_f64().unwrap() < 1e-6);
    assert!(v["bound_ratio"].as_f64().unwrap() < 10.0);
    let out = pvi(&[
        "elliptic", "--mu", "1", "--nu1", "1", "--nu2", "0.5", "--x", "0.3,0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = pvi(&[
        "elliptic", "--mu", "1", "--nu1", "1", "--nu2", "2", "--x", "0.01,0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn monodromy_of_the_picard_solution() {
    let v = json(&[
        "monodromy",
        "--mu",
        "0.5",
        "--sigma",
        "0.5",
        "--a",
        "1",
        "--x",
        "0.3,0",
    ]);
    let tr = &v["pair_traces"];
    for (t, e) in [(&tr[0], 0.0), (&tr[1], 2.0), (&tr[2], 0.0)] {
        assert!(close(t, e, 0.0, 1e-4), "{tr}");
    }
    assert!(v["class_distance"].as_f64().unwrap() < 1e-5);
    let v = json(&[
        "monodromy",
        "--mu",
        "0.5",
        "--y",
        "0.5477225575051661",
        "--dy",
        "0.9128709291752769",
        "--x",
        "0.3,0",
    ]);
    assert!(close(&v["pair_traces"][1], 2.0, 0.0, 1e-4));
    let out = pvi(&[
        "monodromy",
        "--mu",
        "0.5",
        "--y",
        "0.3",
        "--dy",
        "1",
        "--x",
        "0.3,0",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = pvi(&[
        "monodromy",
        "--mu",
        "0.5",
        "--sigma",
        "0.5",
        "--a",
        "1",
        "--x",
        "0.3,0",
        "--k0",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_sampling() {
    let args = [
        "domains",
        "--sigma",
        "0.5+0.5i",
        "--samples",
        "50",
        "--seed",
        "7",
    ];
    let a = pvi(&args);
    assert_eq!(a.stdout, pvi(&args).stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 50);
    // Every sampled point of the domain lies in the strip.
    assert!(rows.iter().all(|r| r[2] == "0" || r[3] == "1"));
    let other = pvi(&[
        "domains",
        "--sigma",
        "0.5+0.5i",
        "--samples",
        "50",
        "--seed",
        "8",
    ]);
    assert_ne!(text.as_bytes(), other.stdout.as_slice());
    assert_eq!(pvi(&["domains", "--samples", "5"]).status.code(), Some(2));
    let v = pvi(&[
        "domains",
        "--kind",
        "elliptic",
        "--nu1",
        "1",
        "--nu2",
        "0.5",
        "--samples",
        "20",
    ]);
    assert!(v.status.success());
}
