use std::process::Command;

fn abel_lab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_abel-lab")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn s3_constant_passes() {
    let (code, out, _) = abel_lab(&["verify", "s3-constant", "--seed", "42"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rec = &v.as_array().unwrap()[0];
    assert_eq!((rec["id"].as_str(), rec["status"].as_str()), (Some("group.s3-constant"), Some("pass")));
    let got = rec["measured"].as_f64().unwrap();
    assert!((got / (24.0 * std::f64::consts::PI.powi(2)) - 1.0).abs() < 1e-6);
    assert!(rec["runtime_ms"].is_null());
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["verify", "forms", "--seed", "42", "--samples", "20"];
    let (a, b) = (abel_lab(&args), abel_lab(&args));
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    let other = abel_lab(&["verify", "forms", "--seed", "43", "--samples", "20"]);
    assert_ne!(a.1, other.1);
}

#[test]
fn record_fields_are_exactly_the_schema() {
    let (_, out, _) = abel_lab(&["verify", "quaternion", "--samples", "5"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let keys: Vec<&str> = v[0].as_object().unwrap().keys().map(|k| k.as_str()).collect();
    let mut want = vec!["id", "anchor", "status", "measured", "expected", "tolerance", "error_estimate", "samples", "seed", "runtime_ms"];
    want.sort();
    let mut keys = keys;
    keys.sort();
    assert_eq!(keys, want);
}

#[test]
fn curve_pairing_record_matches_the_point_difference() {
    let (code, out, _) = abel_lab(&["abel", "curve", "--tau", "1i", "--P", "0.2+0.3i", "--Q", "0.5+0.1i"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rec = &v[0];
    assert_eq!(rec["id"], "curve.pairing");
    let m = rec["measured"].as_array().unwrap();
    assert!((m[0].as_f64().unwrap() - 0.3).abs() < 1e-3 && (m[1].as_f64().unwrap() + 0.2).abs() < 1e-3);
    assert_eq!(v[1]["id"], "curve.obstruction");
    assert_eq!(v[1]["status"], "pass");
}

#[test]
fn a_tight_tolerance_fails_with_exit_one() {
    let (code, out, _) = abel_lab(&["verify", "s3-constant", "--tolerance", "0", "--format", "text"]);
    assert_eq!(code, 1);
    assert!(out.lines().nth(1).unwrap().contains("fail"));
}

#[test]
fn usage_and_config_errors_exit_two() {
    assert_eq!(abel_lab(&["verify", "nonsense"]).0, 2);
    assert_eq!(abel_lab(&["frobnicate"]).0, 2);
    assert_eq!(abel_lab(&["abel", "curve", "--P", "0.1"]).0, 2);
    assert_eq!(abel_lab(&["abel", "curve", "--tau", "-1i", "--P", "0.1", "--Q", "0.2"]).0, 2);
    let dir = std::env::temp_dir().join(format!("abel-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "[group]\nnodes = 3\n").unwrap();
    let (code, _, err) = abel_lab(&["verify", "group", "--config", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown field"), "{err}");
    let good = dir.join("good.toml");
    std::fs::write(&good, "seed = 5\n[quaternion]\npoints = 4\n").unwrap();
    let out = dir.join("report.json");
    let (code, _, _) = abel_lab(&["verify", "quaternion", "--config", good.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!((v[0]["seed"].as_u64(), v[0]["samples"].as_u64()), (Some(5), Some(4)));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn shipped_config_is_the_default() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../abel-lab.toml")).unwrap();
    assert_eq!(abel_lab::config::Config::from_toml(&text).unwrap(), abel_lab::config::Config::default());
}
