use caustics_cli::run;
use serde_json::Value;
use std::path::PathBuf;
use std::process::Command;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("caustics").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = invoke(args);
    assert_eq!(code, 0, "stderr: {err}");
    serde_json::from_str(&out).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_str().unwrap().parse().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("caustics-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const DOMAIN: &str = r#"{"frame":{"a":1.0,"b":0.8},"mu":{"mean":0.001,"cos":[0.002,0.0,0.004],"sin":[0.0,0.003,0.0]}}"#;

#[test]
fn help_and_usage_errors() {
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("fit-ellipse"));
    let (code, out, _) = invoke(&["orbit", "--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("CSV columns"));

    let (code, out, err) = invoke(&["xi", "--order", "2", "--frobnicate"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    let e: Value = serde_json::from_str(&err).unwrap();
    assert_eq!(e["error"]["kind"], "usage");

    let (code, _, _) = invoke(&["transmogrify"]);
    assert_eq!(code, 2);
}

#[test]
fn validation_errors_exit_two() {
    for args in [
        &["xi", "--order", "0"][..],
        &["rotnum", "--a", "1", "--b", "2", "--lambda", "0.5"],
        &["ellint", "--k", "0.5", "--precision", "extended", "--digits", "20"],
        &["modes", "--e", "0.1", "--q0", "3", "--r", "2", "--K", "64", "--k-max", "32"],
        &["verify", "--q0", "7"],
    ] {
        let (code, _, err) = invoke(args);
        assert_eq!(code, 2, "{args:?}: {err}");
        let e: Value = serde_json::from_str(&err).unwrap();
        assert_eq!(e["error"]["kind"], "validation", "{args:?}");
    }
}

#[test]
fn missing_file_exits_three() {
    let (code, _, err) = invoke(&["annihilate", "--domain", "/nonexistent/domain.json", "--q", "5", "--r", "2"]);
    assert_eq!(code, 3);
    let e: Value = serde_json::from_str(&err).unwrap();
    assert_eq!(e["error"]["kind"], "io");
    let (code, _, _) = invoke(&["xi", "--order", "1", "--config", "/nonexistent/caustics.toml"]);
    assert_eq!(code, 3);
}

#[test]
fn circle_rotation_number() {
    let v = json(&["rotnum", "--a", "1", "--b", "1", "--lambda", "0.5"]);
    assert!((num(&v["omega"]) - 1.0 / 6.0).abs() < 1e-15);
    let back = json(&["rotnum", "--a", "1", "--b", "1", "--omega", "0.16666666666666666"]);
    assert!((num(&back["lambda"]) - 0.5).abs() < 1e-14);
}

#[test]
fn xi_order_two_contains_published_entry() {
    let v = json(&["xi", "--order", "2"]);
    let entry = v["xi"].as_array().unwrap().iter().find(|x| x["j"] == 2 && x["l"] == 2).unwrap();
    assert_eq!(entry["poly"], serde_json::json!(["0", "1/512", "1/512"]));
}

#[test]
fn expand_shape() {
    let v = json(&["expand", "--order", "3"]);
    assert_eq!(v["phi"][0], serde_json::json!({"j": 1, "terms": [{"harm": 2, "fn": "sin", "num": "1", "den": "8"}]}));
    let t = &v["phi"][2]["terms"][0];
    assert_eq!((t["num"].as_str(), t["den"].as_str()), (Some("83"), Some("2048")));

    let (code, csv, _) = invoke(&["expand", "--order", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(csv.lines().next(), Some("j,harm,fn,num,den"));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["expand", "--order", "4"][..],
        &["verify", "--q0", "4"],
        &["caustic-test", "--a", "1", "--b", "0.8", "--lambda", "0.4", "--steps", "200"],
        &["modes", "--e", "0.1", "--q0", "3", "--r", "2", "--K", "32", "--grid", "256"],
    ] {
        assert_eq!(invoke(args).1, invoke(args).1, "{args:?}");
    }
}

#[test]
fn extended_precision_digits() {
    let v = json(&["ellint", "--k", "0.5", "--precision", "extended", "--digits", "28"]);
    assert_eq!(v["digits"], 28);
    let value = v["value"].as_str().unwrap();
    let mantissa = value.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
    assert_eq!(mantissa.len(), 28);
    // K(1/2) = 1.685750354812596042871203657799...
    assert!(value.starts_with("1.68575035481259604287120365"));
}

#[test]
fn verify_reports_certified_matrices() {
    let v = json(&["verify", "--q0", "6"]);
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 4);
}

#[test]
fn fit_ellipse_output_feeds_annihilate() {
    let input = scratch("domain.json");
    let fitted = scratch("fitted.json");
    std::fs::write(&input, DOMAIN).unwrap();
    let (code, out, err) =
        invoke(&["fit-ellipse", "--domain", input.to_str().unwrap(), "--output", fitted.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(out.is_empty());
    let fit: Value = serde_json::from_str(&std::fs::read_to_string(&fitted).unwrap()).unwrap();
    assert!(num(&fit["residual_norm"]) <= num(&fit["initial_norm"]));

    let v = json(&["annihilate", "--domain", fitted.to_str().unwrap(), "--q", "5", "--r", "2", "--grid", "512"]);
    assert_eq!(v["q0"], 4);
    assert!(num(&v["plus"]).is_finite() && num(&v["minus"]).is_finite());
}

#[test]
fn config_file_and_environment_precedence() {
    let bin = env!("CARGO_BIN_EXE_caustics");
    let env_cfg = scratch("env.toml");
    let flag_cfg = scratch("flag.toml");
    std::fs::write(&env_cfg, "format = \"csv\"\n").unwrap();
    std::fs::write(&flag_cfg, "format = \"json\"\nprecision = \"extended\"\ndigits = 26\n").unwrap();

    let run_bin = |extra: &[&str]| {
        let out = Command::new(bin)
            .args(["ellint", "--k", "0.3"])
            .args(extra)
            .env("CAUSTICS_CONFIG", &env_cfg)
            .output()
            .unwrap();
        (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
    };
    // ellint has no CSV form, so the environment file alone is a validation error
    assert_eq!(run_bin(&[]).0, 2);
    let (code, out) = run_bin(&["--config", flag_cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["digits"], 26);
    let (code, out) = run_bin(&["--config", flag_cfg.to_str().unwrap(), "--digits", "30"]);
    assert_eq!(code, 0);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["digits"], 30);
    assert_eq!(run_bin(&["--format", "json"]).0, 0);
}

#[test]
fn orbit_csv_rows() {
    let (code, csv, err) = invoke(&["orbit", "--a", "1", "--b", "0.8", "--lambda", "0.3", "--steps", "50", "--format", "csv"]);
    assert_eq!(code, 0, "{err}");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("step,phi,theta,x,y,tangency_defect"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() >= 50);
    for r in rows {
        let defect: f64 = r.split(',').nth(5).unwrap().parse().unwrap();
        assert!(defect.abs() < 1e-12);
    }
}
