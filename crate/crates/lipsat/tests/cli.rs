use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lipsat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lipsat"))
        .args(args)
        .env_remove("LIPSAT_TRUNC_CEILING")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

const GOLDEN: [&str; 5] = ["saturation", "--f", "x^2+y^5", "--h", "y^3"];

fn golden_json() -> Output {
    let mut args = GOLDEN.to_vec();
    args.extend(["--format", "json"]);
    lipsat(&args)
}

#[test]
fn golden_saturation_is_a_replayable_no() {
    let o = golden_json();
    assert_eq!(code(&o), 1);
    let r = json(&o);
    assert_eq!(r["schema"], "lipsat/1");
    assert_eq!(r["seed"], 0);
    let w = &r["result"]["witness"];
    assert_eq!(r["result"]["verdict"], "CertifiedNo");
    assert_eq!(w["kind"], "pair_curve");
    assert_eq!(w["curve"]["second"]["twist"], "(z5)^1");
    assert_eq!(w["gap"], "6 < 7");
    assert_eq!(w["contraction_valuation"], "7");
    assert_eq!(w["contraction_target"], "6");

    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "w.json", &stdout(&o));
    let rep = lipsat(&["replay", "--witness", &file]);
    assert_eq!(code(&rep), 0, "{}", stdout(&rep));
    assert!(stdout(&rep).starts_with("confirmed"));
}

#[test]
fn tampered_twist_is_denied() {
    let mut r = json(&golden_json());
    let side = &mut r["result"]["witness"]["curve"]["second"];
    side["twist"] = Value::Null;
    side["coeff"] = Value::from("1");
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "t.json", &r.to_string());
    let rep = lipsat(&["replay", "--witness", &file, "--format", "json"]);
    assert_eq!(code(&rep), 1);
    assert_eq!(json(&rep)["result"]["confirmed"], false);
}

#[test]
fn malformed_witness_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "bad.json", "{\"schema\": \"lipsat/1\"");
    assert_eq!(code(&lipsat(&["replay", "--witness", &file])), 2);
    let mut r = json(&golden_json());
    r["result"]["witness"]["curve"]["second"]["twist"] = Value::from("(q5)^1");
    let file = write(dir.path(), "twist.json", &r.to_string());
    assert_eq!(code(&lipsat(&["replay", "--witness", &file])), 2);
    assert_eq!(code(&lipsat(&["replay", "--witness", "/nonexistent/w.json"])), 2);
}

#[test]
fn every_no_report_replays() {
    let runs: [&[&str]; 4] = [
        &["saturation", "--f", "x^2+y^7", "--h", "y^4"],
        &["saturation", "--f", "x^2+y^5", "--h", "y^2"],
        &["iclosure", "--f", "x^2+y^5", "--h", "y^2"],
        &["check-w", "--F", "x^2+y^3+w*y^2", "--at", "0"],
    ];
    let dir = tempfile::tempdir().unwrap();
    for (i, args) in runs.iter().enumerate() {
        let mut a = args.to_vec();
        a.extend(["--format", "json"]);
        let o = lipsat(&a);
        assert_eq!(code(&o), 1, "{:?}", args);
        let file = write(dir.path(), &format!("r{}.json", i), &stdout(&o));
        let rep = lipsat(&["replay", "--witness", &file]);
        assert_eq!(code(&rep), 0, "{:?}: {}", args, stdout(&rep));
    }
}

#[test]
fn yes_records_replay() {
    let dir = tempfile::tempdir().unwrap();
    for (i, args) in [
        ["saturation", "--f", "x^2+y^5", "--h", "x*y"],
        ["saturation", "--f", "x^2+y^5", "--h", "2*x"],
        ["iclosure", "--f", "x^2+y^5", "--h", "y^3"],
        ["check-ila", "--F", "x^2+y^5+w*y^4", "--at", "1"],
    ]
    .iter()
    .enumerate()
    {
        let mut a = args.to_vec();
        a.extend(["--format", "json"]);
        let o = lipsat(&a);
        assert_eq!(code(&o), 0, "{:?}", args);
        assert_eq!(json(&o)["result"]["verdict"], "CertifiedYes");
        let file = write(dir.path(), &format!("y{}.json", i), &stdout(&o));
        let rep = lipsat(&["replay", "--witness", &file]);
        assert_eq!(code(&rep), 0, "{:?}: {}", args, stdout(&rep));
    }
}

#[test]
fn generator_membership_exits_zero() {
    let o = lipsat(&["saturation", "--f", "x^2+y^5", "--h", "2*x"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("generator 0"));
}

#[test]
fn truncation_ceiling_forces_exit_three() {
    let mut args = GOLDEN.to_vec();
    args.extend(["--ceiling", "4"]);
    assert_eq!(code(&lipsat(&args)), 3);
    let env = Command::new(env!("CARGO_BIN_EXE_lipsat"))
        .args(GOLDEN)
        .env("LIPSAT_TRUNC_CEILING", "4")
        .output()
        .unwrap();
    assert_eq!(code(&env), 3);
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_lipsat"))
        .args(GOLDEN)
        .args(["--ceiling", "256"])
        .env("LIPSAT_TRUNC_CEILING", "4")
        .output()
        .unwrap();
    assert_eq!(code(&flag_wins), 1);
}

#[test]
fn config_file_sets_bounds_and_format() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "lipsat.toml", "exp = 2\nroot = 5\nformat = \"json\"\nceiling = 512\n");
    let mut args = GOLDEN.to_vec();
    args.extend(["--config", &cfg]);
    let o = lipsat(&args);
    let r = json(&o);
    assert_eq!(r["bound"]["exp"], 2);
    assert_eq!(r["bound"]["root"], 5);
    assert_eq!(r["limits"]["ceiling"], 512);
    let bad = write(dir.path(), "bad.toml", "depth = 3\n");
    assert_eq!(code(&lipsat(&["mult", "--f", "x^2+y^5", "--config", &bad])), 2);
    assert_eq!(code(&lipsat(&["mult", "--f", "x^2+y^5", "--exp", "0"])), 2);
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let o = lipsat(&["saturation", "--f", "x^2+y^", "--h", "y^3"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("byte 6"));
    assert_eq!(code(&lipsat(&["saturation", "--f", "x^2+y^5", "--bogus"])), 2);
    assert_eq!(code(&lipsat(&["mult", "--f", "x^2+y^5", "--format", "csv"])), 2);
    assert_eq!(code(&lipsat(&["iclosure", "--f", "x^2+y^5", "--h", "z"])), 2);
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &GOLDEN[..],
        &["probe-tangent", "--F", "x^2+y^5+w*y^4", "--at", "1", "--samples", "5", "--seed", "11"],
        &["sweep", "--F", "x^2+y^5+w*y^4", "--samples", "1,1/2,-3"],
    ] {
        let mut a = args.to_vec();
        a.extend(["--format", "json"]);
        let (x, y) = (lipsat(&a), lipsat(&a));
        assert_eq!(x.stdout, y.stdout, "{:?}", args);
    }
    let mut a = vec!["probe-tangent", "--F", "x^2+y^5+w*y^4", "--at", "1", "--samples", "5", "--format", "json"];
    a.extend(["--seed", "11"]);
    assert_eq!(json(&lipsat(&a))["seed"], 11);
}

#[test]
fn parametrize_prints_branches() {
    let o = lipsat(&["parametrize", "--f", "x^2+y^5"]);
    assert_eq!(stdout(&o).trim(), "(t^5, -t^2) [mult 2]");
    let j = json(&lipsat(&["parametrize", "--f", "x^2+y^5", "--format", "json"]));
    assert_eq!(j["result"]["branches"][0]["comps"][0]["terms"][0][0], "5");
    assert_eq!(j["result"]["branches"][0]["comps"][1]["terms"][0][1], "-1");
}

#[test]
fn multiplicity_and_closure() {
    assert!(stdout(&lipsat(&["mult", "--f", "x^2+y^5"])).starts_with("multiplicity 5"));
    let o = lipsat(&["iclosure", "--f", "x^2+y^5", "--h", "y^3", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let rows = &json(&o)["result"]["certificate"]["rows"];
    assert_eq!(rows[0]["target"], "6");
    assert_eq!(rows[0]["ideal"], "5");
}

#[test]
fn sweep_report_fields() {
    let o = lipsat(&["sweep", "--F", "x^2+y^5+w*y^4", "--samples", "-1..2", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["result"]["rows"].as_array().unwrap().len(), 4);
    assert_eq!(r["result"]["exceptional"], serde_json::json!([1]));
    assert_eq!(r["result"]["rows"][2]["results"]["iL_A"]["verdict"], "CertifiedYes");
    let csv = stdout(&lipsat(&["sweep", "--F", "x^2+y^5+w*y^4", "--samples", "1..2", "--format", "csv"]));
    assert_eq!(csv.lines().next().unwrap(), "sample,iL_A,iL_mY,W,exceptional");
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn family_commands() {
    let rank = lipsat(&["cosupport", "--F", "x^2+y^5+w*y^4", "--at", "2", "--z", "9,-3", "--z2", "-72,-6"]);
    assert_eq!(stdout(&rank).trim(), "rank 2");
    let off = lipsat(&["cosupport", "--F", "x^2+y^5+w*y^4", "--at", "2", "--z", "1,1", "--z2", "0,0"]);
    assert_eq!(code(&off), 2);
    let g = lipsat(&["grassmann", "--F", "x^2+y^2+z^3", "--format", "json"]);
    assert_eq!(code(&g), 0);
    assert_eq!(json(&g)["result"]["dgda_identity"], true);
    assert_eq!(code(&lipsat(&["section", "--F", "x^2+y^2+z^3", "--h", "1,2"])), 0);
    assert_eq!(code(&lipsat(&["section", "--F", "x^2+y^2*z", "--h", "0,0"])), 3);
    assert_eq!(code(&lipsat(&["check-ilmy", "--F", "x^2+y^3+w*y^2", "--at", "0"])), 1);
    assert_eq!(code(&lipsat(&["check-w", "--F", "x^2+y^5+w*x", "--at", "0"])), 2);
    assert_eq!(code(&lipsat(&["check-w", "--F", "(x+w*y^2)^2", "--at", "0"])), 2);
    for c in ["check-ila", "check-ilmy", "check-w"] {
        let o = lipsat(&[c, "--F", "(x+w*y^2)^2+y^5", "--at", "0", "--format", "json"]);
        assert_eq!(code(&o), 0, "{}", c);
        assert_eq!(json(&o)["result"]["verdict"], "CertifiedYes");
    }
}

#[test]
fn geometry_commands() {
    let d = json(&lipsat(&["distance", "--a", "1,0", "--b", "1,1", "--format", "json"]));
    assert_eq!(d["result"]["sup_formula"], 1.0);
    assert_eq!(d["result"]["inner_product_def"], 1.0);
    assert_eq!(code(&lipsat(&["distance", "--a", "1,0", "--b", "0,1"])), 2);
    let t = lipsat(&["probe-tangent", "--F", "x^2+y^5+w*y^4", "--at", "1", "--samples", "4", "--format", "csv"]);
    assert_eq!(stdout(&t).lines().count(), 5);
    let l = lipsat(&["probe-lipschitz", "--f", "x^2+y^5", "--h", "y^3", "--format", "json"]);
    assert_eq!(code(&l), 1);
    let curves = json(&l)["result"]["curves"].as_array().unwrap().clone();
    assert!(curves.iter().all(|c| c["exponent"].as_str().unwrap().starts_with('-') == (c["verdict"] == "CertifiedNo")));
    let ok = lipsat(&["probe-lipschitz", "--f", "x^2+y^5", "--h", "y^5"]);
    assert_eq!(code(&ok), 0);
}
