use std::fs;
use std::process::{Command, Output};

use mockpadic::mockcorrect::build_delta_seed;
use mockpadic::modforms::{delta, write_mockplus, write_newform};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mockpadic")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("elapsed");
            map.values_mut().for_each(strip_timings);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

#[test]
fn gamma_on_builtin_seed() {
    let o = run(&["limits", "gamma"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.starts_with("11! gamma = 3^7+3^8+2(3^9)+3^{10}"), "{text}");
    assert!(text.contains("ok   leading digits match the reference"));
}

#[test]
fn delta_json_report() {
    let o = run(&["--format", "json", "limits", "delta"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["delta"]["status"], "converged");
    assert!(v["delta_scaled_digits"].as_str().unwrap().starts_with("2(3^7)+2(3^9)+3^{10}"));
}

#[test]
fn fixtures_recover_planted_constants() {
    assert_eq!(run(&["limits", "inert"]).status.code(), Some(0));
    assert_eq!(run(&["--seed-rng", "11", "limits", "badprime"]).status.code(), Some(0));
    assert_eq!(run(&["--prime", "5", "limits", "inert"]).status.code(), Some(2));
}

#[test]
fn configuration_errors_exit_2() {
    assert_eq!(run(&["--prime", "4", "demo-delta"]).status.code(), Some(2));
    assert_eq!(run(&["--q-prec", "100", "demo-delta"]).status.code(), Some(2));
    assert_eq!(run(&["--digits", "5", "limits", "gamma"]).status.code(), Some(2));
    assert_eq!(run(&["--config", "/nonexistent/run.conf", "limits", "gamma"]).status.code(), Some(2));
    assert_eq!(run(&["--suite", "nope", "properties"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn short_demo_flags_out_of_precision_rows() {
    let o = run(&["--max-m", "3", "--q-prec", "27", "demo-delta"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("c(729) = beyond seed precision [out of precision]"), "{text}");
    assert!(text.contains("ok   c(3) = 3^{-2} + 3^{-1} + 2 + ..."));
}

#[test]
fn demo_exit_status_follows_its_checks() {
    let o = run(&["demo-delta"]);
    let text = stdout(&o);
    let failing = text.lines().filter(|l| l.starts_with("FAIL ")).count();
    assert_eq!(o.status.code(), Some(if failing == 0 { 0 } else { 1 }), "{text}");
    for m in 1..=3 {
        assert!(text.contains(&format!("ok   ladder mod 3^{m} over 600 coefficients")), "{text}");
    }
    assert!(text.contains("ok   11! seed coefficient at q^2 = -929888675100"));
}

#[test]
fn exploratory_prime_is_labelled() {
    let o = run(&["--prime", "5", "--max-m", "4", "demo-delta"]);
    let text = stdout(&o);
    assert!(text.contains("exploratory run at p = 5"), "{text}");
    assert_eq!(o.status.code(), Some(0), "{text}");
}

#[test]
fn properties_are_deterministic() {
    let args = ["--format", "json", "--suite", "qseries", "--seed-rng", "99", "--cases", "20", "properties"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    let mut va: Value = serde_json::from_slice(&a.stdout).unwrap();
    let mut vb: Value = serde_json::from_slice(&b.stdout).unwrap();
    strip_timings(&mut va);
    strip_timings(&mut vb);
    assert_eq!(va, vb);
    assert_eq!(va["suites"].as_array().unwrap().len(), 1);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "# short run\nprime = 5\nmax_m = 4\nformat = json\n").unwrap();
    let out = dir.path().join("reports");
    let o = run(&["--config", conf.to_str().unwrap(), "--prime", "3", "--out", out.to_str().unwrap(), "limits", "gamma"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["prime"], 3);
    assert_eq!(v["gamma"]["certificate"].as_array().unwrap().len(), 3);
    let saved: Value = serde_json::from_str(&fs::read_to_string(out.join("limits-gamma.json")).unwrap()).unwrap();
    assert_eq!(saved, v);
}

#[test]
fn ingest_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("delta.txt");
    fs::write(&good, write_newform(&delta(60))).unwrap();
    let o = run(&["ingest", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("a(2) = -24"));

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "twelve one\n").unwrap();
    assert_eq!(run(&["ingest", bad.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["ingest", "/nonexistent/form.txt"]).status.code(), Some(2));
}

#[test]
fn ingested_seed_reproduces_builtin_gamma() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seed.txt");
    fs::write(&path, write_mockplus(&build_delta_seed(300).unwrap().to_mockplus())).unwrap();
    let args = ["--max-m", "5", "--q-prec", "243", "--format", "json", "limits", "gamma"];
    let builtin: Value = serde_json::from_slice(&run(&args).stdout).unwrap();
    let o = run(&[&["--seed", path.to_str().unwrap()][..], &args[..]].concat());
    assert_eq!(o.status.code(), Some(0));
    let ingested: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(ingested["gamma"], builtin["gamma"]);
    assert_eq!(ingested["reference"], false);
}
