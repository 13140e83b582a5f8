use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn k3pic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3pic")).args(args).env_remove("K3PIC_CACHE_DIR").output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

fn strip_seconds(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("seconds");
            m.values_mut().for_each(strip_seconds);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_seconds),
        _ => {}
    }
}

#[test]
fn nodal_fiber() {
    let o = k3pic(&["fibers", "--t0", "-3"]);
    assert!(o.status.success());
    let r = &json(&o)["report"];
    assert_eq!(r["data"]["nodes"], 12);
    assert_eq!(r["data"]["points"].as_array().unwrap().len(), 12);
}

#[test]
fn smooth_fiber_and_tritangents() {
    let o = k3pic(&["fibers"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["report"]["data"]["nodes"], 0);
    let o = k3pic(&["tritangent", "--t0", "-5"]);
    assert!(o.status.success());
    assert!(json(&o)["report"]["data"]["lines"].as_u64().unwrap() > 0);
}

#[test]
fn lattice_invariants() {
    let o = k3pic(&["lattice"]);
    assert!(o.status.success());
    let d = &json(&o)["report"]["data"];
    assert_eq!(d["rank"], 19);
    assert_eq!(d["det"], "864");
    assert_eq!(d["discriminant_group"], serde_json::json!(["6", "12", "12"]));
    assert_eq!(d["signature"], serde_json::json!([1, 18]));
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.kv");
    fs::write(&bad, "t0 = 1/0\n").unwrap();
    assert_eq!(k3pic(&["lattice", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
    fs::write(&bad, "colour = blue\n").unwrap();
    assert_eq!(k3pic(&["lattice", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(k3pic(&["lattice", "-p", "4"]).status.code(), Some(2));
    assert_eq!(k3pic(&["lattice", "--t0", "-3"]).status.code(), Some(2));
    assert_eq!(k3pic(&["run", "--stages", "lattice,nothing"]).status.code(), Some(2));
}

#[test]
fn config_file_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.kv");
    fs::write(&cfg, "# fiber\nt0 = -3\np = 79\n").unwrap();
    let o = k3pic(&["fibers", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(json(&o)["report"]["data"]["nodes"], 12);
}

#[test]
fn certificate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ic.json");
    let o = k3pic(&["index-check", "--json-out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let v = k3pic(&["verify-cert", path.to_str().unwrap()]);
    assert!(v.status.success());
    assert_eq!(json(&v)["accepted"], true);

    let mut report: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let cert = &mut report["report"]["data"]["certificate"];
    let w = &mut cert["witnesses"][0]["e_norm"];
    *w = Value::from(w.as_i64().unwrap() + 2);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, serde_json::to_string(&report).unwrap()).unwrap();
    let v = k3pic(&["verify-cert", bad.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(1));
    assert_eq!(json(&v)["accepted"], false);

    fs::write(&bad, "{}").unwrap();
    assert_eq!(k3pic(&["verify-cert", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn normal_subgroup_counts() {
    let o = k3pic(&["cohomology", "--subgroup-mode", "normal"]);
    assert!(o.status.success());
    let s = &json(&o)["report"]["data"]["sweep"];
    assert_eq!(s["trivial_h1"], 49);
    assert_eq!(s["nontrivial_h1"], 47);
}

#[test]
fn reports_are_deterministic_and_cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = ["run", "--stages", "gram,lattice,index-check", "--cache-dir", cache.to_str().unwrap()];
    let cold = k3pic(&args);
    assert!(cold.status.success());
    assert!(fs::read_dir(&cache).unwrap().next().is_some());
    let warm = k3pic(&args);
    assert!(warm.status.success());
    let plain = k3pic(&["run", "--stages", "gram,lattice,index-check"]);
    let (mut a, mut b, mut c) = (json(&cold), json(&warm), json(&plain));
    for v in [&mut a, &mut b, &mut c] {
        strip_seconds(v);
        v["config"]["cache_dir"] = Value::Null;
    }
    assert_eq!(a, b);
    assert_eq!(a, c);
}
