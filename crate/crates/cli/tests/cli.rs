use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn cache(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("vinv-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

fn vinv(cache: &PathBuf, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vinv")).env("VI_CACHE_DIR", cache).args(args).output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn universal_is_deterministic() {
    let d = cache("universal");
    let a = d.join("a.json");
    let b = d.join("b.json");
    std::fs::create_dir_all(&d).unwrap();
    let o = vinv(&d, &["universal", "--invariant", "euler", "--order", "2", "--out", a.to_str().unwrap()]);
    assert!(o.status.success());
    // the second run is served from the cache
    let o = vinv(&d, &["universal", "--invariant", "euler", "--order", "2", "--out", b.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(d.join("universal-euler-o2-v1.json").exists());

    let z = d.join("z.json");
    assert!(vinv(&d, &["universal", "--invariant", "euler", "--order", "0", "--out", z.to_str().unwrap()]).status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&z).unwrap()).unwrap();
    assert_eq!(v["series"].as_array().unwrap().len(), 7);
    let _ = std::fs::remove_dir_all(&d);
}

#[test]
fn verify_pass_and_report_shape() {
    let d = cache("verify");
    let o = vinv(&d, &["verify", "--conjecture", "euler-rk2", "--surface", "K3", "--max-vd", "12"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["assumptions"]["strong_mochizuki"], true);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows[0]["order"], "2");
    assert_eq!(rows[0]["expected"], "24/1");
    assert_eq!(rows[1]["computed"], "3200/1");
    // vd 10 is outside chi(v) > 0 and is ledgered rather than compared
    assert!(!rows.iter().any(|r| r["order"] == "10"));
    assert!(v["assumptions"]["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("vd 10 skipped")));

    let o = vinv(&d, &["verify", "--conjecture", "chiy-rk2", "--surface", "quintic", "--c1", "K", "--max-vd", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let o = vinv(&d, &["verify", "--conjecture", "segre-verlinde", "--r", "-2", "--max-order", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["target"], "segre-verlinde-rk1(r=-2)");
    let _ = std::fs::remove_dir_all(&d);
}

#[test]
fn usage_errors_exit_2() {
    let d = cache("usage");
    for args in [
        &["verify", "--conjecture", "nope", "--max-vd", "2"][..],
        &["verify", "--conjecture", "euler-rk2", "--max-vd", "2"],
        &["verify", "--conjecture", "euler-rk2", "--surface", "P7", "--max-vd", "2"],
        &["verify", "--conjecture", "euler-rk2", "--surface", "K3", "--c1", "Z", "--max-vd", "2"],
        &["verify", "--conjecture", "serre-duality", "--rank", "3", "--max-order", "2"],
        &["series", "--name", "nope", "--order", "3"],
        &["report", "--suite", ""],
        &["report", "--suite", "slow"],
        &["universal", "--invariant", "nope", "--order", "1"],
        &["frobnicate"],
    ] {
        assert_eq!(vinv(&d, args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn series_output() {
    let d = cache("series");
    let o = vinv(&d, &["series", "--name", "a2_00", "--order", "9"]);
    assert!(o.status.success());
    let v = json(&o);
    let terms: Vec<(String, String)> =
        v["terms"].as_array().unwrap().iter().map(|t| (t["exp"].as_str().unwrap().into(), t["coeff"].as_str().unwrap().into())).collect();
    assert_eq!(terms[..2], [("0/1".into(), "1/1".into()), ("2/1".into(), "6/1".into())]);

    let v = json(&vinv(&d, &["series", "--name", "hurwitz", "--order", "13"]));
    assert_eq!(v["values"]["3"], "1/3");
    assert_eq!(v["values"]["4"], "1/2");
    assert_eq!(v["values"]["12"], "4/3");
    assert!(v["values"].get("5").is_none());
    let v = json(&vinv(&d, &["series", "--name", "hurwitz", "--order", "10"]));
    let keys: Vec<&String> = v["values"].as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), 5);
    assert_eq!(v["values"]["11"], "1/1");

    assert!(vinv(&d, &["series", "--name", "theta3", "--order", "5", "--refined"]).status.success());
    assert!(vinv(&d, &["series", "--name", "phi_01", "--order", "3"]).status.success());
}

#[test]
fn fast_report_passes() {
    let d = cache("report");
    let o = vinv(&d, &["report", "--suite", "fast", "--max-order", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().len() >= 10);
    // timings stay out of the JSON
    assert!(!String::from_utf8_lossy(&o.stdout).contains("secs"));
    let _ = std::fs::remove_dir_all(&d);
}

#[test]
fn corrupt_cache_exits_1() {
    let d = cache("corrupt");
    assert!(vinv(&d, &["universal", "--invariant", "euler", "--order", "2"]).status.success());
    let p = d.join("universal-euler-o2-v1.json");
    let text = std::fs::read_to_string(&p).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["checksum"] = Value::String("00".into());
    std::fs::write(&p, v.to_string()).unwrap();
    let o = vinv(&d, &["verify", "--conjecture", "euler-rk2", "--surface", "K3", "--max-vd", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let _ = std::fs::remove_dir_all(&d);
}
