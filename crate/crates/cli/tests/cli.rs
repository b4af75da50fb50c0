use std::process::{Command, Output};

fn permclt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permclt")).args(args).env_remove("PERMCLT_PRECISION").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn exact_three_cycle() {
    let o = permclt(&["exact", "--lambda", "3^1", "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["gf"]["terms"], serde_json::json!([[2, 1, "1"], [2, 2, "1"]]));
    assert_eq!(v["class_size"], "2");
}

#[test]
fn exact_and_oracle_csv_agree() {
    let a = permclt(&["exact", "--lambda", "1^1 2^1 3^1", "--csv"]);
    let b = permclt(&["oracle", "--lambda", "1^1 2^1 3^1", "--csv"]);
    assert!(a.status.success() && b.status.success());
    assert!(stdout(&a).starts_with("d,maj,count\n"));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn descent_distribution_at_q_one() {
    let o = permclt(&["exact", "--lambda", "1^1 2^1", "--q1", "--csv"]);
    assert_eq!(stdout(&o), "d,count\n2,2\n3,1\n");
}

#[test]
fn sigma_at_zero() {
    let o = permclt(&["sigma", "--alpha", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "s11 1/12\ns12 1/24\ns22 1/36\n");
    let half = json(&permclt(&["sigma", "--alpha", "0.5", "--json"]));
    assert_eq!(half["s11"], "11/192");
}

#[test]
fn mgf_reports_target_and_precision() {
    let v = json(&permclt(&["mgf", "--lambda", "8^1", "--s", "1", "--r", "1"]));
    assert_eq!(v["n"], 8);
    assert_eq!(v["precision"], 30);
    assert!((v["target"].as_f64().unwrap() - (7.0f64 / 72.0).exp()).abs() < 1e-15);
    assert!((v["mgf"].as_f64().unwrap() - 1.0211745659).abs() < 1e-9);
    let o = Command::new(env!("CARGO_BIN_EXE_permclt"))
        .args(["mgf", "--lambda", "8^1", "--s", "1", "--r", "1"])
        .env("PERMCLT_PRECISION", "50")
        .output()
        .unwrap();
    let v50 = json(&o);
    assert_eq!(v50["precision"], 50);
    assert!(v50["mgf_digits"].as_str().unwrap().starts_with(&v["mgf_digits"].as_str().unwrap()[..20]));
}

#[test]
fn sample_output_is_reproducible() {
    let args = ["sample", "--lambda", "2^3 4^1", "--samples", "70000", "--grid", "1,1;0.5,2", "--json"];
    let a = permclt(&args);
    let b = permclt(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mut one_worker = args.to_vec();
    one_worker.extend(["--workers", "1"]);
    assert_eq!(permclt(&one_worker).stdout, a.stdout);
    let v = json(&a);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["count"], 70000);
    assert_eq!(v["mgf"].as_array().unwrap().len(), 2);
}

#[test]
fn converge_csv_schema() {
    let o = permclt(&["converge", "--family", "ncycle:8,16", "--csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    let meta = lines.next().unwrap();
    assert!(meta.starts_with('#') && meta.contains("seed=42") && meta.contains("epsilon="));
    assert_eq!(lines.next().unwrap(), "n,alpha1,source,mgf,target,abs_err,err_times_n16");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("8,0,exact,"));
}

#[test]
fn verify_all_passes() {
    let o = permclt(&["verify", "--suite", "all", "--max-n", "8"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains(" 0 failed"));
}

#[test]
fn exit_codes() {
    assert_eq!(permclt(&["exact", "--lambda", "3^x"]).status.code(), Some(2));
    assert_eq!(permclt(&["sigma", "--alpha", "1.5"]).status.code(), Some(2));
    assert_eq!(permclt(&["oracle", "--lambda", "12^1"]).status.code(), Some(2));
    assert_eq!(permclt(&["bogus"]).status.code(), Some(2));
    assert_eq!(permclt(&["verify", "--suite", "nope"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_permclt"))
        .args(["mgf", "--lambda", "3^1", "--s", "1", "--r", "1"])
        .env("PERMCLT_PRECISION", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
}
