use std::io::Write;
use std::process::Command;

fn dtlab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dtlab"))
}

fn stdout_of(cmd: &mut Command) -> String {
    let out = cmd.output().expect("spawn dtlab");
    assert!(
        out.status.success(),
        "exit {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8")
}

#[test]
fn no_args_prints_usage_and_exits_1() {
    let out = dtlab().output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("Usage"), "stderr: {msg}");
}

#[test]
fn help_exits_0() {
    let out = dtlab().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn field_info_stable_text() {
    let text = stdout_of(dtlab().args(["field-info", "--p", "7"]));
    assert_eq!(text, "p=7\nr=1\nq=7\nmodulus=\ngenerator=3\n");
    let ext = stdout_of(dtlab().args(["field-info", "--p", "3", "--r", "2"]));
    assert_eq!(ext, "p=3\nr=2\nq=9\nmodulus=1,0\ngenerator=4\n");
}

#[test]
fn field_info_rejects_composite() {
    let out = dtlab().args(["field-info", "--p", "6"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn eta_12_prints_table_value() {
    let text = stdout_of(dtlab().args(["eta", "--k", "12"]));
    assert!(text.contains("nu=1.1033"), "{text}");
}

#[test]
fn charsum_verify_csv_schema() {
    let text = stdout_of(dtlab().args([
        "charsum-verify",
        "--q",
        "13",
        "--d",
        "3",
        "--trials",
        "3",
    ]));
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "check_name,q,d,lhs,rhs,bound,holds"
    );
    let body: Vec<&str> = lines.collect();
    assert!(!body.is_empty());
    assert!(body.iter().all(|l| l.ends_with("true")), "{text}");
}

#[test]
fn charsum_verify_deterministic_for_fixed_seed() {
    let args = [
        "charsum-verify",
        "--q",
        "25",
        "--d",
        "2",
        "--trials",
        "4",
        "--seed",
        "42",
    ];
    let a = stdout_of(dtlab().args(args));
    let b = stdout_of(dtlab().args(args));
    assert_eq!(a, b);
}

#[test]
fn stepanov_verify_json_certificate() {
    let text = stdout_of(dtlab().args([
        "stepanov-verify",
        "--p",
        "13",
        "--d",
        "2",
        "--lambda",
        "1",
        "--set",
        "3,4",
        "--set",
        "3,4",
    ]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["variant"], "Product");
    assert_eq!(v["bound_holds"], true);
    assert_eq!(v["implied_bound"], 7);
}

#[test]
fn tuple_max_csv() {
    let text = stdout_of(dtlab().args([
        "tuple-max",
        "--p",
        "3",
        "--r",
        "2",
        "--d",
        "2",
        "--lambda",
        "1",
        "--strong",
    ]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "q,p,r,d,lambda_idx,strong,value,witness,bound_name,bound_value,holds,exact_expected,exact_matched"
    );
    assert!(lines[1..].iter().all(|l| l.contains(",true,") || l.ends_with("true")));
    assert!(text.contains("square_sqrt_q"));
}

#[test]
fn tuple_sweep_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let status = dtlab()
        .args(["tuple-sweep", "--q-max", "13", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("q,p,r,d,"));
    assert!(text.lines().count() > 5);
    // byte-identical across runs and thread counts
    let out2 = dir.path().join("report2.csv");
    let status = dtlab()
        .args(["tuple-sweep", "--q-max", "13", "--threads", "1", "--out"])
        .arg(&out2)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(text, std::fs::read_to_string(&out2).unwrap());
}

#[test]
fn decompose_json_f13() {
    let text = stdout_of(dtlab().args([
        "decompose",
        "--p",
        "13",
        "--d",
        "2",
        "--lambda",
        "1",
        "--ternary",
    ]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["target_size"], 5);
    assert_eq!(v["binary"]["exists"], false);
    assert_eq!(v["binary"]["search_complete"], true);
    assert_eq!(v["ternary"]["exists"], false);
}

#[test]
fn sieve_table_csv_and_determinism() {
    let a = stdout_of(dtlab().args(["sieve-table", "--k-min", "2", "--k-max", "40"]));
    assert!(a.starts_with("k,phi_k,eta_k,mu_k,nu_k,m_k,three_phi_k\n"));
    assert_eq!(a.lines().count(), 40); // header + 39 rows
    let b = stdout_of(dtlab().args([
        "sieve-table",
        "--k-min",
        "2",
        "--k-max",
        "40",
        "--threads",
        "2",
    ]));
    assert_eq!(a, b);
    assert!(a.contains("\n2,1,0.5000,0.5000,2.6071,2.6071,3\n"));
}

#[test]
fn figure_data_row_count() {
    let text = stdout_of(dtlab().args(["figure-data", "--k-max", "100"]));
    assert_eq!(text.lines().count(), 100); // header + 99 rows (k = 2..100)
}

#[test]
fn int_tuple_json() {
    let text = stdout_of(dtlab().args([
        "int-tuple", "--k", "2", "--n", "1", "--N", "120",
    ]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["size"], 4);
}

#[test]
fn gallagher_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("set.txt");
    let mut f = std::fs::File::create(&path).unwrap();
    for x in [3u64, 7, 11, 19, 23] {
        writeln!(f, "{x}").unwrap();
    }
    drop(f);
    let text = stdout_of(
        dtlab()
            .args(["gallagher", "--q", "50", "--n", "100", "--set"])
            .arg(&path),
    );
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["holds"], true);
}

#[test]
fn golden_check_appendix_table2() {
    let text = stdout_of(dtlab().args(["golden-check", "--table", "table2"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["rows_checked"], 200);
    assert_eq!(v["diffs"].as_array().unwrap().len(), 0);
}

#[test]
fn golden_check_unknown_table_usage_error() {
    let out = dtlab()
        .args(["golden-check", "--table", "table9"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("dtlab.conf");
    let out_path = dir.path().join("eta.txt");
    std::fs::write(
        &conf,
        format!("seed=7\nthreads=1\nout={}\n", out_path.display()),
    )
    .unwrap();
    let status = dtlab()
        .args(["eta", "--k", "2", "--config"])
        .arg(&conf)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.contains("nu=2.6071"));
}
