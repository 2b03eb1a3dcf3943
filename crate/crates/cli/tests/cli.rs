use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = "-6,6,61,0,1,11";

fn rdress(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rdress")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_single_record() {
    let o = rdress(&["verify", "--id", "fhns_u1", "--grid", SMALL]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("fhns_u1") && s.contains("(2.37)") && s.contains("verified"), "{s}");
}

#[test]
fn unknown_id_is_a_usage_error() {
    assert_eq!(code(&rdress(&["verify", "--id", "nope"])), 2);
    assert_eq!(code(&rdress(&["export", "--id", "nope"])), 2);
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(code(&rdress(&["verify"])), 2);
    assert_eq!(code(&rdress(&["verify", "--all", "--grid", "1,2,3"])), 2);
    assert_eq!(code(&rdress(&["dress", "--M", "fhns_kink_M", "--Q", "fhns_kink_Q", "--branch", "sideways"])), 2);
}

#[test]
fn failing_record_exits_one() {
    let o = rdress(&["verify", "--id", "lin_pair_2_55_as_printed", "--grid", SMALL]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("unverified-as-printed"));
}

#[test]
fn verify_json_reloads_as_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = rdress(&["verify", "--id", "fhns_u1", "--id", "ex4_u", "--grid", SMALL, "--json", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let entries = rdress::Catalog::load_json(&text).unwrap();
    assert_eq!(entries.iter().map(|e| e.id.as_str()).collect::<Vec<_>>(), ["ex4_u", "fhns_u1"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v[0]["status"], "verified");
    assert!(v[0]["report"]["max_abs"].as_f64().unwrap() < 1e-9);
}

#[test]
fn dress_kink_pair_reproduces_u1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dressed.json");
    let o = rdress(&["dress", "--M", "fhns_kink_M", "--Q", "fhns_kink_Q", "--grid", SMALL, "--emit", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("matches fhns_u1"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["H"].as_str().is_some() && v["u"].as_str().is_some());
    assert_eq!(v["compat"]["pass"], true);
}

#[test]
fn dress_second_pair_reaches_u3_with_ln2_offset() {
    let ln2 = std::f64::consts::LN_2.to_string();
    let o = rdress(&["dress", "--M", "fhns_u2_dressed", "--Q", "fhns_u1", "--c0", &ln2, "--grid", "-6,6,25,0,1,5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("matches fhns_u3"));
}

#[test]
fn dress_rejects_mismatched_targets() {
    let o = rdress(&["dress", "--M", "fhns_kink_M", "--Q", "ex2_u"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("different equations"));
}

#[test]
fn dress_names_the_failing_condition() {
    let o = rdress(&["dress", "--M", "fhns_u2", "--Q", "fhns_u1", "--grid", "-6,6,25,0,1,5"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("compatibility condition"));
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn evolve_kink_writes_csv_with_footer() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kink.csv");
    let o = rdress(&["evolve", "--id", "fhns_kink_M", "--t1", "1", "--dx", "0.1", "--frames", "3", "--csv", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["t", "x", "numeric", "exact", "error"]);
    assert_eq!(rows.len(), 3 * 201);
    assert!(rows.iter().all(|r| r[4].abs() <= 5e-3));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("# t=")).count(), 3);
}

#[test]
fn evolve_zero_time_has_zero_error() {
    let o = rdress(&["evolve", "--id", "fhns_u1", "--t1", "0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("0.0000e0"));
}

#[test]
fn evolve_refuses_past_singular_time() {
    let o = rdress(&["evolve", "--id", "ex3_u", "--t1", "1.5"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("t = 1.386"));
}

#[test]
fn export_u_and_phase() {
    let dir = tempfile::tempdir().unwrap();
    let grid = "-2,2,5,0,1,3";
    for field in ["u", "H"] {
        let path = dir.path().join(format!("{field}.csv"));
        let o = rdress(&["export", "--id", "fhns_u1", "--field", field, "--grid", grid, "--csv", path.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        let (header, rows) = read_csv(&path);
        assert_eq!(header, ["t", "x", "value"]);
        assert_eq!(rows.len(), 15);
        assert!(rows.iter().all(|r| r[2].is_finite()));
    }
    assert_eq!(code(&rdress(&["export", "--id", "ex4_u", "--field", "H"])), 1);
}

#[test]
fn catalog_dump_and_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("catalog.json");
    assert_eq!(code(&rdress(&["catalog", "dump", "--out", path.to_str().unwrap()])), 0);
    let o = rdress(&["catalog", "check", path.to_str().unwrap(), "--grid", SMALL]);
    let s = stdout(&o);
    assert!(!s.contains("differs"), "{s}");
    // Records flagged unverified-as-printed make the check fail.
    assert_eq!(code(&o), 1);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let arr = v.as_array_mut().unwrap();
    arr.retain(|e| e["id"] == "fhns_u1" || e["id"] == "ex2_u");
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(code(&rdress(&["catalog", "check", path.to_str().unwrap(), "--grid", SMALL])), 0);
}

#[test]
fn catalog_check_rejects_garbage() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{not json").unwrap();
    assert_eq!(code(&rdress(&["catalog", "check", path.to_str().unwrap()])), 2);
}
