use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_delpezzo")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn sing_reports_a1() {
    let o = run(&["sing", "2", "1", "--b", "6/7"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("[-2]") && s.contains("mld         4/7"), "{s}");
}

#[test]
fn sing_seven_three() {
    let s = stdout(&run(&["sing", "7", "3"]));
    assert!(s.contains("[-2, -4]") && s.contains("11/49"), "{s}");
}

#[test]
fn sing_scaled_type() {
    let s = stdout(&run(&["sing", "2", "1", "--d", "2"]));
    assert!(s.contains("[4,2] (d = 2)"), "{s}");
}

#[test]
fn sing_rejects_non_coprime() {
    let o = run(&["sing", "4", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("coprime"));
}

#[test]
fn hj_both_directions() {
    assert_eq!(stdout(&run(&["hj", "5", "2"])).trim(), "[-2, -3]");
    assert_eq!(stdout(&run(&["hj", "--chain", "-2,-3"])).trim(), "[5,2]");
}

#[test]
fn verify_row_five_passes() {
    let o = run(&["verify-row", "5"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("H^2 = 15"));
}

#[test]
fn verify_row_three_reports_mismatch() {
    let o = run(&["verify-row", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("computed 11/12, stated 9/10"));
}

#[test]
fn complement_check_row_four() {
    let o = run(&["complement-check", "--row", "4", "--coef", "C=6/7", "--coef", "C2=2/7"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = run(&["complement-check", "--row", "4", "--n", "6"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn enumerate_is_deterministic() {
    let a = run(&["enumerate", "--deterministic"]);
    let b = run(&["enumerate", "--jobs", "4"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let t: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(t["rows"].as_array().unwrap().len(), 19);
}

#[test]
fn enumerate_max_n_six_has_no_complements() {
    let o = run(&["enumerate", "--max-n", "6"]);
    assert!(o.status.success());
    let t: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for row in t["rows"].as_array().unwrap() {
        for opt in row["boundary_options"].as_array().unwrap() {
            assert!(opt["complements"].as_array().unwrap().is_empty(), "row {}", row["id"]);
        }
    }
}

#[test]
fn verify_golden_flags_missing_row() {
    let o = run(&["enumerate", "--verify-golden", "--output", std::env::temp_dir().join("dp.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 19 not produced"));
}

#[test]
fn export_dot_writes_files() {
    let dir = std::env::temp_dir().join(format!("dp-dot-{}", std::process::id()));
    let o = run(&["export-dot", "--output", dir.to_str().unwrap()]);
    assert!(o.status.success());
    let one = std::fs::read_to_string(dir.join("row-01.dot")).unwrap();
    assert!(one.starts_with("graph"));
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 20);
    std::fs::remove_dir_all(dir).ok();
}
