use std::process::{Command, Output};

use serde_json::Value;

fn tl2b(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tl2b")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is json")
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["relations", "--n", "3", "--seed", "11"];
    let a = tl2b(&args);
    let b = tl2b(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn report_carries_config_and_point() {
    let out = tl2b(&["gram", "--n", "2", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["schema"], "tl2b/1");
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["config"]["seed"], 5);
    assert_eq!(r["config"]["n"], 2);
    assert_eq!(r["config"]["bound"], 12);
    assert_eq!(r["status"], "pass");
    for key in ["s", "a", "v", "t"] {
        assert!(r["param_point"][key].is_string(), "missing {key}");
    }
    let ids: Vec<&str> = r["audit"].as_array().unwrap().iter().map(|row| row["identity_id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"gram.closed.words.N2"));
    assert!(ids.contains(&"gram.two_sites"));
}

#[test]
fn different_seeds_give_different_points() {
    let a = json(&tl2b(&["modules", "--n", "2", "--seed", "1"]));
    let b = json(&tl2b(&["modules", "--n", "2", "--seed", "2"]));
    assert_ne!(a["param_point"], b["param_point"]);
}

#[test]
fn corrupted_parameters_fail_with_exit_one() {
    let out = tl2b(&["relations", "--n", "3", "--corrupt"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["status"], "fail");
    assert!(r["first_failure"].is_object());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("FAIL "));
}

#[test]
fn module_dimensions() {
    for n in [3usize, 4] {
        let r = json(&tl2b(&["modules", "--n", &n.to_string()]));
        assert_eq!(r["status"], "pass");
        let rows = r["data"]["modules"].as_array().unwrap();
        for row in rows {
            assert_eq!(row["dim"], row["expected"], "{row}");
        }
        let big = format!("W({n})(b)");
        let top = rows.iter().find(|row| row["module"] == big.as_str()).unwrap();
        assert_eq!(top["dim"], 1u64 << n);
    }
}

#[test]
fn exceptional_point_has_an_invariant_block() {
    let out = tl2b(&["irreps", "--n", "2", "--theta", "+,1,+,-"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["config"]["theta"], "+,1,+,-");
    assert!(r["failed"].as_u64() == Some(0));
}

#[test]
fn invalid_input_exits_with_two() {
    assert_eq!(tl2b(&["gram", "--n", "3", "--theta", "+,1,+,+"]).status.code(), Some(2));
    assert_eq!(tl2b(&["gram", "--theta", "+,1"]).status.code(), Some(2));
    assert_eq!(tl2b(&["gram", "--n", "1"]).status.code(), Some(2));
    assert_eq!(tl2b(&["basis", "--backend", "symbolic"]).status.code(), Some(2));
}

#[test]
fn csv_has_header_block_and_table() {
    let out = tl2b(&["gram", "--n", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# schema: tl2b/1\n"));
    assert!(text.contains("identity_id,reference,status,max_abs_deviation\n"));
}

#[test]
fn symbolic_two_site_identity() {
    let out = tl2b(&["gram", "--n", "2", "--backend", "symbolic"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "pass");
}

#[test]
fn writes_to_file() {
    let dir = std::env::temp_dir().join(format!("tl2b-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = tl2b(&["modules", "--n", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["command"], "modules");
    std::fs::remove_dir_all(&dir).ok();
}
