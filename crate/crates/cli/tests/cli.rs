use std::path::PathBuf;
use std::process::{Command, Output};

fn kim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kim")).args(args).current_dir(workspace()).output().expect("kim runs")
}

fn workspace() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn free_lie_dims() {
    let o = kim(&["lie", "dims", "--gens", "2", "--class", "5", "--quotient", "free"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("# kim lie dims --gens 2 --class 5 --quotient free sha256="));
    assert_eq!(lines.next(), Some("2 1 2 3 6"));
}

#[test]
fn json_output_echoes_config() {
    let o = kim(&["--json", "lie", "dims", "--gens", "2", "--class", "4", "--quotient", "metabelian"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["dims"], serde_json::json!([2, 1, 2, 3]));
    assert_eq!(v["config"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn intro_example_demo() {
    let o = kim(&["intersect", "demo", "p1-cross"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("locus: z1 - z2"));
    assert!(out.contains("[same ideal]"));
}

#[test]
fn counterexample_fixture_is_obstructed() {
    let o = kim(&["criteria", "check", "fixtures/siksek_counterexample.json"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("Siksek condition satisfied"));
    assert!(out.contains("overall verdict: obstructed: base-change Prym"));
    let j = kim(&["--json", "criteria", "check", "fixtures/siksek_counterexample.json"]);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(v["result"]["verdict"], "obstructed: base-change Prym");
}

#[test]
fn same_input_same_digest() {
    let a = stdout(&kim(&["criteria", "check", "fixtures/siksek_counterexample.json", "--criterion", "siksek"]));
    let b = stdout(&kim(&["criteria", "check", "fixtures/siksek_counterexample.json", "--criterion", "depth1"]));
    let digest = |s: &str| s.lines().next().unwrap().rsplit("sha256=").next().unwrap().to_string();
    assert_eq!(digest(&a), digest(&b));
}

#[test]
fn transport_identities_have_no_residual() {
    let o = kim(&["transport", "verify", "--chart", "p1:0,1", "--depth", "3", "--order", "6"]);
    assert!(o.status.success());
    for line in stdout(&o).lines().skip(1) {
        assert!(line.ends_with(" 0"), "{line}");
    }
}

#[test]
fn transport_solve_depth_one() {
    let o = kim(&["--json", "transport", "solve", "--depth", "1", "--order", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let j = v["result"]["J"].as_object().unwrap();
    assert_eq!(j.len(), 2);
    assert!(j.values().all(|s| s.as_str().unwrap().contains("u")));
}

#[test]
fn connection_round_trip_through_reduce() {
    let dir = std::env::temp_dir().join(format!("kim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("conn.json");
    std::fs::write(
        &file,
        r#"{"chart": "p1:0,1", "blocks": [1, 2, 1],
            "entries": [[1, 0, ["1/z"]], [2, 0, ["1/(1-z)"]], [3, 1, ["2*z + 1/(1-z)"]]]}"#,
    )
    .unwrap();
    let o = kim(&["--json", "connection", "reduce", file.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["certified"], true);
    assert!(!v["result"]["gauge"]["entries"].as_array().unwrap().is_empty());
}

#[test]
fn formal_group_verify() {
    let o = kim(&["formalgroup", "verify", "--curve", "0,0,1,-1,0", "--order", "12"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("inverse relation: holds"));
    assert!(out.contains("group law residual terms (order 10): 0"));
}

#[test]
fn cohomology_commands() {
    let o = kim(&["cohom", "artin-tate", "--plus", "2", "--minus", "1", "--twist", "3"]);
    assert!(stdout(&o).contains("h1 = 2"));
    let o = kim(&["cohom", "induced", "--dim", "3", "--degree", "2", "--local", "2"]);
    assert!(stdout(&o).contains("induced dimension 6"));
}

#[test]
fn exit_codes() {
    let domain = kim(&["cohom", "artin-tate", "--plus", "1", "--minus", "0", "--twist", "1"]);
    assert_eq!(domain.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&domain.stderr).starts_with("error: BadTwist"));
    assert_eq!(kim(&["lie", "dims", "--gens", "2"]).status.code(), Some(2));
    assert_eq!(kim(&["criteria", "check", "no/such/file.json"]).status.code(), Some(2));
    assert_eq!(kim(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(kim(&["formalgroup", "log", "--curve", "0,0,0,0,0"]).status.code(), Some(1));
}
