use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use stpt_core::model::read_behaviours;
use stpt_core::suts::therac_model;
use stpt_oracles::count_paths;

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn stpt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stpt"))
        .current_dir(repo_root())
        .env_remove("STPT_SEED")
        .args(args)
        .output()
        .expect("stpt runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

#[test]
fn fault_free_robot_passes() {
    let out = stpt(&["--suite", "robot", "--fault", "none", "--seed", "42", "--num-tests", "50"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn therac_bug_is_found_and_shrunk() {
    let out = stpt(&[
        "--suite", "therac25", "--fault", "sequenceBug", "--seed", "7", "--num-tests", "500", "--max-len", "12",
        "--report", "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["seed"], "7");
    assert_eq!(report["testsRun"], 500);
    let failures = report["failures"].as_array().unwrap();
    assert!(!failures.is_empty());
    for f in failures {
        assert_eq!(f["kind"], "SutMismatch");
        assert_eq!(f["shrunkCommands"].as_array().unwrap().len(), 3);
        assert_eq!(f["failIndex"], 2);
        assert!(f["originalLength"].as_u64().unwrap() >= 3);
    }
}

#[test]
fn configuration_errors_exit_with_two() {
    for args in [
        &["--suite", "robot", "--num-tests", "0"][..],
        &["--suite", "robot", "--max-len", "0"],
        &["--suite", "robot", "--workers", "0"],
        &["--suite", "marsrover"],
        &["--suite", "therac25", "--fault", "wrongMove"],
        &["--suite", "robot", "--fault", "sequenceBug"],
        &["--suite", "therac25", "--weights", "Teleport=3"],
        &["--suite", "therac25", "--weights", "CursorUp=0"],
        &["--suite", "therac25", "--weights", "CursorUp"],
        &["--suite", "therac25", "--seed", "-4"],
        &["--suite", "therac25", "--config", "configs/robot-default.toml"],
        &["--suite", "robot", "--config", "no/such/file.toml"],
        &["--suite", "trace-check"],
        &["--replay", "no/such/witness.json"],
        &[],
    ] {
        assert_eq!(stpt(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let args = ["--suite", "therac25", "--fault", "sequenceBug", "--num-tests", "50", "--report", "json"];
    let explicit = stpt(&[&args[..], &["--seed", "11"]].concat());
    let from_env = Command::new(env!("CARGO_BIN_EXE_stpt"))
        .current_dir(repo_root())
        .env("STPT_SEED", "11")
        .args(args)
        .output()
        .unwrap();
    assert_eq!(explicit.stdout, from_env.stdout);
}

#[test]
fn weights_shift_the_operation_mix() {
    let out = stpt(&[
        "--suite", "therac25", "--fault", "sequenceBug", "--seed", "1", "--num-tests", "200",
        "--weights", "Select25MevElectronMode=1,Select25MevPhotonMode=1,CursorUp=1,OtherKindOfOperation=50",
        "--report", "json",
    ]);
    let report = json(&out);
    assert_eq!(report["config"]["weights"]["OtherKindOfOperation"], 50);
    let plain = json(&stpt(&["--suite", "therac25", "--fault", "sequenceBug", "--seed", "1", "--num-tests", "200", "--report", "json"]));
    assert!(report["testsFailed"].as_u64() < plain["testsFailed"].as_u64());
}

#[test]
fn reports_replay_to_the_same_failures() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let path_str = path.to_str().unwrap();
    let out = stpt(&[
        "--suite", "robot", "--fault", "wrongMove", "--seed", "9", "--num-tests", "40", "--report", "json", "--out",
        path_str,
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let replay = stpt(&["--replay", path_str, "--report", "json"]);
    assert_eq!(replay.status.code(), Some(1));
    let replays = json(&replay)["replays"].as_array().unwrap().clone();
    assert!(!replays.is_empty());
    assert!(replays.iter().all(|r| r["reproduced"] == true && r["kind"] == "SutMismatch"));
}

#[test]
fn witness_files_replay() {
    let dir = tempfile::tempdir().unwrap();
    let witness = dir.path().join("w.json");
    std::fs::write(
        &witness,
        r#"{"schemaVersion":1,"suite":"therac25","fault":"sequenceBug","kind":"SutMismatch","failIndex":2,
            "commands":[{"op":"Select25MevPhotonMode","delay":1},{"op":"CursorUp","delay":3},
                        {"op":"Select25MevElectronMode","delay":4}]}"#,
    )
    .unwrap();
    let w = witness.to_str().unwrap();
    let out = stpt(&["--replay", w, "--report", "json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["replays"][0]["reproduced"], true);
    // Without the fault the same sequence conforms, so the recording is not
    // reproduced.
    let fixed = stpt(&["--replay", w, "--fault", "none", "--report", "json"]);
    assert_eq!(fixed.status.code(), Some(0));
    assert_eq!(json(&fixed)["replays"][0]["reproduced"], false);
    assert_eq!(stpt(&["--replay", w, "--suite", "robot"]).status.code(), Some(2));
}

#[test]
fn replays_print_as_a_table() {
    let out = stpt(&["--replay", "configs/scenarios/wrong-move.json", "--config", "configs/robot-home-q.toml"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines().skip(1);
    let header: Vec<&str> = lines.next().unwrap().split("  ").filter(|c| !c.is_empty()).collect();
    assert_eq!(header, ["API code", "expected", "result", "error"]);
    let row: Vec<&str> = lines.next().unwrap().split("  ").filter(|c| !c.is_empty()).map(str::trim).collect();
    assert_eq!(&row[..3], ["moveToR", "R", "M"]);
    assert!(row[3].starts_with("Yes: SutMismatch"));
}

#[test]
fn trace_check_examples() {
    let inv = "configs/trace/area-of-interest.inv";
    assert_eq!(stpt(&["--suite", "trace-check", "--invariants", inv, "--trace", "configs/trace/covered.json"]).status.code(), Some(0));
    let out = stpt(&[
        "--suite", "trace-check", "--invariants", inv, "--trace", "configs/trace/uncovered.json", "--report", "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["invariants"][0]["firstViolation"], 0);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.inv");
    std::fs::write(&bad, "IMPLIES(TRUE\n").unwrap();
    let args = ["--suite", "trace-check", "--invariants", bad.to_str().unwrap(), "--trace", "configs/trace/covered.json"];
    assert_eq!(stpt(&args).status.code(), Some(2));
    let unordered = dir.path().join("unordered.json");
    std::fs::write(&unordered, r#"[{"time":5,"owner":"a"},{"time":4,"owner":"a"}]"#).unwrap();
    let args = ["--suite", "trace-check", "--invariants", inv, "--trace", unordered.to_str().unwrap()];
    assert_eq!(stpt(&args).status.code(), Some(2));
}

#[test]
fn behaviour_dumps() {
    let depth0 = stpt(&["--suite", "therac25", "--dump-behaviours", "--depth", "0"]);
    assert_eq!(depth0.status.code(), Some(0));
    let behaviours = read_behaviours(depth0.stdout.as_slice()).unwrap();
    assert_eq!(behaviours.len(), 1);
    assert!(behaviours[0].actions.is_empty());

    let depth3 = stpt(&["--suite", "therac25", "--dump-behaviours", "--depth", "3"]);
    let (model, _) = therac_model();
    assert_eq!(read_behaviours(depth3.stdout.as_slice()).unwrap().len(), count_paths(&model, 3));

    // From Y: initialisePosition and the four other moves, plus the prefix.
    let robot = stpt(&["--suite", "robot", "--dump-behaviours", "--depth", "1"]);
    let behaviours = read_behaviours(robot.stdout.as_slice()).unwrap();
    assert_eq!(behaviours.len(), 6);
    assert!(behaviours.iter().all(|b| b.actions != ["moveToY"]));

    let capped = stpt(&["--suite", "therac25", "--dump-behaviours", "--depth", "5", "--state-cap", "2"]);
    assert_eq!(capped.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("state cap 2"));
}

#[test]
fn timing_is_opt_in() {
    let args = ["--suite", "robot", "--num-tests", "5", "--report", "json"];
    assert!(json(&stpt(&args)).get("durationMs").is_none());
    assert!(json(&stpt(&[&args[..], &["--timing"]].concat()))["durationMs"].is_u64());
}
