//! Acceptance criteria, one PASS/FAIL line each. Runs as its own binary so
//! the lines show up in `cargo test` output.

use std::path::{Path, PathBuf};
use std::process::Command as Process;
use std::time::{Duration, Instant};
use stpt_core::conformance::{
    check_against, run_property, CheckOptions, FailKind, FailureRecord, PropertyConfig, SutAdapter, Verdict,
};
use stpt_core::gen::{default_delays, gen_commands, single_moves, CommandSequence, Rng, Seed};
use stpt_core::model::{correct_behaviours, reachable_states, State};
use stpt_core::stl::{detect_collisions, Invariant};
use stpt_core::suts::{
    robot_model, therac_spec, therac_weights, RobotConfig, RobotFault, RobotSim, TheracFault, TheracSim,
    SELECT_ELECTRON, SELECT_PHOTON, TRIGGER_WINDOW,
};
use stpt_oracles::{
    enumerate_paths, random_facts, random_invariant, random_model, random_observation, raster_collisions,
    therac_trigger_at, witness_cells, Grid,
};

type Outcome = Result<String, String>;

fn opts() -> CheckOptions {
    CheckOptions { timeout: Duration::from_secs(2), ..CheckOptions::default() }
}

fn stpt() -> Process {
    let mut cmd = Process::new(env!("CARGO_BIN_EXE_stpt"));
    cmd.current_dir(repo_root()).env_remove("STPT_SEED");
    cmd
}

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn expect_kind(name: &str, verdict: &Verdict, want: Option<FailKind>) -> Result<(), String> {
    if verdict.kind() == want {
        Ok(())
    } else {
        Err(format!("{name}: expected {want:?}, got {:?}", verdict.kind()))
    }
}

fn robot_scenario(config: RobotConfig, op: &str) -> Verdict {
    let spec = robot_model(&config);
    let mut sim = RobotSim::new(config).expect("valid config");
    check_against(&spec, &mut sim, &CommandSequence::at_times([(op, 1)]), &opts())
}

fn init_and_move_scenarios() -> Outcome {
    let home_q = || RobotConfig::default().with_home("Q");
    let scenarios = [
        ("correct init", robot_scenario(RobotConfig::default(), "initialisePosition"), None, None),
        (
            "wrong init",
            robot_scenario(RobotConfig::default().with_fault(RobotFault::WrongInit), "initialisePosition"),
            Some(FailKind::InitMismatch),
            Some("K"),
        ),
        ("move to current", robot_scenario(home_q(), "moveToQ"), Some(FailKind::DisabledAction), None),
        ("wrong move", robot_scenario(home_q().with_fault(RobotFault::WrongMove), "moveToR"), Some(FailKind::SutMismatch), Some("M")),
    ];
    for (name, verdict, kind, observed) in &scenarios {
        expect_kind(name, verdict, *kind)?;
        if let Some(pos) = observed {
            let got = verdict.failure().and_then(|f| f.witness.observed.clone());
            if got != Some(State::new().with("position", *pos)) {
                return Err(format!("{name}: observed {got:?}, expected position {pos}"));
            }
        }
    }
    // The same scenarios through the command line.
    let cli_scenarios: [(&str, &[&str], i32); 4] = [
        ("init-ok", &[], 0),
        ("wrong-init", &[], 1),
        ("move-to-current", &["--config", "configs/robot-home-q.toml"], 1),
        ("wrong-move", &["--config", "configs/robot-home-q.toml"], 1),
    ];
    for (file, extra, code) in cli_scenarios {
        let out = stpt()
            .args(["--replay", &format!("configs/scenarios/{file}.json")])
            .args(extra)
            .output()
            .map_err(|e| e.to_string())?;
        if out.status.code() != Some(code) {
            return Err(format!("stpt --replay {file}: exit {:?}, expected {code}", out.status.code()));
        }
    }
    Ok("4/4 scenarios, library and command line".into())
}

fn therac_trigger() -> Outcome {
    let check = |t3| {
        let mut sim = TheracSim::new(TheracFault::SequenceBug);
        let seq = CommandSequence::at_times([(SELECT_PHOTON, 1), ("CursorUp", 4), (SELECT_ELECTRON, t3)]);
        check_against(&therac_spec(), &mut sim, &seq, &opts())
    };
    expect_kind("electron at t=8", &check(8), Some(FailKind::SutMismatch))?;
    expect_kind("electron at t=12", &check(12), None)?;
    Ok("t=8 fails with SutMismatch, t=12 passes".into())
}

const SEEDS: u64 = 100;
const NUM_TESTS: usize = 1_000;
const MAX_LEN: usize = 12;
const DISCOVERY_THRESHOLD: usize = 90;

/// Every seed's full run: all failures, not just the first.
fn discovery_runs() -> Vec<(u64, Vec<FailureRecord>)> {
    let spec = therac_spec();
    let gen = gen_commands(&therac_weights(), MAX_LEN, default_delays()).expect("valid vocabulary");
    let make = || Box::new(TheracSim::new(TheracFault::SequenceBug)) as Box<dyn SutAdapter>;
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get().min(8));
    (1..=SEEDS)
        .map(|seed| {
            let mut cfg = PropertyConfig::new(NUM_TESTS, Seed(seed));
            cfg.check = opts();
            cfg.workers = workers;
            (seed, run_property(&spec, &make, &gen, &cfg).expect("valid config").failures)
        })
        .collect()
}

fn is_trigger(seq: &CommandSequence) -> bool {
    let timed: Vec<(&str, u64)> = seq.commands.iter().map(|c| c.op.as_str()).zip(seq.timestamps()).collect();
    seq.len() == 3 && therac_trigger_at(&timed, 2, TRIGGER_WINDOW)
}

fn randomized_discovery(runs: &[(u64, Vec<FailureRecord>)]) -> Outcome {
    let found = runs
        .iter()
        .filter(|(_, failures)| failures.iter().any(|f| f.kind == FailKind::SutMismatch && is_trigger(&f.shrunk.sequence)))
        .count();
    let detail = format!("{found}/{SEEDS} seeds find the fault (threshold {DISCOVERY_THRESHOLD}, {NUM_TESTS} tests, maxLen {MAX_LEN})");
    if found >= DISCOVERY_THRESHOLD {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn shrinking_minimality(runs: &[(u64, Vec<FailureRecord>)]) -> Outcome {
    let spec = therac_spec();
    let mut sim = TheracSim::new(TheracFault::SequenceBug);
    let mut checked = 0;
    for (seed, failures) in runs {
        for f in failures {
            let shrunk = &f.shrunk.sequence;
            let ts = shrunk.timestamps();
            if shrunk.len() != 3 || ts[2] - ts[0] > TRIGGER_WINDOW {
                return Err(format!("seed {seed} test {}: shrunk to {shrunk}", f.test_index));
            }
            for candidate in single_moves(shrunk) {
                if !check_against(&spec, &mut sim, &candidate, &opts()).is_pass() {
                    return Err(format!("seed {seed} test {}: {candidate} still fails", f.test_index));
                }
            }
            checked += 1;
        }
    }
    if checked == 0 {
        return Err("no failures to check".into());
    }
    Ok(format!("{checked} failures, all 3 commands within {TRIGGER_WINDOW} ticks and 1-minimal"))
}

fn enumeration_oracle() -> Outcome {
    let (rngs, _) = Rng::from_seed(Seed(6_000)).split_n(30);
    let mut behaviours = 0;
    for (i, mut rng) in rngs.into_iter().enumerate() {
        let model = random_model(&mut rng, 100);
        let reachable = reachable_states(&model, 1_000).map_err(|e| e.to_string())?.len();
        if reachable > 100 {
            return Err(format!("model {i} has {reachable} reachable states"));
        }
        let depth = 6 - i % 3;
        let got = correct_behaviours(&model, depth, 1_000).map_err(|e| e.to_string())?;
        let want = enumerate_paths(&model, depth);
        if got.len() != want.len() {
            return Err(format!("model {i} depth {depth}: {} behaviours, oracle {}", got.len(), want.len()));
        }
        if got.iter().any(|b| !want.contains(&(b.actions.clone(), b.states.clone()))) {
            return Err(format!("model {i} depth {depth}: a behaviour is missing from the oracle"));
        }
        behaviours += got.len();
    }
    Ok(format!("30 random models, {behaviours} behaviours, count and content agree"))
}

const KERNEL_CASES: usize = 1_000;

fn kernel_properties() -> Outcome {
    let (rngs, _) = Rng::from_seed(Seed(7_000)).split_n(KERNEL_CASES);
    let mut collisions = 0;
    for (i, rng) in rngs.into_iter().enumerate() {
        let (mut a, b) = rng.split();
        let (mut c, mut d) = b.split();
        let inv = random_invariant(&mut a, 4);
        let other = random_invariant(&mut c, 3);
        let obs = random_observation(&mut d);
        let norm = inv.normalize();
        if norm.normalize() != norm {
            return Err(format!("case {i}: normalize is not idempotent on {inv}"));
        }
        if norm.eval(&obs) != inv.eval(&obs) {
            return Err(format!("case {i}: normalize changes the value of {inv}"));
        }
        let implies = Invariant::implies(inv.clone(), other.clone()).eval(&obs);
        if implies != Invariant::or([Invariant::not(inv.clone()), other]).eval(&obs) {
            return Err(format!("case {i}: IMPLIES differs from OR(NOT a, b)"));
        }
        let facts = random_facts(&mut d, 32, 16, 6);
        let grid = Grid::covering(&facts);
        let found = detect_collisions(&facts);
        if witness_cells(&grid, &found) != raster_collisions(&grid, &facts) {
            return Err(format!("case {i}: collisions disagree with rasterization for {facts:?}"));
        }
        collisions += found.len();
    }
    Ok(format!("{KERNEL_CASES} cases per property, {collisions} collisions cross-checked, 0 violations"))
}

fn cli_determinism() -> Outcome {
    let campaigns: [&[&str]; 3] = [
        &["--suite", "therac25", "--fault", "sequenceBug", "--seed", "7", "--num-tests", "300"],
        &["--suite", "robot", "--fault", "wrongMove", "--seed", "42", "--num-tests", "100"],
        &["--suite", "robot", "--config", "configs/robot-outside-workspace.toml", "--seed", "3", "--num-tests", "100", "--workers", "3"],
    ];
    for args in campaigns {
        let run = || stpt().args(args).args(["--report", "json"]).output().map_err(|e| e.to_string());
        let (first, second) = (run()?, run()?);
        if first.status.code() != Some(1) {
            return Err(format!("{args:?}: exit {:?}, expected failures", first.status.code()));
        }
        if first.stdout.is_empty() || first.stdout != second.stdout {
            return Err(format!("{args:?}: reports differ"));
        }
    }
    Ok("3 campaigns, byte-identical JSON on rerun".into())
}

struct Criterion {
    id: u8,
    name: &'static str,
    limit: Option<Duration>,
}

fn main() {
    let mut failed = 0;
    let mut report = |c: Criterion, started: Instant, outcome: Outcome| {
        let took = started.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(detail), Some(limit)) if took > limit => Err(format!("{detail}; took {took:.2?}, limit {limit:?}")),
            (other, _) => other,
        };
        match outcome {
            Ok(detail) => println!("PASS [{}] {}: {detail} ({took:.2?})", c.id, c.name),
            Err(reason) => {
                failed += 1;
                println!("FAIL [{}] {}: {reason} ({took:.2?})", c.id, c.name);
            }
        }
    };

    let t = Instant::now();
    report(Criterion { id: 1, name: "init and move scenarios", limit: Some(Duration::from_secs(1)) }, t, init_and_move_scenarios());
    let t = Instant::now();
    report(Criterion { id: 2, name: "therac deterministic trigger", limit: Some(Duration::from_secs(1)) }, t, therac_trigger());
    let t = Instant::now();
    let runs = discovery_runs();
    report(Criterion { id: 3, name: "randomized discovery", limit: Some(Duration::from_secs(60)) }, t, randomized_discovery(&runs));
    let t = Instant::now();
    report(Criterion { id: 4, name: "shrinking minimality", limit: None }, t, shrinking_minimality(&runs));
    let t = Instant::now();
    report(Criterion { id: 5, name: "enumeration oracle", limit: Some(Duration::from_secs(10)) }, t, enumeration_oracle());
    let t = Instant::now();
    report(Criterion { id: 6, name: "logic kernel properties", limit: Some(Duration::from_secs(30)) }, t, kernel_properties());
    let t = Instant::now();
    report(Criterion { id: 7, name: "end-to-end determinism", limit: None }, t, cli_determinism());

    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
