mod campaign;
mod report;

use campaign::{parse_weights, ConfigError, Suite, SuiteName};
use clap::{Parser, ValueEnum};
use report::{
    to_json, CampaignReport, ConfigEcho, FailureEntry, ReplayEntry, ReplayReport, TraceEntry, TraceReport,
    REPORT_SCHEMA_VERSION,
};
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};
use stpt_core::conformance::{check_against, classify, run_property, CheckOptions, PropertyConfig, SutAdapter, Verdict, WitnessFile};
use stpt_core::gen::{Command, CommandSequence, Seed};
use stpt_core::model::{correct_behaviours, write_behaviours, State, StepOutcome};
use stpt_core::stl::{check_trace, parse_invariants, Observation, Rect};
use stpt_core::suts::RobotConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

/// Property-based conformance testing of simulated systems against
/// state-machine specifications and spatio-temporal invariants.
///
/// Exit status: 0 when everything conforms, 1 when failures were found,
/// 2 on configuration errors.
#[derive(Debug, Parser)]
#[command(name = "stpt", version)]
struct Cli {
    /// Suite to run. Optional with --replay, which records it.
    #[arg(long, value_enum)]
    suite: Option<SuiteName>,

    /// Root seed, decimal.
    #[arg(long, env = "STPT_SEED", default_value = "0")]
    seed: Seed,

    #[arg(long, default_value_t = 100)]
    num_tests: usize,

    /// Maximum generated sequence length.
    #[arg(long, default_value_t = 12)]
    max_len: usize,

    /// Behaviour depth for --dump-behaviours.
    #[arg(long, default_value_t = 3)]
    depth: usize,

    /// Distinct-state bound for --dump-behaviours.
    #[arg(long, default_value_t = 10_000)]
    state_cap: usize,

    /// Simulator fault: none or sequenceBug (therac25); none, wrongInit or
    /// wrongMove (robot).
    #[arg(long)]
    fault: Option<String>,

    /// Operation weight overrides, e.g. CursorUp=5,OtherKindOfOperation=1.
    #[arg(long)]
    weights: Option<String>,

    /// Wall-clock limit for each SUT response.
    #[arg(long, default_value_t = 5_000)]
    timeout_ms: u64,

    #[arg(long, value_enum, default_value = "text")]
    report: ReportFormat,

    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Replay a witness file or a JSON report instead of generating tests.
    #[arg(long)]
    replay: Option<PathBuf>,

    /// Invariant file for trace-check, one invariant per line.
    #[arg(long)]
    invariants: Option<PathBuf>,

    /// Trace file for trace-check: a JSON list of {time, owner, boxes}.
    #[arg(long)]
    trace: Option<PathBuf>,

    /// Write the model's behaviours up to --depth as JSON Lines and exit.
    #[arg(long)]
    dump_behaviours: bool,

    /// Parallel simulator instances. Does not change the report.
    #[arg(long, default_value_t = 1)]
    workers: usize,

    /// Stop at the first failing test.
    #[arg(long)]
    stop_on_first_failure: bool,

    /// Robot waypoint map (TOML).
    #[arg(long)]
    config: Option<PathBuf>,

    /// Include the wall time in the report. Reports are then no longer
    /// byte-identical between runs.
    #[arg(long)]
    timing: bool,
}

/// Report text plus whether anything failed.
struct Outcome {
    text: String,
    failed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => match emit(&cli, &outcome.text) {
            Ok(()) => ExitCode::from(u8::from(outcome.failed)),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Found(message)) => {
            eprintln!("{message}");
            ExitCode::from(1)
        }
    }
}

enum Failure {
    Config(ConfigError),
    /// A failure with no report to write, such as an exceeded state cap.
    Found(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

fn config_err(message: impl Into<String>) -> Failure {
    Failure::Config(ConfigError(message.into()))
}

fn emit(cli: &Cli, text: &str) -> Result<(), ConfigError> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| ConfigError(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    if cli.replay.is_some() {
        return replay(cli);
    }
    let suite = cli.suite.ok_or_else(|| config_err("--suite is required"))?;
    if suite == SuiteName::TraceCheck {
        return trace_check(cli);
    }
    if cli.invariants.is_some() || cli.trace.is_some() {
        return Err(config_err("--invariants and --trace belong to the trace-check suite"));
    }
    let suite = Suite::build(suite, cli.fault.as_deref(), robot_config(cli)?)?;
    if cli.dump_behaviours {
        return dump_behaviours(cli, &suite);
    }
    campaign(cli, &suite)
}

fn robot_config(cli: &Cli) -> Result<Option<RobotConfig>, ConfigError> {
    cli.config
        .as_deref()
        .map(|path| RobotConfig::from_toml(&read(path)?).map_err(|e| ConfigError(format!("{}: {e}", path.display()))))
        .transpose()
}

fn check_options(cli: &Cli) -> Result<CheckOptions, ConfigError> {
    if cli.timeout_ms == 0 {
        return Err(ConfigError("--timeout-ms must be at least 1".into()));
    }
    Ok(CheckOptions { timeout: Duration::from_millis(cli.timeout_ms), ..CheckOptions::default() })
}

fn campaign(cli: &Cli, suite: &Suite) -> Result<Outcome, Failure> {
    if cli.num_tests == 0 {
        return Err(config_err("--num-tests must be at least 1"));
    }
    if cli.max_len == 0 {
        return Err(config_err("--max-len must be at least 1"));
    }
    if cli.workers == 0 {
        return Err(config_err("--workers must be at least 1"));
    }
    let overrides = cli.weights.as_deref().map(parse_weights).transpose()?.unwrap_or_default();
    let weights = suite.weights.with_overrides(&overrides).map_err(ConfigError::from)?;
    let generator = suite.generator(&weights, cli.max_len)?;
    let mut cfg = PropertyConfig::new(cli.num_tests, cli.seed);
    cfg.check = check_options(cli)?;
    cfg.workers = cli.workers;
    cfg.stop_on_first_failure = cli.stop_on_first_failure;

    let started = Instant::now();
    let make = || suite.adapter();
    let result = run_property(&suite.spec, &make, &generator, &cfg).map_err(|e| config_err(e.to_string()))?;
    let report = CampaignReport {
        schema_version: REPORT_SCHEMA_VERSION,
        seed: cli.seed,
        config: ConfigEcho {
            suite: suite.name.as_str().into(),
            fault: suite.fault.to_string(),
            num_tests: cli.num_tests,
            max_len: cli.max_len,
            weights: weights.iter().map(|(op, w)| (op.to_string(), w)).collect(),
            timeout_ms: cli.timeout_ms,
            workers: cli.workers,
            stop_on_first_failure: cli.stop_on_first_failure,
            robot: suite.robot.clone(),
        },
        tests_run: result.tests_run,
        tests_failed: result.tests_failed,
        failures: result.failures.iter().map(FailureEntry::from_record).collect(),
        duration_ms: cli.timing.then(|| started.elapsed().as_millis()),
    };
    let text = match cli.report {
        ReportFormat::Json => to_json(&report),
        ReportFormat::Text => report::campaign_text(&report),
    };
    Ok(Outcome { text, failed: report.tests_failed > 0 })
}

/// One sequence to replay, with what was recorded for it.
struct Recorded {
    commands: CommandSequence,
    kind: Option<stpt_core::conformance::FailKind>,
    fail_index: Option<usize>,
}

/// The parts of a JSON report that replay needs.
#[derive(serde::Deserialize)]
#[serde(rename_all = "camelCase")]
struct SavedReport {
    config: SavedConfig,
    failures: Vec<SavedFailure>,
}

#[derive(serde::Deserialize)]
struct SavedConfig {
    suite: String,
    fault: String,
    robot: Option<RobotConfig>,
}

#[derive(serde::Deserialize)]
#[serde(rename_all = "camelCase")]
struct SavedFailure {
    kind: stpt_core::conformance::FailKind,
    fail_index: Option<usize>,
    shrunk_commands: Vec<Command>,
}

fn replay(cli: &Cli) -> Result<Outcome, Failure> {
    let path = cli.replay.as_deref().expect("replay path is set");
    let text = read(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    let bad = |e: serde_json::Error| config_err(format!("{}: {e}", path.display()));
    let (suite_name, fault, saved_robot, recorded) = if value.get("failures").is_some() {
        let saved: SavedReport = serde_json::from_value(value).map_err(bad)?;
        let recorded = saved
            .failures
            .into_iter()
            .map(|f| Recorded { commands: CommandSequence::new(f.shrunk_commands), kind: Some(f.kind), fail_index: f.fail_index })
            .collect();
        (saved.config.suite, Some(saved.config.fault), saved.config.robot, recorded)
    } else {
        let w: WitnessFile = serde_json::from_value(value).map_err(bad)?;
        let recorded = vec![Recorded { commands: w.commands, kind: w.kind, fail_index: w.fail_index }];
        (w.suite, w.fault, None, recorded)
    };
    let name = SuiteName::parse(&suite_name)?;
    if cli.suite.is_some_and(|s| s != name) {
        return Err(config_err(format!("{} records suite {suite_name}", path.display())));
    }
    if recorded.iter().any(|r| !r.commands.commands.iter().all(|c| c.delay >= 1)) {
        return Err(config_err("replayed command delays must be at least 1"));
    }
    let robot = robot_config(cli)?.or(saved_robot);
    let suite = Suite::build(name, cli.fault.as_deref().or(fault.as_deref()), robot)?;
    let opts = check_options(cli)?;
    let mut adapter = suite.adapter();
    let replays: Vec<ReplayEntry> =
        recorded.into_iter().map(|r| replay_one(&suite, adapter.as_mut(), r, &opts)).collect();
    let report = ReplayReport {
        schema_version: REPORT_SCHEMA_VERSION,
        suite: suite.name.as_str().into(),
        fault: suite.fault.to_string(),
        replays,
    };
    let failed = report.replays.iter().any(|r| r.kind.is_some());
    let text = match cli.report {
        ReportFormat::Json => to_json(&report),
        ReportFormat::Text => report::replay_text(&report),
    };
    Ok(Outcome { text, failed })
}

fn replay_one(suite: &Suite, adapter: &mut dyn SutAdapter, r: Recorded, opts: &CheckOptions) -> ReplayEntry {
    let verdict = check_against(&suite.spec, adapter, &r.commands, opts);
    let reproduced = r.kind.map(|k| verdict.kind() == Some(k) && verdict.failure().unwrap().witness.fail_index == r.fail_index);
    let classification = classify(&verdict).ok();
    let (api_call, expected, observed, detail, kind, fail_index) = match &verdict {
        Verdict::Fail(f) => (
            f.witness.api_call().to_string(),
            f.witness.expected.clone(),
            f.witness.observed.clone(),
            f.witness.detail.clone(),
            Some(f.kind),
            f.witness.fail_index,
        ),
        Verdict::Pass => {
            let finals = final_states(suite, &r.commands);
            let observed = (finals.len() == 1).then(|| finals[0].clone());
            let api = r.commands.commands.last().map_or("<reset>".into(), |c| c.op.clone());
            (api, finals, observed, None, None, None)
        }
    };
    ReplayEntry {
        commands: r.commands.commands,
        recorded_kind: r.kind,
        recorded_fail_index: r.fail_index,
        kind,
        fail_index,
        classification,
        api_call,
        expected,
        observed,
        detail,
        reproduced,
    }
}

/// Model states a conforming run of `seq` can end in.
fn final_states(suite: &Suite, seq: &CommandSequence) -> Vec<State> {
    let mut current: BTreeSet<State> = suite.spec.model.init().iter().cloned().collect();
    for c in &seq.commands {
        current = current
            .iter()
            .flat_map(|s| match suite.spec.model.step(s, &c.op) {
                StepOutcome::NextStates(next) => next,
                _ => Vec::new(),
            })
            .collect();
    }
    current.into_iter().collect()
}

fn dump_behaviours(cli: &Cli, suite: &Suite) -> Result<Outcome, Failure> {
    let behaviours = correct_behaviours(&suite.spec.model, cli.depth, cli.state_cap)
        .map_err(|e| Failure::Found(format!("error: {e}")))?;
    let mut out = Vec::new();
    write_behaviours(&mut out, &behaviours).expect("writing to memory succeeds");
    Ok(Outcome { text: String::from_utf8(out).expect("behaviours are UTF-8"), failed: false })
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceRecord {
    time: i64,
    owner: String,
    #[serde(default)]
    boxes: Vec<[i64; 4]>,
}

fn trace_check(cli: &Cli) -> Result<Outcome, Failure> {
    let (Some(inv_path), Some(trace_path)) = (&cli.invariants, &cli.trace) else {
        return Err(config_err("trace-check needs --invariants and --trace"));
    };
    let invariants =
        parse_invariants(&read(inv_path)?).map_err(|e| config_err(format!("{}: {e}", inv_path.display())))?;
    let records: Vec<TraceRecord> = serde_json::from_str(&read(trace_path)?)
        .map_err(|e| config_err(format!("{}: {e}", trace_path.display())))?;
    let trace: Vec<Observation> = records
        .into_iter()
        .map(|r| Observation::new(r.time, r.owner, r.boxes.into_iter().map(|[a, b, c, d]| Rect::new(a, b, c, d))))
        .collect();
    let mut entries = Vec::with_capacity(invariants.len());
    for inv in &invariants {
        let verdict = check_trace(inv, &trace).map_err(|e| config_err(format!("{}: {e}", trace_path.display())))?;
        entries.push(TraceEntry { invariant: inv.to_string(), holds: verdict.holds, first_violation: verdict.first_violation });
    }
    let report = TraceReport {
        schema_version: REPORT_SCHEMA_VERSION,
        suite: SuiteName::TraceCheck.as_str().into(),
        observations: trace.len(),
        invariants: entries,
    };
    let failed = report.invariants.iter().any(|e| !e.holds);
    let text = match cli.report {
        ReportFormat::Json => to_json(&report),
        ReportFormat::Text => report::trace_text(&report),
    };
    Ok(Outcome { text, failed })
}
