//! JSON and text renderings of campaign, replay and trace-check results.

use serde::Serialize;
use std::collections::BTreeMap;
use stpt_core::conformance::{Classification, FailKind, FailureRecord, SpatialWitness};
use stpt_core::gen::{Command, CommandSequence, Seed};
use stpt_core::model::{State, Value};
use stpt_core::suts::RobotConfig;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConfigEcho {
    pub suite: String,
    pub fault: String,
    pub num_tests: usize,
    pub max_len: usize,
    pub weights: BTreeMap<String, u32>,
    pub timeout_ms: u64,
    pub workers: usize,
    pub stop_on_first_failure: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub robot: Option<RobotConfig>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FailureEntry {
    pub test_index: usize,
    pub kind: FailKind,
    pub classification: Classification,
    /// Index of the failing command in `shrunkCommands`.
    pub fail_index: Option<usize>,
    pub api_call: String,
    pub expected: Vec<State>,
    pub observed: Option<State>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spatial: Option<SpatialWitness>,
    pub original_length: usize,
    pub original_fail_index: Option<usize>,
    pub original_commands: Vec<Command>,
    pub shrunk_commands: Vec<Command>,
}

impl FailureEntry {
    pub fn from_record(r: &FailureRecord) -> Self {
        let w = &r.shrunk;
        FailureEntry {
            test_index: r.test_index,
            kind: r.kind,
            classification: r.classification,
            fail_index: w.fail_index,
            api_call: w.api_call().to_string(),
            expected: w.expected.clone(),
            observed: w.observed.clone(),
            detail: w.detail.clone(),
            spatial: w.spatial.clone(),
            original_length: r.original.sequence.len(),
            original_fail_index: r.original.fail_index,
            original_commands: r.original.sequence.commands.clone(),
            shrunk_commands: w.sequence.commands.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CampaignReport {
    pub schema_version: u32,
    pub seed: Seed,
    pub config: ConfigEcho,
    pub tests_run: usize,
    pub tests_failed: usize,
    pub failures: Vec<FailureEntry>,
    /// Only present with `--timing`, so that reports are reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u128>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReplayEntry {
    pub commands: Vec<Command>,
    pub recorded_kind: Option<FailKind>,
    pub recorded_fail_index: Option<usize>,
    /// `None` when the replay passed.
    pub kind: Option<FailKind>,
    pub fail_index: Option<usize>,
    pub classification: Option<Classification>,
    pub api_call: String,
    pub expected: Vec<State>,
    pub observed: Option<State>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Whether the replay ended as recorded; `None` without a recording.
    pub reproduced: Option<bool>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReplayReport {
    pub schema_version: u32,
    pub suite: String,
    pub fault: String,
    pub replays: Vec<ReplayEntry>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceEntry {
    pub invariant: String,
    pub holds: bool,
    pub first_violation: Option<usize>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceReport {
    pub schema_version: u32,
    pub suite: String,
    pub observations: usize,
    pub invariants: Vec<TraceEntry>,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

fn value_text(v: &Value) -> String {
    match v {
        Value::Bool(b) => b.to_string(),
        Value::Int(i) => i.to_string(),
        Value::Str(s) => s.clone(),
    }
}

/// A single-variable state prints as its value, as in `Y`; otherwise
/// `name=value` pairs.
pub fn state_text(s: &State) -> String {
    let pairs: Vec<(&str, &Value)> = s.iter().collect();
    match pairs.as_slice() {
        [(_, v)] => value_text(v),
        _ => pairs.iter().map(|(k, v)| format!("{k}={}", value_text(v))).collect::<Vec<_>>().join(", "),
    }
}

pub fn states_text(states: &[State]) -> String {
    if states.is_empty() {
        return "-".into();
    }
    states.iter().map(state_text).collect::<Vec<_>>().join(" | ")
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

pub const TABLE_HEADER: [&str; 4] = ["API code", "expected", "result", "error"];

pub fn error_text(kind: Option<FailKind>, classification: Option<Classification>) -> String {
    match (kind, classification) {
        (None, _) => "No".into(),
        (Some(k), Some(c)) => format!("Yes: {k} ({c})"),
        (Some(k), None) => format!("Yes: {k}"),
    }
}

pub fn campaign_text(r: &CampaignReport) -> String {
    let mut out = format!(
        "suite {}  fault {}  seed {}\ntests run {}  failed {}\n",
        r.config.suite, r.config.fault, r.seed, r.tests_run, r.tests_failed
    );
    if r.failures.is_empty() {
        out += "no failures\n";
    }
    for f in &r.failures {
        out += &format!("\ntest {}: {} commands, shrunk to {}\n", f.test_index, f.original_length, f.shrunk_commands.len());
        out += &format!("  replay: {}\n", CommandSequence::new(f.shrunk_commands.clone()));
        let row = vec![
            f.api_call.clone(),
            states_text(&f.expected),
            f.observed.as_ref().map_or("-".into(), state_text),
            error_text(Some(f.kind), Some(f.classification)),
        ];
        out += &indent(&table(&TABLE_HEADER, &[row]));
        if let Some(d) = &f.detail {
            out += &format!("  note: {d}\n");
        }
        if let Some(s) = &f.spatial {
            out += &format!("  violated: {} at t={} by {}\n", s.invariant, s.observation.time, s.observation.owner);
        }
    }
    if let Some(ms) = r.duration_ms {
        out += &format!("\ntook {ms} ms\n");
    }
    out
}

pub fn replay_text(r: &ReplayReport) -> String {
    let mut out = format!("suite {}  fault {}\n", r.suite, r.fault);
    let rows: Vec<Vec<String>> = r
        .replays
        .iter()
        .map(|e| {
            vec![
                e.api_call.clone(),
                states_text(&e.expected),
                e.observed.as_ref().map_or("-".into(), state_text),
                error_text(e.kind, e.classification),
            ]
        })
        .collect();
    out += &table(&TABLE_HEADER, &rows);
    for (i, e) in r.replays.iter().enumerate() {
        match e.reproduced {
            Some(true) => out += &format!("replay {i}: reproduced\n"),
            Some(false) => {
                let rec = e.recorded_kind.map_or("pass".into(), |k| k.to_string());
                let got = e.kind.map_or("pass".into(), |k| k.to_string());
                out += &format!("replay {i}: NOT reproduced (recorded {rec}, got {got})\n");
            }
            None => {}
        }
    }
    out
}

pub fn trace_text(r: &TraceReport) -> String {
    let mut out = format!("{} observations\n", r.observations);
    for (i, e) in r.invariants.iter().enumerate() {
        match e.first_violation {
            None => out += &format!("[{i}] holds: {}\n", e.invariant),
            Some(v) => out += &format!("[{i}] violated at observation {v}: {}\n", e.invariant),
        }
    }
    out
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("  {l}\n")).collect()
}
