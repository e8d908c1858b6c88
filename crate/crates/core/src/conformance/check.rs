//! Running one command sequence against a SUT and the model side by side.

use super::adapter::{Abstraction, RawObservation, SutAdapter};
use super::deferred::{Deferred, DeferredError};
use crate::gen::CommandSequence;
use crate::model::{State, StateModel, StepOutcome};
use crate::stl::{Invariant, Observation};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::Duration;
use thiserror::Error;

/// Everything the harness checks a SUT against.
#[derive(Debug, Clone)]
pub struct SystemSpec {
    pub model: StateModel,
    pub abstraction: Abstraction,
    pub invariants: Vec<Invariant>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Wall-clock limit for each deferred completion.
    pub timeout: Duration,
    /// How many simulated ticks past an operation's issue time the harness
    /// advances the adapter clock before it starts waiting on wall time.
    pub settle_ticks: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { timeout: Duration::from_secs(5), settle_ticks: 1_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FailKind {
    SutMismatch,
    InitMismatch,
    DisabledAction,
    UnknownOperation,
    SpatialViolation,
    Timeout,
    SutError,
}

impl fmt::Display for FailKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpatialWitness {
    pub invariant: Invariant,
    pub observation: Observation,
}

/// Enough to replay and explain a failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Witness {
    pub sequence: CommandSequence,
    /// Index of the failing command; `None` when the failure is in the
    /// initial observation.
    pub fail_index: Option<usize>,
    /// Model states the SUT was allowed to be in.
    pub expected: Vec<State>,
    pub observed: Option<State>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spatial: Option<SpatialWitness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// For init mismatches: whether the rest of the run conforms when the
    /// observed initial state is taken as the start. If it does, the SUT
    /// follows the transition relation and Init is the likelier culprit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conforms_from_observed: Option<bool>,
}

impl Witness {
    /// Operation at the failure point, or `<reset>` for the initial state.
    pub fn api_call(&self) -> &str {
        match self.fail_index {
            Some(i) => &self.sequence.commands[i].op,
            None => "<reset>",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub kind: FailKind,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Verdict {
    Pass,
    Fail(Failure),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn kind(&self) -> Option<FailKind> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(f) => Some(f.kind),
        }
    }

    pub fn failure(&self) -> Option<&Failure> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(f) => Some(f),
        }
    }
}

/// Who is probably wrong.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Classification {
    #[serde(rename = "suspect: specification")]
    Specification,
    #[serde(rename = "suspect: system under test (or spec - engineer judgment)")]
    SystemUnderTest,
    #[serde(rename = "suspect: system under test spatial behaviour")]
    SpatialBehaviour,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Specification => "suspect: specification",
            Classification::SystemUnderTest => "suspect: system under test (or spec - engineer judgment)",
            Classification::SpatialBehaviour => "suspect: system under test spatial behaviour",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("verdict is a pass, not a failure")]
pub struct NotAFailure;

pub fn classify(verdict: &Verdict) -> Result<Classification, NotAFailure> {
    let failure = verdict.failure().ok_or(NotAFailure)?;
    Ok(match failure.kind {
        FailKind::DisabledAction | FailKind::UnknownOperation => Classification::Specification,
        FailKind::InitMismatch if failure.witness.conforms_from_observed == Some(true) => Classification::Specification,
        FailKind::InitMismatch | FailKind::SutMismatch | FailKind::SutError | FailKind::Timeout => {
            Classification::SystemUnderTest
        }
        FailKind::SpatialViolation => Classification::SpatialBehaviour,
    })
}

struct Run<'a> {
    seq: &'a CommandSequence,
}

impl Run<'_> {
    fn fail(&self, kind: FailKind, fail_index: Option<usize>, expected: &BTreeSet<State>) -> Failure {
        Failure {
            kind,
            witness: Witness {
                sequence: self.seq.clone(),
                fail_index,
                expected: expected.iter().cloned().collect(),
                observed: None,
                spatial: None,
                detail: None,
                conforms_from_observed: None,
            },
        }
    }
}

fn await_result(deferred: Deferred<RawObservation>, opts: &CheckOptions) -> Result<RawObservation, (FailKind, String)> {
    deferred.wait(opts.timeout).map_err(|e| match e {
        DeferredError::Timeout(_) => (FailKind::Timeout, e.to_string()),
        DeferredError::Failed(msg) => (FailKind::SutError, msg),
    })
}

/// One observation per owner, at tick `time`, from the SUT's reported facts.
fn observations_at(raw: &RawObservation, time: i64) -> Vec<Observation> {
    let mut by_owner: BTreeMap<&str, Vec<_>> = BTreeMap::new();
    for fact in &raw.occupancy {
        by_owner.entry(fact.owner.as_str()).or_default().push(fact.area);
    }
    by_owner.into_iter().map(|(owner, boxes)| Observation::new(time, owner, boxes)).collect()
}

/// Resets the SUT, checks its initial state against Init, then issues every
/// command at its timestamp and checks each result against the model's
/// successor states and the spatial invariants.
///
/// The model side is tracked as the set of states consistent with everything
/// observed so far, so nondeterministic models do not raise false alarms.
pub fn check_against(spec: &SystemSpec, adapter: &mut dyn SutAdapter, seq: &CommandSequence, opts: &CheckOptions) -> Verdict {
    let run = Run { seq };
    let init: BTreeSet<State> = spec.model.init().iter().cloned().collect();
    let raw = match await_result(adapter.reset(), opts) {
        Ok(raw) => raw,
        Err((kind, msg)) => {
            let mut f = run.fail(kind, None, &init);
            f.witness.detail = Some(format!("reset: {msg}"));
            return Verdict::Fail(f);
        }
    };
    let s0 = spec.abstraction.apply(&raw);
    if !init.contains(&s0) {
        let mut f = run.fail(FailKind::InitMismatch, None, &init);
        f.witness.conforms_from_observed = Some(run_commands(spec, adapter, &run, opts, s0.clone()).is_pass());
        f.witness.observed = Some(s0);
        return Verdict::Fail(f);
    }
    run_commands(spec, adapter, &run, opts, s0)
}

fn run_commands(spec: &SystemSpec, adapter: &mut dyn SutAdapter, run: &Run<'_>, opts: &CheckOptions, s0: State) -> Verdict {
    let seq = run.seq;
    let mut consistent = BTreeSet::from([s0]);
    for ((index, cmd), at) in seq.commands.iter().enumerate().zip(seq.timestamps()) {
        let mut candidates = BTreeSet::new();
        let mut declared = true;
        for s in &consistent {
            match spec.model.step(s, &cmd.op) {
                StepOutcome::NextStates(next) => candidates.extend(next),
                StepOutcome::Disabled => {}
                StepOutcome::UnknownOperation => declared = false,
            }
        }
        if !declared {
            return Verdict::Fail(run.fail(FailKind::UnknownOperation, Some(index), &consistent));
        }
        if candidates.is_empty() {
            let mut f = run.fail(FailKind::DisabledAction, Some(index), &consistent);
            f.witness.detail = Some("specification inconsistency - operation not enabled in model".to_string());
            return Verdict::Fail(f);
        }

        let deferred = adapter.apply(&cmd.op, &cmd.params, at);
        for tick in at..=at.saturating_add(opts.settle_ticks) {
            if deferred.is_complete() {
                break;
            }
            adapter.advance_clock(tick);
        }
        let raw = match await_result(deferred, opts) {
            Ok(raw) => raw,
            Err((kind, msg)) => {
                let mut f = run.fail(kind, Some(index), &candidates);
                f.witness.detail = Some(msg);
                return Verdict::Fail(f);
            }
        };
        let observed = spec.abstraction.apply(&raw);
        if !candidates.contains(&observed) {
            let mut f = run.fail(FailKind::SutMismatch, Some(index), &candidates);
            f.witness.detail = Some(
                "observed state is not a model successor: either the system under test is wrong \
                 or the specification is"
                    .to_string(),
            );
            f.witness.observed = Some(observed);
            return Verdict::Fail(f);
        }
        for obs in observations_at(&raw, at as i64) {
            if let Some(inv) = spec.invariants.iter().find(|inv| !inv.eval(&obs)) {
                let mut f = run.fail(FailKind::SpatialViolation, Some(index), &candidates);
                f.witness.observed = Some(observed);
                f.witness.spatial = Some(SpatialWitness { invariant: inv.clone(), observation: obs });
                return Verdict::Fail(f);
            }
        }
        consistent = BTreeSet::from([observed]);
    }
    Verdict::Pass
}
