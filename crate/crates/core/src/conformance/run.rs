use super::adapter::SutAdapter;
use super::check::{check_against, classify, CheckOptions, Classification, FailKind, SystemSpec, Verdict, Witness};
use crate::gen::{shrink_sequence, CommandSequence, Generator, Rng, Seed};
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyConfig {
    pub num_tests: usize,
    pub seed: Seed,
    pub check: CheckOptions,
    /// Independent adapters run in parallel; the report does not depend on it.
    pub workers: usize,
    /// Stop at the first failing test instead of running all `num_tests`.
    pub stop_on_first_failure: bool,
}

impl PropertyConfig {
    pub fn new(num_tests: usize, seed: Seed) -> Self {
        PropertyConfig { num_tests, seed, check: CheckOptions::default(), workers: 1, stop_on_first_failure: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConformanceError {
    #[error("the number of tests must be at least 1")]
    NoTests,
    #[error("the number of workers must be at least 1")]
    NoWorkers,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FailureRecord {
    pub test_index: usize,
    pub kind: FailKind,
    pub classification: Classification,
    pub original: Witness,
    pub shrunk: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub seed: Seed,
    pub tests_run: usize,
    pub tests_failed: usize,
    /// Ordered by test index.
    pub failures: Vec<FailureRecord>,
    pub wall_time: Duration,
}

/// Shrinks a failing sequence while it keeps failing with the same kind.
pub fn shrink_failure(
    spec: &SystemSpec,
    adapter: &mut dyn SutAdapter,
    seq: &CommandSequence,
    kind: FailKind,
    opts: &CheckOptions,
) -> Option<(CommandSequence, Verdict)> {
    let shrunk = shrink_sequence(seq, |candidate| check_against(spec, adapter, candidate, opts).kind() == Some(kind)).ok()?;
    let verdict = check_against(spec, adapter, &shrunk, opts);
    Some((shrunk, verdict))
}

fn run_one(
    spec: &SystemSpec,
    adapter: &mut dyn SutAdapter,
    seq: &CommandSequence,
    test_index: usize,
    opts: &CheckOptions,
) -> Option<FailureRecord> {
    let verdict = check_against(spec, adapter, seq, opts);
    let classification = classify(&verdict).ok()?;
    let Verdict::Fail(original) = verdict else { unreachable!() };
    let shrunk = match shrink_failure(spec, adapter, seq, original.kind, opts) {
        Some((_, Verdict::Fail(f))) if f.kind == original.kind => f.witness,
        // A nondeterministic SUT stopped failing; keep the original.
        _ => original.witness.clone(),
    };
    Some(FailureRecord { test_index, kind: original.kind, classification, original: original.witness, shrunk })
}

/// Generates `num_tests` sequences, one independent split of the seed per
/// test, checks each, and shrinks every failure.
pub fn run_property(
    spec: &SystemSpec,
    make_adapter: &(dyn Fn() -> Box<dyn SutAdapter> + Sync),
    commands: &Generator<CommandSequence>,
    cfg: &PropertyConfig,
) -> Result<RunReport, ConformanceError> {
    if cfg.num_tests == 0 {
        return Err(ConformanceError::NoTests);
    }
    if cfg.workers == 0 {
        return Err(ConformanceError::NoWorkers);
    }
    let started = Instant::now();
    let (rngs, _) = Rng::from_seed(cfg.seed).split_n(cfg.num_tests);
    let first_failure = AtomicUsize::new(usize::MAX);
    let failures = Mutex::new(Vec::new());
    let workers = cfg.workers.min(cfg.num_tests);

    let work = |worker: usize| {
        let mut adapter = make_adapter();
        for index in (worker..cfg.num_tests).step_by(workers) {
            if cfg.stop_on_first_failure && index > first_failure.load(Ordering::SeqCst) {
                break;
            }
            let (seq, _) = commands.generate(rngs[index]);
            if let Some(record) = run_one(spec, adapter.as_mut(), &seq, index, &cfg.check) {
                first_failure.fetch_min(index, Ordering::SeqCst);
                failures.lock().unwrap().push(record);
            }
        }
    };
    if workers == 1 {
        work(0);
    } else {
        std::thread::scope(|scope| {
            for w in 0..workers {
                let work = &work;
                scope.spawn(move || work(w));
            }
        });
    }

    let mut failures = failures.into_inner().unwrap();
    failures.sort_by_key(|f| f.test_index);
    let tests_run = if cfg.stop_on_first_failure && !failures.is_empty() {
        failures.truncate(1);
        failures[0].test_index + 1
    } else {
        cfg.num_tests
    };
    Ok(RunReport {
        seed: cfg.seed,
        tests_run,
        tests_failed: failures.len(),
        failures,
        wall_time: started.elapsed(),
    })
}
