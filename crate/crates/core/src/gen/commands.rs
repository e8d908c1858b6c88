use super::generator::{gen_int_in_range, Generator};
use super::GenError;
use crate::model::{StateModel, StepOutcome, Value};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// One operation issued `delay` ticks after the previous one (or after the
/// start, for the first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Command {
    pub op: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<Value>,
    pub delay: u64,
}

impl Command {
    pub fn new(op: impl Into<String>, delay: u64) -> Self {
        Command { op: op.into(), params: Vec::new(), delay }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CommandSequence {
    pub commands: Vec<Command>,
}

impl CommandSequence {
    pub fn new(commands: Vec<Command>) -> Self {
        CommandSequence { commands }
    }

    /// Builds a sequence from absolute issue times, which must be strictly
    /// increasing and start after tick 0.
    pub fn at_times<'a>(ops: impl IntoIterator<Item = (&'a str, u64)>) -> Self {
        let mut last = 0;
        let commands = ops
            .into_iter()
            .map(|(op, t)| {
                assert!(t > last, "issue times must be strictly increasing and positive");
                let c = Command::new(op, t - last);
                last = t;
                c
            })
            .collect();
        CommandSequence { commands }
    }

    pub fn len(&self) -> usize {
        self.commands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.commands.is_empty()
    }

    /// Absolute issue time of each command (prefix sums of the delays).
    pub fn timestamps(&self) -> Vec<u64> {
        self.commands
            .iter()
            .scan(0u64, |t, c| {
                *t += c.delay;
                Some(*t)
            })
            .collect()
    }

    pub fn is_valid(&self) -> bool {
        !self.commands.is_empty() && self.commands.iter().all(|c| c.delay >= 1)
    }
}

impl fmt::Display for CommandSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, t)) in self.commands.iter().zip(self.timestamps()).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}@{}", c.op, t)?;
        }
        Ok(())
    }
}

/// Relative frequency of each operation in generated sequences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightTable(BTreeMap<String, u32>);

impl WeightTable {
    pub fn new<S: Into<String>>(weights: impl IntoIterator<Item = (S, u32)>) -> Result<Self, GenError> {
        let map: BTreeMap<String, u32> = weights.into_iter().map(|(k, v)| (k.into(), v)).collect();
        if map.is_empty() {
            return Err(GenError::EmptyVocabulary);
        }
        if let Some((op, _)) = map.iter().find(|(_, w)| **w == 0) {
            return Err(GenError::ZeroWeightFor(op.clone()));
        }
        Ok(WeightTable(map))
    }

    /// Every operation with weight 1.
    pub fn uniform<S: Into<String>>(ops: impl IntoIterator<Item = S>) -> Result<Self, GenError> {
        WeightTable::new(ops.into_iter().map(|op| (op, 1)))
    }

    /// Replaces the weights of listed operations. Unknown names are rejected.
    pub fn with_overrides(&self, overrides: &[(String, u32)]) -> Result<Self, GenError> {
        let mut map = self.0.clone();
        for (op, w) in overrides {
            match map.get_mut(op) {
                Some(slot) => *slot = *w,
                None => return Err(GenError::UnknownOperation(op.clone())),
            }
        }
        WeightTable::new(map)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn total(&self) -> u64 {
        self.0.values().map(|&w| w as u64).sum()
    }
}

/// Inter-command delays uniform on 1..=5 ticks.
pub fn default_delays() -> Generator<u64> {
    gen_int_in_range(1, 5).expect("static range").map(|d| d as u64)
}

/// Sequences of length uniform in `1..=max_len`; operations drawn by weight,
/// delays drawn from `delays` (values below 1 are raised to 1).
pub fn gen_commands(vocab: &WeightTable, max_len: usize, delays: Generator<u64>) -> Result<Generator<CommandSequence>, GenError> {
    if max_len == 0 {
        return Err(GenError::InvalidMaxLen);
    }
    let ops: Vec<(String, i64)> = vocab.iter().map(|(op, w)| (op.to_string(), w as i64)).collect();
    let total = vocab.total() as i64;
    Ok(Generator::new(move |rng| {
        let (len, mut rng) = rng.next_in_range(1, max_len as i64);
        let mut commands = Vec::with_capacity(len as usize);
        for _ in 0..len {
            let (mut pick, next) = rng.next_in_range(0, total - 1);
            let op = ops
                .iter()
                .find(|(_, w)| {
                    let hit = pick < *w;
                    pick -= *w;
                    hit
                })
                .map(|(op, _)| op.clone())
                .expect("pick is below the total weight");
            let (delay, next) = delays.generate(next);
            commands.push(Command::new(op, delay.max(1)));
            rng = next;
        }
        (CommandSequence { commands }, rng)
    }))
}

/// Like [`gen_commands`], but walks `model` while generating so that every
/// operation is enabled where it is issued. Operations are drawn by weight
/// from the enabled part of `vocab`; successors of nondeterministic steps are
/// picked uniformly. If nothing in `vocab` is enabled the next operation is
/// drawn from all of `vocab` and the sequence ends there.
pub fn gen_enabled_commands(
    model: &StateModel,
    vocab: &WeightTable,
    max_len: usize,
    delays: Generator<u64>,
) -> Result<Generator<CommandSequence>, GenError> {
    if max_len == 0 {
        return Err(GenError::InvalidMaxLen);
    }
    if model.init().is_empty() {
        return Err(GenError::NoChoices);
    }
    let model = model.clone();
    let vocab = vocab.clone();
    Ok(Generator::new(move |rng| {
        let (len, rng) = rng.next_in_range(1, max_len as i64);
        let (start, mut rng) = rng.next_in_range(0, model.init().len() as i64 - 1);
        let mut state = model.init()[start as usize].clone();
        let mut commands = Vec::with_capacity(len as usize);
        for _ in 0..len {
            let enabled = model.enabled_actions(&state);
            let mut choices: Vec<(&str, u32)> = vocab.iter().filter(|(op, _)| enabled.iter().any(|e| e == op)).collect();
            let stuck = choices.is_empty();
            if stuck {
                choices = vocab.iter().collect();
            }
            let total: i64 = choices.iter().map(|&(_, w)| w as i64).sum();
            let (mut pick, next) = rng.next_in_range(0, total - 1);
            let op = choices
                .iter()
                .find(|&&(_, w)| {
                    let hit = pick < w as i64;
                    pick -= w as i64;
                    hit
                })
                .map(|&(op, _)| op.to_string())
                .expect("pick is below the total weight");
            let (delay, next) = delays.generate(next);
            rng = next;
            let outcome = model.step(&state, &op);
            commands.push(Command::new(op, delay.max(1)));
            match outcome {
                StepOutcome::NextStates(succ) if !stuck => {
                    let (i, next) = rng.next_in_range(0, succ.len() as i64 - 1);
                    rng = next;
                    state = succ[i as usize].clone();
                }
                _ => break,
            }
        }
        (CommandSequence { commands }, rng)
    }))
}
