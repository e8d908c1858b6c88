//! Bounded behaviour enumeration and reachable-state analysis.

use super::{ModelError, State, StateModel, StepOutcome};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, VecDeque};

/// A path through the model: `states[i + 1]` follows from `states[i]` by
/// `actions[i]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Behaviour {
    pub actions: Vec<String>,
    pub states: Vec<State>,
}

impl Behaviour {
    pub fn init(&self) -> &State {
        &self.states[0]
    }

    pub fn last(&self) -> &State {
        self.states.last().expect("behaviour has at least one state")
    }
}

struct Visited {
    seen: BTreeSet<State>,
    cap: usize,
}

impl Visited {
    fn new(cap: usize) -> Self {
        Visited { seen: BTreeSet::new(), cap }
    }

    fn insert(&mut self, s: &State) -> Result<bool, ModelError> {
        if self.seen.contains(s) {
            return Ok(false);
        }
        self.seen.insert(s.clone());
        if self.seen.len() > self.cap {
            return Err(ModelError::StateCapExceeded { cap: self.cap, visited: self.seen.len() });
        }
        Ok(true)
    }
}

/// Every behaviour with at most `depth` steps, prefixes included, ordered by
/// action sequence and then by state sequence.
pub fn correct_behaviours(model: &StateModel, depth: usize, state_cap: usize) -> Result<Vec<Behaviour>, ModelError> {
    let names = model.action_names();
    let mut visited = Visited::new(state_cap);
    let mut frontier = Vec::with_capacity(model.init().len());
    for s in model.init() {
        visited.insert(s)?;
        frontier.push(Behaviour { actions: vec![], states: vec![s.clone()] });
    }
    let mut all = frontier.clone();
    for _ in 0..depth {
        let mut next_frontier = Vec::new();
        for b in &frontier {
            for name in &names {
                let StepOutcome::NextStates(next) = model.checked_step(b.last(), name)? else {
                    continue;
                };
                for s in next {
                    visited.insert(&s)?;
                    let mut extended = b.clone();
                    extended.actions.push(name.clone());
                    extended.states.push(s);
                    next_frontier.push(extended);
                }
            }
        }
        if next_frontier.is_empty() {
            break;
        }
        all.extend(next_frontier.iter().cloned());
        frontier = next_frontier;
    }
    all.sort();
    Ok(all)
}

/// All states reachable from Init, sorted.
pub fn reachable_states(model: &StateModel, state_cap: usize) -> Result<Vec<State>, ModelError> {
    let names = model.action_names();
    let mut visited = Visited::new(state_cap);
    let mut queue = VecDeque::new();
    for s in model.init() {
        if visited.insert(s)? {
            queue.push_back(s.clone());
        }
    }
    while let Some(s) = queue.pop_front() {
        for name in &names {
            if let StepOutcome::NextStates(next) = model.checked_step(&s, name)? {
                for n in next {
                    if visited.insert(&n)? {
                        queue.push_back(n);
                    }
                }
            }
        }
    }
    Ok(visited.seen.into_iter().collect())
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpecWarning {
    EmptyInit,
    /// No reachable state enables any branch of this action.
    NeverEnabled(String),
    /// Wherever the action is enabled it leaves the state unchanged.
    NoOpEffect(String),
}

/// Static sanity checks over the reachable state space: empty init sets,
/// actions that can never fire, and actions that never change anything.
pub fn spec_consistency(model: &StateModel, state_cap: usize) -> Result<Vec<SpecWarning>, ModelError> {
    let mut warnings = Vec::new();
    if model.init().is_empty() {
        warnings.push(SpecWarning::EmptyInit);
    }
    let reachable = reachable_states(model, state_cap)?;
    let mut never = Vec::new();
    let mut noop = Vec::new();
    for name in model.action_names() {
        let branches: Vec<_> = model.actions().iter().filter(|a| a.name == name).collect();
        let mut enabled_somewhere = false;
        let mut changes_something = false;
        for s in &reachable {
            for a in branches.iter().filter(|a| a.enabled(s)) {
                enabled_somewhere = true;
                changes_something |= a.apply(s) != *s;
            }
        }
        if !enabled_somewhere {
            if !model.init().is_empty() {
                never.push(SpecWarning::NeverEnabled(name));
            }
        } else if !changes_something && !branches.iter().all(|a| a.allow_noop) {
            noop.push(SpecWarning::NoOpEffect(name));
        }
    }
    warnings.extend(never);
    warnings.extend(noop);
    Ok(warnings)
}
