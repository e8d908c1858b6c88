//! TLA-style behavioural specifications: an explicit set of initial states
//! and a list of guarded, named actions.

mod enumerate;
mod export;

pub use enumerate::{correct_behaviours, reachable_states, spec_consistency, Behaviour, SpecWarning};
pub use export::{read_behaviours, write_behaviours};

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Str(String),
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Str(s) => write!(f, "{s:?}"),
        }
    }
}

/// Variable bindings. Ordered so that states compare and print
/// deterministically.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct State(BTreeMap<String, Value>);

impl State {
    pub fn new() -> Self {
        State::default()
    }

    pub fn with(mut self, name: impl Into<String>, value: impl Into<Value>) -> Self {
        self.0.insert(name.into(), value.into());
        self
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.0.get(name)
    }

    pub fn set(&mut self, name: impl Into<String>, value: impl Into<Value>) {
        self.0.insert(name.into(), value.into());
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    fn binds_exactly(&self, vars: &BTreeSet<String>) -> bool {
        self.0.len() == vars.len() && self.0.keys().all(|k| vars.contains(k))
    }
}

impl<K: Into<String>, V: Into<Value>> FromIterator<(K, V)> for State {
    fn from_iter<I: IntoIterator<Item = (K, V)>>(iter: I) -> Self {
        State(iter.into_iter().map(|(k, v)| (k.into(), v.into())).collect())
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        f.write_str("}")
    }
}

type Guard = Arc<dyn Fn(&State) -> bool + Send + Sync>;
type Effect = Arc<dyn Fn(&State) -> State + Send + Sync>;

/// One deterministic branch of a named operation. Several specs with the same
/// name make that operation nondeterministic.
#[derive(Clone)]
pub struct ActionSpec {
    pub name: String,
    guard: Guard,
    effect: Effect,
    /// Identity effects are intended; skip the `NoOpEffect` warning.
    pub allow_noop: bool,
}

impl ActionSpec {
    pub fn new(
        name: impl Into<String>,
        guard: impl Fn(&State) -> bool + Send + Sync + 'static,
        effect: impl Fn(&State) -> State + Send + Sync + 'static,
    ) -> Self {
        ActionSpec {
            name: name.into(),
            guard: Arc::new(guard),
            effect: Arc::new(effect),
            allow_noop: false,
        }
    }

    pub fn allowing_noop(mut self) -> Self {
        self.allow_noop = true;
        self
    }

    pub fn enabled(&self, s: &State) -> bool {
        (self.guard)(s)
    }

    pub fn apply(&self, s: &State) -> State {
        (self.effect)(s)
    }
}

impl fmt::Debug for ActionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ActionSpec")
            .field("name", &self.name)
            .field("allow_noop", &self.allow_noop)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("initial state {state} does not bind exactly the declared variables")]
    InitShape { state: State },
    #[error("action {action} produced {state}, which does not bind exactly the declared variables")]
    EffectShape { action: String, state: State },
    #[error("state cap {cap} exceeded ({visited} distinct states visited)")]
    StateCapExceeded { cap: usize, visited: usize },
}

#[derive(Debug, Clone)]
pub struct StateModel {
    variables: Vec<String>,
    var_set: BTreeSet<String>,
    init: Vec<State>,
    actions: Vec<ActionSpec>,
}

impl StateModel {
    /// Validates that every initial state binds exactly `variables`. The init
    /// set is deduplicated and sorted.
    pub fn new(
        variables: impl IntoIterator<Item = impl Into<String>>,
        init: impl IntoIterator<Item = State>,
        actions: Vec<ActionSpec>,
    ) -> Result<Self, ModelError> {
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        let var_set: BTreeSet<String> = variables.iter().cloned().collect();
        let init: BTreeSet<State> = init.into_iter().collect();
        if let Some(bad) = init.iter().find(|s| !s.binds_exactly(&var_set)) {
            return Err(ModelError::InitShape { state: bad.clone() });
        }
        Ok(StateModel { variables, var_set, init: init.into_iter().collect(), actions })
    }

    /// Compiles an init predicate over finite variable domains into the
    /// explicit state set.
    pub fn from_predicate(
        domains: &[(&str, Vec<Value>)],
        init: impl Fn(&State) -> bool,
        actions: Vec<ActionSpec>,
    ) -> Result<Self, ModelError> {
        let mut states = vec![State::new()];
        for (name, domain) in domains {
            states = states
                .into_iter()
                .flat_map(|s| domain.iter().map(move |v| s.clone().with(*name, v.clone())))
                .collect();
        }
        states.retain(|s| init(s));
        StateModel::new(domains.iter().map(|(n, _)| *n), states, actions)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn init(&self) -> &[State] {
        &self.init
    }

    pub fn actions(&self) -> &[ActionSpec] {
        &self.actions
    }

    pub fn is_init(&self, s: &State) -> bool {
        self.init.binary_search(s).is_ok()
    }

    pub fn binds_variables(&self, s: &State) -> bool {
        s.binds_exactly(&self.var_set)
    }

    /// Distinct action names, sorted.
    pub fn action_names(&self) -> Vec<String> {
        let names: BTreeSet<&str> = self.actions.iter().map(|a| a.name.as_str()).collect();
        names.into_iter().map(str::to_string).collect()
    }

    pub fn declares(&self, op: &str) -> bool {
        self.actions.iter().any(|a| a.name == op)
    }

    pub fn step(&self, s: &State, op: &str) -> StepOutcome {
        let mut declared = false;
        let mut next = BTreeSet::new();
        for action in self.actions.iter().filter(|a| a.name == op) {
            declared = true;
            if action.enabled(s) {
                next.insert(action.apply(s));
            }
        }
        match (declared, next.is_empty()) {
            (false, _) => StepOutcome::UnknownOperation,
            (true, true) => StepOutcome::Disabled,
            (true, false) => StepOutcome::NextStates(next.into_iter().collect()),
        }
    }

    /// Sorted, duplicate-free names with at least one enabled branch at `s`.
    pub fn enabled_actions(&self, s: &State) -> Vec<String> {
        let names: BTreeSet<&str> =
            self.actions.iter().filter(|a| a.enabled(s)).map(|a| a.name.as_str()).collect();
        names.into_iter().map(str::to_string).collect()
    }

    /// Like [`StateModel::step`] but rejects effects that change the
    /// variable set.
    pub(crate) fn checked_step(&self, s: &State, op: &str) -> Result<StepOutcome, ModelError> {
        let outcome = self.step(s, op);
        if let StepOutcome::NextStates(next) = &outcome {
            if let Some(bad) = next.iter().find(|n| !self.binds_variables(n)) {
                return Err(ModelError::EffectShape { action: op.to_string(), state: bad.clone() });
            }
        }
        Ok(outcome)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    /// Sorted, duplicate-free successor states.
    NextStates(Vec<State>),
    Disabled,
    UnknownOperation,
}
