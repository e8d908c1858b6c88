use super::deferred::Deferred;
use crate::model::{State, Value};
use crate::stl::OccupancyFact;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// What a system under test reports after `reset` or an operation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawObservation {
    /// SUT-specific result fields, read by the [`Abstraction`].
    pub values: BTreeMap<String, Value>,
    /// Spatial footprint claimed by the SUT's components.
    #[serde(default)]
    pub occupancy: Vec<OccupancyFact>,
    /// The SUT's local clock, in ticks.
    pub clock: u64,
}

impl RawObservation {
    pub fn at(clock: u64) -> Self {
        RawObservation { clock, ..Default::default() }
    }

    pub fn with(mut self, name: impl Into<String>, value: impl Into<Value>) -> Self {
        self.values.insert(name.into(), value.into());
        self
    }

    pub fn with_fact(mut self, fact: OccupancyFact) -> Self {
        self.occupancy.push(fact);
        self
    }
}

/// The harness's view of a system under test.
///
/// The harness never calls `apply` while a previous deferred is still
/// outstanding.
pub trait SutAdapter: Send {
    fn vocabulary(&self) -> Vec<String>;

    fn reset(&mut self) -> Deferred<RawObservation>;

    fn apply(&mut self, op: &str, params: &[Value], at: u64) -> Deferred<RawObservation>;

    /// Moves simulated time forward. The harness calls this with increasing
    /// ticks while it waits for an operation whose completion is scheduled in
    /// simulated time. Adapters for real systems can ignore it.
    fn advance_clock(&mut self, _now: u64) {}
}

impl<A: SutAdapter + ?Sized> SutAdapter for Box<A> {
    fn vocabulary(&self) -> Vec<String> {
        (**self).vocabulary()
    }

    fn reset(&mut self) -> Deferred<RawObservation> {
        (**self).reset()
    }

    fn apply(&mut self, op: &str, params: &[Value], at: u64) -> Deferred<RawObservation> {
        (**self).apply(op, params, at)
    }

    fn advance_clock(&mut self, now: u64) {
        (**self).advance_clock(now)
    }
}

/// Maps raw SUT observations into model states.
#[derive(Clone)]
pub struct Abstraction(Arc<dyn Fn(&RawObservation) -> State + Send + Sync>);

impl Abstraction {
    pub fn new(f: impl Fn(&RawObservation) -> State + Send + Sync + 'static) -> Self {
        Abstraction(Arc::new(f))
    }

    /// Copies the named fields; a missing field is bound to the empty string.
    pub fn fields(names: &[&str]) -> Self {
        let names: Vec<String> = names.iter().map(|n| n.to_string()).collect();
        Abstraction::new(move |raw| {
            names
                .iter()
                .map(|n| (n.clone(), raw.values.get(n).cloned().unwrap_or_else(|| Value::from(""))))
                .collect()
        })
    }

    pub fn apply(&self, raw: &RawObservation) -> State {
        (self.0)(raw)
    }
}

impl fmt::Debug for Abstraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Abstraction(..)")
    }
}
