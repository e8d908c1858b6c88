//! A robot arm that moves between named waypoints on a 2D floor plan.
//!
//! Moves complete in simulated time: the deferred result of `moveTo<P>` is
//! delivered once the harness advances the clock past the issue tick plus
//! the configured motion duration.

use crate::conformance::{Abstraction, Completer, Deferred, RawObservation, SutAdapter, SystemSpec};
use crate::model::{ActionSpec, State, StateModel, Value};
use crate::stl::{Invariant, OccupancyFact, Rect, TimeWindow};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

pub const INITIALISE_POSITION: &str = "initialisePosition";
pub const MOVE_PREFIX: &str = "moveTo";
pub const ARM_OWNER: &str = "arm";
pub const HOME_POSITION: &str = "Y";
/// Reported by `initialisePosition` (and after reset) under `wrongInit`.
pub const WRONG_INIT_POSITION: &str = "K";
/// Reported by every move under `wrongMove`.
pub const WRONG_MOVE_POSITION: &str = "M";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RobotFault {
    #[default]
    None,
    WrongInit,
    WrongMove,
}

impl FromStr for RobotFault {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(RobotFault::None),
            "wrongInit" => Ok(RobotFault::WrongInit),
            "wrongMove" => Ok(RobotFault::WrongMove),
            other => Err(format!("unknown robot fault '{other}' (expected none, wrongInit or wrongMove)")),
        }
    }
}

impl fmt::Display for RobotFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RobotFault::None => "none",
            RobotFault::WrongInit => "wrongInit",
            RobotFault::WrongMove => "wrongMove",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Waypoint {
    pub name: String,
    pub x: i64,
    pub y: i64,
    #[serde(with = "corners")]
    pub footprint: Rect,
}

impl Waypoint {
    pub fn new(name: &str, x: i64, y: i64, footprint: Rect) -> Self {
        Waypoint { name: name.to_string(), x, y, footprint: footprint.normalized() }
    }
}

/// Rectangles written as `[x1, y1, x2, y2]` in config files.
mod corners {
    use crate::stl::Rect;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &Rect, s: S) -> Result<S::Ok, S::Error> {
        [r.x1, r.y1, r.x2, r.y2].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rect, D::Error> {
        let [x1, y1, x2, y2] = <[i64; 4]>::deserialize(d)?;
        Ok(Rect::new(x1, y1, x2, y2))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotConfig {
    pub waypoints: Vec<Waypoint>,
    /// Where the arm is after reset.
    #[serde(default = "default_home")]
    pub home: String,
    /// Init of the model; defaults to `home`.
    #[serde(default)]
    pub model_init: Option<String>,
    #[serde(default = "default_motion_ticks")]
    pub motion_ticks: u64,
    #[serde(with = "corners")]
    pub workspace: Rect,
    #[serde(default)]
    pub fault: RobotFault,
}

fn default_home() -> String {
    HOME_POSITION.to_string()
}

fn default_motion_ticks() -> u64 {
    3
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RobotConfigError {
    #[error("invalid robot config: {0}")]
    Syntax(String),
    #[error("waypoint {0} is declared twice")]
    DuplicateWaypoint(String),
    #[error("waypoint {0} is not declared")]
    UnknownWaypoint(String),
}

impl Default for RobotConfig {
    fn default() -> Self {
        let wp = |name, x, y| Waypoint::new(name, x, y, Rect::new(x - 5, y - 5, x + 5, y + 5));
        RobotConfig {
            waypoints: vec![wp("Y", 10, 10), wp("Q", 50, 10), wp("R", 90, 10), wp("K", 10, 90), wp("M", 90, 90)],
            home: default_home(),
            model_init: None,
            motion_ticks: default_motion_ticks(),
            workspace: Rect::new(0, 0, 100, 100),
            fault: RobotFault::None,
        }
    }
}

impl RobotConfig {
    pub fn from_toml(text: &str) -> Result<Self, RobotConfigError> {
        let cfg: RobotConfig = toml::from_str(text).map_err(|e| RobotConfigError::Syntax(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_fault(mut self, fault: RobotFault) -> Self {
        self.fault = fault;
        self
    }

    pub fn with_home(mut self, home: &str) -> Self {
        self.home = home.to_string();
        self
    }

    pub fn validate(&self) -> Result<(), RobotConfigError> {
        let mut seen = std::collections::BTreeSet::new();
        for w in &self.waypoints {
            if !seen.insert(w.name.as_str()) {
                return Err(RobotConfigError::DuplicateWaypoint(w.name.clone()));
            }
        }
        let mut required = vec![HOME_POSITION, self.home.as_str()];
        required.extend(self.model_init.as_deref());
        match self.fault {
            RobotFault::None => {}
            RobotFault::WrongInit => required.push(WRONG_INIT_POSITION),
            RobotFault::WrongMove => required.push(WRONG_MOVE_POSITION),
        }
        match required.into_iter().find(|name| !seen.contains(name)) {
            Some(missing) => Err(RobotConfigError::UnknownWaypoint(missing.to_string())),
            None => Ok(()),
        }
    }

    pub fn waypoint(&self, name: &str) -> Option<&Waypoint> {
        self.waypoints.iter().find(|w| w.name == name)
    }

    pub fn model_init(&self) -> &str {
        self.model_init.as_deref().unwrap_or(&self.home)
    }

    pub fn vocabulary(&self) -> Vec<String> {
        std::iter::once(INITIALISE_POSITION.to_string())
            .chain(self.waypoints.iter().map(|w| format!("{MOVE_PREFIX}{}", w.name)))
            .collect()
    }
}

struct PendingMove {
    due: u64,
    target: String,
    completer: Completer<RawObservation>,
}

pub struct RobotSim {
    config: RobotConfig,
    position: String,
    clock: u64,
    pending: Option<PendingMove>,
}

impl RobotSim {
    pub fn new(config: RobotConfig) -> Result<Self, RobotConfigError> {
        config.validate()?;
        let position = config.home.clone();
        Ok(RobotSim { config, position, clock: 0, pending: None })
    }

    pub fn position(&self) -> &str {
        &self.position
    }

    fn observation(&self, clock: u64) -> RawObservation {
        let raw = RawObservation::at(clock).with("position", self.position.as_str());
        match self.config.waypoint(&self.position) {
            Some(w) => raw.with_fact(OccupancyFact::new(ARM_OWNER, TimeWindow::instant(clock as i64), w.footprint)),
            None => raw,
        }
    }

    fn settle(&mut self) {
        if self.pending.as_ref().is_some_and(|p| p.due <= self.clock) {
            let PendingMove { due, target, completer } = self.pending.take().unwrap();
            self.position = target;
            completer.succeed(self.observation(due));
        }
    }
}

impl SutAdapter for RobotSim {
    fn vocabulary(&self) -> Vec<String> {
        self.config.vocabulary()
    }

    fn reset(&mut self) -> Deferred<RawObservation> {
        self.pending = None;
        self.clock = 0;
        self.position = match self.config.fault {
            RobotFault::WrongInit => WRONG_INIT_POSITION.to_string(),
            _ => self.config.home.clone(),
        };
        Deferred::ready(self.observation(0))
    }

    fn apply(&mut self, op: &str, _params: &[Value], at: u64) -> Deferred<RawObservation> {
        self.clock = self.clock.max(at);
        if op == INITIALISE_POSITION {
            self.position = match self.config.fault {
                RobotFault::WrongInit => WRONG_INIT_POSITION,
                _ => HOME_POSITION,
            }
            .to_string();
            return Deferred::ready(self.observation(self.clock));
        }
        let Some(name) = op.strip_prefix(MOVE_PREFIX) else {
            return Deferred::failed(format!("unknown operation {op}"));
        };
        if self.config.waypoint(name).is_none() {
            return Deferred::failed(format!("UnknownWaypoint: {name}"));
        }
        let target = match self.config.fault {
            RobotFault::WrongMove => WRONG_MOVE_POSITION.to_string(),
            _ => name.to_string(),
        };
        let (deferred, completer) = Deferred::pending();
        self.pending = Some(PendingMove { due: self.clock + self.config.motion_ticks, target, completer });
        self.settle();
        deferred
    }

    fn advance_clock(&mut self, now: u64) {
        self.clock = self.clock.max(now);
        self.settle();
    }
}

fn position_is(s: &State, name: &str) -> bool {
    matches!(s.get("position"), Some(Value::Str(p)) if p == name)
}

/// The reference model, abstraction and spatial invariants for a waypoint
/// map.
///
/// `initialisePosition` is always enabled and sends the arm home;
/// `moveTo<P>` is enabled away from `P`. For every waypoint whose footprint
/// leaves the workspace there is an invariant forbidding the arm to occupy
/// that footprint.
pub fn robot_model(config: &RobotConfig) -> SystemSpec {
    let mut actions = vec![
        ActionSpec::new(INITIALISE_POSITION, |_| true, |s| s.clone().with("position", HOME_POSITION)).allowing_noop(),
    ];
    for w in &config.waypoints {
        let (guard_name, dest) = (w.name.clone(), w.name.clone());
        actions.push(ActionSpec::new(
            format!("{MOVE_PREFIX}{}", w.name),
            move |s| !position_is(s, &guard_name),
            move |s| s.clone().with("position", dest.as_str()),
        ));
    }
    let init = State::new().with("position", config.model_init());
    let model = StateModel::new(["position"], [init], actions).expect("robot model is well formed");
    let invariants = config
        .waypoints
        .iter()
        .filter(|w| !config.workspace.contains_rect(&w.footprint))
        .map(|w| {
            Invariant::not(Invariant::and([
                Invariant::TimeInterval(TimeWindow::new(0, i64::MAX)),
                Invariant::owner(ARM_OWNER),
                Invariant::OccupyBox(w.footprint),
            ]))
        })
        .collect();
    SystemSpec { model, abstraction: Abstraction::fields(&["position"]), invariants }
}
