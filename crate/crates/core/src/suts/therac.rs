//! Therac-25-style mode selector with the photon/cursor-up/electron race.
//!
//! With the sequence bug on, selecting electron mode within eight ticks of a
//! photon selection, with a cursor-up in between and no other selection in
//! between, switches the mode but leaves the beam at photon strength.

use crate::conformance::{Abstraction, Deferred, RawObservation, SutAdapter, SystemSpec};
use crate::gen::WeightTable;
use crate::model::{ActionSpec, State, StateModel, Value};
use std::fmt;
use std::str::FromStr;

pub const CURSOR_UP: &str = "CursorUp";
pub const SELECT_PHOTON: &str = "Select25MevPhotonMode";
pub const SELECT_ELECTRON: &str = "Select25MevElectronMode";
pub const OTHER_OPERATION: &str = "OtherKindOfOperation";

/// Ticks allowed between the photon and the electron selection.
pub const TRIGGER_WINDOW: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheracOp {
    CursorUp,
    SelectPhoton,
    SelectElectron,
    Other,
}

impl TheracOp {
    pub const ALL: [TheracOp; 4] = [TheracOp::CursorUp, TheracOp::SelectPhoton, TheracOp::SelectElectron, TheracOp::Other];

    pub fn name(self) -> &'static str {
        match self {
            TheracOp::CursorUp => CURSOR_UP,
            TheracOp::SelectPhoton => SELECT_PHOTON,
            TheracOp::SelectElectron => SELECT_ELECTRON,
            TheracOp::Other => OTHER_OPERATION,
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        TheracOp::ALL.into_iter().find(|op| op.name() == name)
    }

    fn is_selection(self) -> bool {
        matches!(self, TheracOp::SelectPhoton | TheracOp::SelectElectron)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    None,
    Photon25,
    Electron25,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Beam {
    Off,
    PhotonLevel,
    ElectronLevel,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::None => "None",
            Mode::Photon25 => "Photon25",
            Mode::Electron25 => "Electron25",
        }
    }

    /// The beam strength that belongs to this mode.
    pub fn beam(self) -> Beam {
        match self {
            Mode::None => Beam::Off,
            Mode::Photon25 => Beam::PhotonLevel,
            Mode::Electron25 => Beam::ElectronLevel,
        }
    }
}

impl Beam {
    pub fn as_str(self) -> &'static str {
        match self {
            Beam::Off => "Off",
            Beam::PhotonLevel => "PhotonLevel",
            Beam::ElectronLevel => "ElectronLevel",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum TheracFault {
    #[default]
    None,
    SequenceBug,
}

impl FromStr for TheracFault {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(TheracFault::None),
            "sequenceBug" => Ok(TheracFault::SequenceBug),
            other => Err(format!("unknown therac25 fault '{other}' (expected none or sequenceBug)")),
        }
    }
}

impl fmt::Display for TheracFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheracFault::None => "none",
            TheracFault::SequenceBug => "sequenceBug",
        })
    }
}

#[derive(Debug, Clone)]
pub struct TheracSim {
    mode: Mode,
    beam: Beam,
    history: Vec<(TheracOp, u64)>,
    fault: TheracFault,
}

impl TheracSim {
    pub fn new(fault: TheracFault) -> Self {
        TheracSim { mode: Mode::None, beam: Beam::Off, history: Vec::new(), fault }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn beam(&self) -> Beam {
        self.beam
    }

    fn reset_state(&mut self) {
        self.mode = Mode::None;
        self.beam = Beam::Off;
        self.history.clear();
    }

    /// Whether an electron selection at `at` completes the trigger pattern.
    fn triggers(&self, at: u64) -> bool {
        let Some(last_selection) = self.history.iter().rposition(|(op, _)| op.is_selection()) else {
            return false;
        };
        let (op, t1) = self.history[last_selection];
        op == TheracOp::SelectPhoton
            && at.saturating_sub(t1) <= TRIGGER_WINDOW
            && self.history[last_selection + 1..].iter().any(|(op, _)| *op == TheracOp::CursorUp)
    }

    pub fn step(&mut self, op: TheracOp, at: u64) {
        match op {
            TheracOp::SelectPhoton => {
                self.mode = Mode::Photon25;
                self.beam = Beam::PhotonLevel;
            }
            TheracOp::SelectElectron => {
                let stale = self.fault == TheracFault::SequenceBug && self.triggers(at);
                self.mode = Mode::Electron25;
                self.beam = if stale { Beam::PhotonLevel } else { Beam::ElectronLevel };
            }
            TheracOp::CursorUp | TheracOp::Other => {}
        }
        self.history.push((op, at));
    }

    fn observation(&self, clock: u64) -> RawObservation {
        RawObservation::at(clock).with("mode", self.mode.as_str()).with("beam", self.beam.as_str())
    }
}

impl SutAdapter for TheracSim {
    fn vocabulary(&self) -> Vec<String> {
        TheracOp::ALL.iter().map(|op| op.name().to_string()).collect()
    }

    fn reset(&mut self) -> Deferred<RawObservation> {
        self.reset_state();
        Deferred::ready(self.observation(0))
    }

    fn apply(&mut self, op: &str, _params: &[Value], at: u64) -> Deferred<RawObservation> {
        match TheracOp::from_name(op) {
            Some(op) => {
                self.step(op, at);
                Deferred::ready(self.observation(at))
            }
            None => Deferred::failed(format!("unknown operation {op}")),
        }
    }
}

fn set_mode(mode: Mode) -> impl Fn(&State) -> State + Send + Sync {
    move |s| s.clone().with("mode", mode.as_str()).with("beam", mode.beam().as_str())
}

/// Model: selections set mode and matching beam; cursor-up and other
/// operations change nothing. All four are always enabled.
pub fn therac_model() -> (StateModel, Abstraction) {
    let always = |_: &State| true;
    let actions = vec![
        ActionSpec::new(CURSOR_UP, always, |s| s.clone()).allowing_noop(),
        ActionSpec::new(SELECT_PHOTON, always, set_mode(Mode::Photon25)),
        ActionSpec::new(SELECT_ELECTRON, always, set_mode(Mode::Electron25)),
        ActionSpec::new(OTHER_OPERATION, always, |s| s.clone()).allowing_noop(),
    ];
    let init = State::new().with("mode", Mode::None.as_str()).with("beam", Beam::Off.as_str());
    let model = StateModel::new(["mode", "beam"], [init], actions).expect("therac model is well formed");
    (model, Abstraction::fields(&["mode", "beam"]))
}

pub fn therac_spec() -> SystemSpec {
    let (model, abstraction) = therac_model();
    SystemSpec { model, abstraction, invariants: Vec::new() }
}

/// Default operation mix: selections and cursor movement dominate, as at the
/// operator console.
pub fn therac_weights() -> WeightTable {
    WeightTable::new([(SELECT_PHOTON, 3), (CURSOR_UP, 3), (SELECT_ELECTRON, 3), (OTHER_OPERATION, 1)])
        .expect("static weights are valid")
}
