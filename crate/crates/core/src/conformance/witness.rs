//! Replayable witness files.

use super::check::FailKind;
use crate::gen::{CommandSequence, Seed};
use serde::{Deserialize, Serialize};

pub const WITNESS_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessFile {
    pub schema_version: u32,
    pub suite: String,
    /// Fault switched on in the simulator when the failure was found.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<Seed>,
    /// Recorded outcome; absent for plain scenarios that only describe a run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<FailKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fail_index: Option<usize>,
    pub commands: CommandSequence,
}

impl WitnessFile {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("witness serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
