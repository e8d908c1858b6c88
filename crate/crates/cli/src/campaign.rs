//! Suite setup shared by campaigns, replays and behaviour dumps.

use std::fmt;
use stpt_core::conformance::{SutAdapter, SystemSpec};
use stpt_core::gen::{default_delays, gen_commands, gen_enabled_commands, CommandSequence, GenError, Generator, WeightTable};
use stpt_core::suts::{robot_model, therac_spec, therac_weights, RobotConfig, RobotFault, RobotSim, TheracFault, TheracSim};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SuiteName {
    #[value(name = "therac25")]
    Therac25,
    #[value(name = "robot")]
    Robot,
    #[value(name = "trace-check")]
    TraceCheck,
}

impl SuiteName {
    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Therac25 => "therac25",
            SuiteName::Robot => "robot",
            SuiteName::TraceCheck => "trace-check",
        }
    }

    pub fn parse(name: &str) -> Result<Self, ConfigError> {
        match name {
            "therac25" => Ok(SuiteName::Therac25),
            "robot" => Ok(SuiteName::Robot),
            "trace-check" => Ok(SuiteName::TraceCheck),
            other => Err(ConfigError(format!("unknown suite '{other}'"))),
        }
    }
}

/// A problem with flags or input files. Always exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<GenError> for ConfigError {
    fn from(e: GenError) -> Self {
        ConfigError(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    Therac(TheracFault),
    Robot(RobotFault),
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fault::Therac(t) => write!(f, "{t}"),
            Fault::Robot(r) => write!(f, "{r}"),
        }
    }
}

/// The model, simulator factory and default weights of one suite.
pub struct Suite {
    pub name: SuiteName,
    pub fault: Fault,
    pub spec: SystemSpec,
    pub robot: Option<RobotConfig>,
    pub weights: WeightTable,
}

impl Suite {
    /// `fault` overrides the fault set in a robot config file.
    pub fn build(name: SuiteName, fault: Option<&str>, robot: Option<RobotConfig>) -> Result<Suite, ConfigError> {
        match name {
            SuiteName::Therac25 => {
                if robot.is_some() {
                    return Err(ConfigError("--config applies to the robot suite only".into()));
                }
                let fault = match fault {
                    None => TheracFault::None,
                    Some(f) => f.parse().map_err(ConfigError)?,
                };
                Ok(Suite {
                    name,
                    fault: Fault::Therac(fault),
                    spec: therac_spec(),
                    robot: None,
                    weights: therac_weights(),
                })
            }
            SuiteName::Robot => {
                let mut config = robot.unwrap_or_default();
                if let Some(f) = fault {
                    config.fault = f.parse().map_err(ConfigError)?;
                }
                config.validate().map_err(|e| ConfigError(e.to_string()))?;
                let weights = WeightTable::uniform(config.vocabulary())?;
                Ok(Suite {
                    name,
                    fault: Fault::Robot(config.fault),
                    spec: robot_model(&config),
                    robot: Some(config),
                    weights,
                })
            }
            SuiteName::TraceCheck => Err(ConfigError("trace-check has no simulator".into())),
        }
    }

    pub fn adapter(&self) -> Box<dyn SutAdapter> {
        match (self.fault, &self.robot) {
            (Fault::Therac(f), _) => Box::new(TheracSim::new(f)),
            (Fault::Robot(_), Some(config)) => Box::new(RobotSim::new(config.clone()).expect("config was validated")),
            (Fault::Robot(_), None) => unreachable!("robot suites carry their config"),
        }
    }

    /// Therac operations are always enabled, so its sequences are drawn
    /// freely; robot sequences follow the model so that only enabled moves
    /// are issued.
    pub fn generator(&self, weights: &WeightTable, max_len: usize) -> Result<Generator<CommandSequence>, ConfigError> {
        Ok(match self.name {
            SuiteName::Robot => gen_enabled_commands(&self.spec.model, weights, max_len, default_delays())?,
            _ => gen_commands(weights, max_len, default_delays())?,
        })
    }
}

/// Parses `op=w,op=w`.
pub fn parse_weights(text: &str) -> Result<Vec<(String, u32)>, ConfigError> {
    text.split(',')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            let (op, w) = part
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("weight '{part}' is not of the form op=w")))?;
            let w = w.trim().parse::<u32>().map_err(|_| ConfigError(format!("weight '{part}' is not a non-negative integer")))?;
            Ok((op.trim().to_string(), w))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_parse() {
        let w = parse_weights("CursorUp=5, Select25MevPhotonMode=1").unwrap();
        assert_eq!(w, vec![("CursorUp".to_string(), 5), ("Select25MevPhotonMode".to_string(), 1)]);
        assert!(parse_weights("CursorUp").is_err());
        assert!(parse_weights("CursorUp=-1").is_err());
    }

    #[test]
    fn faults_are_checked_per_suite() {
        assert!(Suite::build(SuiteName::Therac25, Some("wrongMove"), None).is_err());
        assert!(Suite::build(SuiteName::Robot, Some("sequenceBug"), None).is_err());
        let robot = Suite::build(SuiteName::Robot, Some("wrongInit"), None).unwrap();
        assert_eq!(robot.fault.to_string(), "wrongInit");
    }
}
