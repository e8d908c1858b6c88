//! Simulated systems under test with switchable faults, each with its
//! reference specification.

mod robot;
mod therac;

pub use robot::{
    robot_model, RobotConfig, RobotConfigError, RobotFault, RobotSim, Waypoint, ARM_OWNER, HOME_POSITION,
    INITIALISE_POSITION, MOVE_PREFIX, WRONG_INIT_POSITION, WRONG_MOVE_POSITION,
};
pub use therac::{
    therac_model, therac_spec, therac_weights, Beam, Mode, TheracFault, TheracOp, TheracSim, CURSOR_UP,
    OTHER_OPERATION, SELECT_ELECTRON, SELECT_PHOTON, TRIGGER_WINDOW,
};
