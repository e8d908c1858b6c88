//! Model-based property testing against TLA-style state machines with
//! spatio-temporal invariants.

pub mod stl;
pub mod model;
pub mod gen;
pub mod conformance;
pub mod suts;
