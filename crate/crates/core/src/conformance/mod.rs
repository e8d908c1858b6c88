//! The conformance harness: drives a system under test with command
//! sequences, compares its abstracted results with the model, checks spatial
//! invariants and shrinks failures.

mod adapter;
mod check;
mod deferred;
mod run;
mod witness;

pub use adapter::{Abstraction, RawObservation, SutAdapter};
pub use check::{
    check_against, classify, CheckOptions, Classification, FailKind, Failure, NotAFailure, SpatialWitness, SystemSpec,
    Verdict, Witness,
};
pub use deferred::{Completer, Deferred, DeferredError};
pub use run::{run_property, shrink_failure, ConformanceError, FailureRecord, PropertyConfig, RunReport};
pub use witness::{WitnessFile, WITNESS_SCHEMA_VERSION};
