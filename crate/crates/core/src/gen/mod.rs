//! Seeded generators, command-sequence generation and shrinking.

mod commands;
mod generator;
mod invariants;
mod rng;
mod shrink;

pub use commands::{default_delays, gen_commands, gen_enabled_commands, Command, CommandSequence, WeightTable};
pub use generator::{constant, frequency, gen_bool, gen_int, gen_int_in_range, gen_string, one_of, vec_of, Generator};
pub use invariants::gen_invariant;
pub use rng::{Rng, Seed};
pub use shrink::{shrink_sequence, single_moves, ShrinkError};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("empty range {lo}..={hi}")]
    InvalidRange { lo: i64, hi: i64 },
    #[error("no choices to pick from")]
    NoChoices,
    #[error("weights must be positive")]
    ZeroWeight,
    #[error("operation {0} has weight 0")]
    ZeroWeightFor(String),
    #[error("operation vocabulary is empty")]
    EmptyVocabulary,
    #[error("unknown operation {0}")]
    UnknownOperation(String),
    #[error("maximum sequence length must be at least 1")]
    InvalidMaxLen,
    #[error("owner pool is empty")]
    EmptyOwnerPool,
}
