//! Building protocols out of restart specifications, composing them, and
//! chaining families into serial protocols.

mod compose;
mod restart;
mod serial;
mod stats;

pub use compose::{compose, Composite};
pub use restart::{build_restart, RestartSpec};
pub use serial::{
    build_serial, check_growth_condition, serial_partial_efficiency, ComponentSource, SerialChain, SerialEfficiency,
    SerialProtocol,
};
pub use stats::{epoch_stats, EpochStats};
