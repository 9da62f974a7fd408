//! Entropy-conserving conversions between discrete random sources.
//!
//! A [`Protocol`] is a deterministic transducer that reads symbols drawn
//! from one distribution and emits symbols that follow another. The crate
//! provides constructors for the standard conversions in [`reductions`],
//! ways to combine protocols in [`combinators`], and exact and statistical
//! checks in [`analysis`].
//!
//! ```
//! use conserve::combinators::{build_restart, epoch_stats};
//! use conserve::reductions::uniform_to_uniform;
//!
//! let spec = uniform_to_uniform(3, 2, 2)?;
//! let stats = epoch_stats(&spec);
//! assert_eq!(conserve::ratio_string(&stats.production), "8/3");
//! let protocol = build_restart(&spec)?;
//! # let _ = protocol;
//! # Ok::<(), conserve::Error>(())
//! ```

pub mod alphabet;
pub mod analysis;
pub mod cli;
pub mod combinators;
pub mod dist;
pub mod error;
pub mod prefix;
pub mod protocol;
pub mod reductions;
pub mod sampler;

pub use alphabet::{Alphabet, Symbol, Word};
pub use dist::{entropy, ratio, ratio_string, ratio_to_f64, Dist, Ratio};
pub use error::{Error, Result};
pub use prefix::{assign_codewords, kraft_sum, prefix_code_of, PrefixCode};
pub use protocol::{Protocol, StateId, TableProtocol};
pub use sampler::ExactSampler;
