//! Constructors for the five reduction families and their integer kernels.

mod arbitrary;
mod biased;
pub mod kernels;
mod rational;
mod to_uniform;
mod uniform;

pub use arbitrary::{uniform_to_arbitrary, ResidualProtocol, ResidualState, StageLaw};
pub use biased::{biased_bound, biased_coin, biased_plan, biased_to_uniform, biased_to_uniform_stats};
pub use kernels::{
    binomialary_increment, binomialary_multiple, binomialary_representation, dirichlet_qualifies, find_dirichlet_k,
    multinomial_rank,
};
pub use rational::{uniform_to_rational, uniform_to_rational_stats};
pub use to_uniform::{
    arbitrary_to_uniform, arbitrary_to_uniform_bound, arbitrary_to_uniform_stats, total_class_mass, type_classes,
    TypeClass,
};
pub use uniform::{
    uniform_max_output, uniform_to_uniform, uniform_to_uniform_chain, uniform_to_uniform_stats, UniformTable,
};

/// Largest number of input codewords a constructor will materialize.
pub const MATERIALIZE_LIMIT: usize = 1 << 21;
