//! Exact and statistical checks of protocols, and efficiency estimates.

mod bound;
mod exact;
mod lazy;
mod mutation;
mod sampling;

pub use bound::{absolute_output_bound, AbsoluteBound};
pub use exact::{verify_reduction_exact, PrefixRow, ReportJson, RowJson, VerificationReport};
pub use lazy::verify_reduction_lazy;
pub use mutation::{output_swaps, OutputSwap};
pub use sampling::{
    chi_square_prefixes, latency_empirical, monte_carlo_efficiency, ChiSquareReport, EfficiencyEstimate,
    LatencyEstimate, CHI_SQUARE_QUANTILE, EPOCH_INPUT_CAP,
};
