//! Rényi information measures for finite channels.
//!
//! The centerpiece is [`augustin::solve_augustin_mean`], which computes the
//! order-`α` Augustin mean and Augustin information of an input distribution
//! by iterating the tilted Augustin operator from the output distribution.
//! [`oracle`] holds independent minimizers used to cross-check it, and
//! [`channels`] the channel type and a few constructors.
//!
//! All logarithms are natural; information is measured in nats.

pub mod augustin;
pub mod channels;
pub mod divergence;
pub mod error;
pub mod measures;
pub mod oracle;

pub use augustin::{
    augustin_operator, ehb_sandwich, mean_identity_residual, monotonicity_gap, output_distribution,
    output_distribution_tilde, solve_augustin_mean, solve_augustin_mean_from, tilted_augustin_operator,
    tilted_channel, MonotonicityGap, Sandwich, SolveReport, SolverOptions, TiltedChannel, TiltingOrder,
};
pub use channels::{bsc, identity, random_channel, Channel, Example1};
pub use divergence::{conditional_renyi_divergence, pinsker_slack, renyi_divergence};
pub use error::{Error, Result};
pub use measures::{lebesgue_decompose, normalize, tv_distance, Distribution, ExtendedReal, FiniteMeasure, Order};
pub use oracle::{descent_minimize, grid_minimize, DescentOptions, OracleResult, SearchDomain};
