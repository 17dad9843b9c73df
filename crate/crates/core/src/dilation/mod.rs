//! Brownian dilation of the heat semigroup and the structure relations of the Lindbladian.

mod cocycle;
mod flow;
mod path;

pub use cocycle::{cocycle_residual, lindbladian_apply};
pub use flow::{classical_flow, m_scaling, mc_expectation, MCEntry, MCEstimate, MScaling, CHUNK};
pub use path::{path_rng, sample_brownian, sample_brownian_indexed, BrownianPath};
