//! The Moyal plane: phase-space functions, the twisted product, heat traces and flows.

mod compact;
mod flow;
mod phase;
mod product;
mod torus_dixmier;
mod traces;

pub use compact::{compactness_profile, CompactnessProfile};
pub use flow::{weyl_flow_mc, MODE_CUTOFF};
pub use phase::{PhaseFunction, BOUNDARY_TOL, DEFAULT_HALF_WIDTH, DEFAULT_POINTS};
pub use product::{twisted_product, untwisted_product, PAIR_CUTOFF};
pub use torus_dixmier::{square_integral, torus_dixmier, unit_bump, TorusDixmier, MIN_EIGENVALUES};
pub use traces::{classical_heat_trace, nc_heat_trace, weyl_trace, KernelTraceResult};
