mod derivation;
mod element;
mod io;

pub use derivation::{derivation_commutator, DerivationSpec};
pub use element::{lambda_pow, unit_phase, TorusElement, C64, DEFAULT_PRUNE};
