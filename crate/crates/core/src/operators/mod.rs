mod build;
mod matrix;
mod resolvent;
mod semigroup;
mod sparse;
mod spectrum;
mod window;

pub use build::{
    build_derivation_matrix, build_dirac, build_lindbladian, derivation_sparse, from_vector,
    left_multiplication, perturbed_derivation, to_vector, DiracBlock,
};
pub use matrix::{OperatorMatrix, HERMITIAN_TOL};
pub use resolvent::resolvent_difference_trace_norm;
pub use semigroup::{eig_hermitian, heat_apply, heat_trace};
pub use sparse::SparseMatrix;
pub use spectrum::{connected_blocks, dense, SpectralBlock, Spectrum};
pub use window::BasisWindow;
