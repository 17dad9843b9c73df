//! Universal forms, their image under `π`, junk forms and connections.

mod connection;
mod inverse;
mod junk;
mod pi;
mod universal;

pub use connection::{covariant_derivative, curvature_two_form, ConnectionSpec};
pub use inverse::{invert, Inverse, CONDITION_BOUND, INVERSE_TOL};
pub use junk::{
    commutator_contraction, delta2_v_inverse, detect_n0, dyadic_envelope, j1_constraint_residual,
    j1_element, junk_ladder, junk_probe, junk_probe_with, JunkProbe, J1_TOL,
};
pub use pi::{pi_delta, pi_one, pi_two, PerturbedPair, PiOneImage, PiTwoImage};
pub use universal::{delta_lift, UniversalOneForm, UniversalTwoForm};
