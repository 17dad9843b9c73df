mod dixmier;
mod extrapolate;
mod grid;
mod theta;
mod volume;

pub use dixmier::{
    dixmier_for_operator, dixmier_heat, log_slope, volume_form, DixmierEstimate, LogSlope,
    ResolventEstimate, VolumeForm, DEFAULT_SHIFTS, KERNEL_TOL,
};
pub use extrapolate::{
    extrapolate, extrapolate_with, half_powers, ExtrapolationResult, DEFAULT_POWERS,
};
pub use grid::TGrid;
pub use theta::{connes_sum, equidistribution_check, sin_sq_pi, theta_sums};
pub use volume::{
    curvature_estimate, curvature_shift, volume_estimate, volume_from_operator,
    volume_invariance_profile, CurvatureShift,
};
