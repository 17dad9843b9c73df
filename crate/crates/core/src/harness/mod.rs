//! Experiment registry, configs and run reports behind the `ncgeo` binary.

mod config;
mod experiments;
mod random;
mod report;

pub use config::{parse_assignments, ExperimentConfig};
pub use experiments::{default_config, experiment_names, run_experiment, EXPERIMENTS};
pub use random::{random_element, random_self_adjoint};
pub use report::{
    emit_report, parse_report, replay_differences, Check, Format, Headline, RunReport, Series,
};

use crate::error::Error;

/// Process exit status for a failed run: 2 for bad input, 1 for numerical failures.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_) | Error::Parse(_) | Error::InvalidTheta(_) | Error::Io(_) => 2,
        _ => 1,
    }
}
