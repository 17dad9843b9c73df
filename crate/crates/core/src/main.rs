use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use ncgeo::harness::{
    default_config, emit_report, exit_code, experiment_names, parse_report, replay_differences,
    run_experiment, ExperimentConfig, Format, RunReport,
};
use ncgeo::Error;

/// Run a numerical experiment and write its report.
///
/// `ncgeo list` prints the experiments; `ncgeo replay REPORT.json` reruns a stored report.
#[derive(Parser)]
#[command(name = "ncgeo", version)]
struct Cli {
    /// Experiment name, `list` or `replay`.
    experiment: String,
    /// `key=value` overrides (for `replay`, the report path).
    args: Vec<String>,
    /// Output directory; defaults to $NCGEO_OUT, then the working directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn write_report(report: &RunReport, format: Format, dir: &Path) -> Result<PathBuf, Error> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!(
        "{}-{}.{}",
        report.experiment,
        &report.config_hash[..12],
        format.extension()
    ));
    std::fs::write(&path, emit_report(report, format))?;
    Ok(path)
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let dir = cli
        .out
        .clone()
        .or_else(|| std::env::var_os("NCGEO_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    match cli.experiment.as_str() {
        "list" => {
            for name in experiment_names() {
                println!("{name}");
            }
            Ok(true)
        }
        "replay" => {
            let [path] = cli.args.as_slice() else {
                return Err(Error::InvalidParameter(
                    "usage: ncgeo replay REPORT.json".into(),
                ));
            };
            let stored = parse_report(&std::fs::read_to_string(path)?)?;
            let fresh = run_experiment(&stored.config)?;
            let diffs = replay_differences(&stored, &fresh);
            for d in &diffs {
                eprintln!("{d}");
            }
            if diffs.is_empty() {
                println!("replay of {} matches bit for bit", stored.experiment);
            }
            Ok(diffs.is_empty())
        }
        name => {
            let config: ExperimentConfig = default_config(name, &cli.args)?;
            let report = run_experiment(&config)?;
            let path = write_report(&report, cli.format, &dir)?;
            print!(
                "{}",
                String::from_utf8_lossy(&emit_report(&report, Format::Text))
            );
            println!("report: {}", path.display());
            Ok(report.passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
