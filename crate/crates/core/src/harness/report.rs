use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::config::ExperimentConfig;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Headline {
    pub name: String,
    pub value: f64,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// `(x, value, error)` triples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub points: Vec<[f64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub headline: Vec<Headline>,
    pub checks: Vec<Check>,
    pub series: Vec<Series>,
    pub records: serde_json::Map<String, serde_json::Value>,
    pub passed: bool,
    pub wall_clock_s: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Serialized report; JSON keeps struct field order, CSV holds the series rows only.
pub fn emit_report(report: &RunReport, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("plain data");
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let mut s = String::from("series,x,value,error\n");
            for series in &report.series {
                for p in &series.points {
                    let _ = writeln!(
                        s,
                        "{},{},{},{}",
                        csv_field(&series.name),
                        num(p[0]),
                        num(p[1]),
                        num(p[2])
                    );
                }
            }
            s.into_bytes()
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "experiment {}  [{}]",
                report.experiment,
                &report.config_hash[..12]
            );
            for h in &report.headline {
                let _ = writeln!(
                    s,
                    "  {:<28} {:>22} ± {:.3e}",
                    h.name,
                    format!("{:.12}", h.value),
                    h.error
                );
            }
            for c in &report.checks {
                let _ = writeln!(
                    s,
                    "  [{}] {}: {}",
                    if c.passed { "pass" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            let _ = writeln!(
                s,
                "  {}",
                if report.passed {
                    "all targets met"
                } else {
                    "target missed"
                }
            );
            s.into_bytes()
        }
    }
}

pub fn parse_report(json: &str) -> Result<RunReport> {
    serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
}

/// Differences between a stored report and a fresh run of the same config.
pub fn replay_differences(stored: &RunReport, fresh: &RunReport) -> Vec<String> {
    let mut out = Vec::new();
    let recomputed = stored.config.hash();
    if recomputed != stored.config_hash {
        out.push(format!(
            "stored hash {} does not match its config ({})",
            stored.config_hash, recomputed
        ));
    }
    if fresh.config_hash != stored.config_hash {
        out.push("config differs".into());
    }
    if stored.headline.len() != fresh.headline.len() {
        out.push("headline count differs".into());
    }
    for (a, b) in stored.headline.iter().zip(&fresh.headline) {
        if a.name != b.name
            || a.value.to_bits() != b.value.to_bits()
            || a.error.to_bits() != b.error.to_bits()
        {
            out.push(format!(
                "{}: {} ± {} vs {} ± {}",
                a.name, a.value, a.error, b.value, b.error
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunReport {
        let config = ExperimentConfig::from_layers("volume", "N=8", &[]).unwrap();
        RunReport {
            experiment: "volume".into(),
            config_hash: config.hash(),
            config,
            headline: vec![Headline {
                name: "v".into(),
                value: std::f64::consts::TAU,
                error: 1e-9,
            }],
            checks: vec![Check {
                name: "c".into(),
                passed: true,
                detail: "ok".into(),
            }],
            series: vec![
                Series {
                    name: "a".into(),
                    points: vec![[0.1, 1.0, 0.0], [0.2, 2.0, 0.0]],
                },
                Series {
                    name: "b,c".into(),
                    points: vec![[1.0, 1.0 / 3.0, 1e-300]],
                },
            ],
            records: serde_json::Map::new(),
            passed: true,
            wall_clock_s: 0.5,
        }
    }

    #[test]
    fn deterministic_bytes() {
        let r = sample();
        for f in [Format::Json, Format::Csv, Format::Text] {
            assert_eq!(emit_report(&r, f), emit_report(&r.clone(), f));
        }
    }

    #[test]
    fn csv_shape_and_precision() {
        let csv = String::from_utf8(emit_report(&sample(), Format::Csv)).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3 + 1);
        assert_eq!(lines[0], "series,x,value,error");
        assert!(lines[3].starts_with("\"b,c\","));
        let v: f64 = lines[3].split(',').nth(3).unwrap().parse().unwrap();
        assert_eq!(v, 1.0 / 3.0);
    }

    #[test]
    fn json_roundtrip() {
        let r = sample();
        let back =
            parse_report(std::str::from_utf8(&emit_report(&r, Format::Json)).unwrap()).unwrap();
        assert_eq!(back, r);
        assert!(replay_differences(&r, &back).is_empty());
        let mut tampered = r.clone();
        tampered.config.window = Some(10);
        let d = replay_differences(&tampered, &r);
        assert_eq!(d.len(), 1);
        assert!(d[0].contains("does not match"));
    }
}
