use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::dilation::path::{path_rng, BrownianPath};
use crate::error::{Error, Result};
use crate::numeric::{linear_fit, pairwise_sum};
use crate::torus::{unit_phase, TorusElement, C64};

pub const CHUNK: usize = 1024;

/// `j_t⁰(U^mV^n) = e^{i(m w₁(t) + n w₂(t))} U^mV^n`.
pub fn classical_flow(a: &TorusElement, path: &BrownianPath, t: f64) -> Result<TorusElement> {
    let (w1, w2) = path.at(t)?;
    Ok(phase_flow(a, w1, w2))
}

fn phase_flow(a: &TorusElement, w1: f64, w2: f64) -> TorusElement {
    let mut out = a.zero_like().with_prune(0.0);
    for ((m, n), c) in a.iter() {
        out.insert(m, n, c * angle(m as f64 * w1 + n as f64 * w2));
    }
    out.with_prune(a.prune_threshold())
}

fn angle(x: f64) -> C64 {
    unit_phase(x / std::f64::consts::TAU)
}

#[derive(Clone, Debug, Serialize)]
pub struct MCEntry {
    pub mode: [i64; 2],
    pub mean: C64,
    /// Standard errors of the real and imaginary parts.
    pub stderr: [f64; 2],
    pub target: C64,
    pub z: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MCEstimate {
    pub t: f64,
    pub paths: usize,
    pub seed: u64,
    pub entries: Vec<MCEntry>,
}

impl MCEstimate {
    pub fn max_z(&self) -> f64 {
        self.entries.iter().map(|e| e.z).fold(0.0, f64::max)
    }

    pub fn mean_element(&self, like: &TorusElement) -> TorusElement {
        let mut out = like.zero_like();
        for e in &self.entries {
            out.insert(e.mode[0], e.mode[1], e.mean);
        }
        out
    }

    /// `‖mean − target‖₂` over all modes.
    pub fn error_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| (e.mean - e.target).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Per-mode sums `(Σre, Σim, Σre², Σim²)`.
type Moments = Vec<[f64; 4]>;

fn chunk_moments(
    a: &[((i64, i64), C64)],
    t: f64,
    seed: u64,
    range: std::ops::Range<usize>,
) -> Moments {
    let sd = t.sqrt();
    let mut acc = vec![[0.0; 4]; a.len()];
    for i in range {
        let mut rng = path_rng(seed, i as u64);
        let w1 = sd * rng.sample::<f64, _>(StandardNormal);
        let w2 = sd * rng.sample::<f64, _>(StandardNormal);
        for (k, ((m, n), c)) in a.iter().enumerate() {
            let v = c * angle(*m as f64 * w1 + *n as f64 * w2);
            acc[k][0] += v.re;
            acc[k][1] += v.im;
            acc[k][2] += v.re * v.re;
            acc[k][3] += v.im * v.im;
        }
    }
    acc
}

fn heat_target(m: i64, n: i64, c: C64, t: f64) -> C64 {
    c * (-0.5 * t * (m * m + n * n) as f64).exp()
}

/// Monte Carlo estimate of `E j_t⁰(a)`, compared with `e^{tL₀}a`.
/// Path `i` uses stream `i` of `seed`; chunks are combined in a fixed order.
pub fn mc_expectation(a: &TorusElement, t: f64, paths: usize, seed: u64) -> Result<MCEstimate> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::NonPositiveTime(t));
    }
    if paths < 2 {
        return Err(Error::InvalidParameter("need at least 2 paths".into()));
    }
    let terms: Vec<_> = a.iter().collect();
    if t == 0.0 {
        // every path sits at the origin
        let entries = terms
            .iter()
            .map(|&((m, n), c)| MCEntry {
                mode: [m, n],
                mean: c,
                stderr: [0.0, 0.0],
                target: c,
                z: 0.0,
            })
            .collect();
        return Ok(MCEstimate {
            t,
            paths,
            seed,
            entries,
        });
    }
    let chunks: Vec<Moments> = (0..paths.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| chunk_moments(&terms, t, seed, c * CHUNK..((c + 1) * CHUNK).min(paths)))
        .collect();
    let mf = paths as f64;
    let entries = terms
        .iter()
        .enumerate()
        .map(|(k, &((m, n), c))| {
            let s: Vec<f64> = (0..4)
                .map(|q| pairwise_sum(&chunks.iter().map(|ch| ch[k][q]).collect::<Vec<_>>()))
                .collect();
            let mean = C64::new(s[0] / mf, s[1] / mf);
            let se = |sum: f64, sq: f64| ((sq - sum * sum / mf).max(0.0) / (mf - 1.0) / mf).sqrt();
            let stderr = [se(s[0], s[2]), se(s[1], s[3])];
            let target = heat_target(m, n, c, t);
            let zq = |d: f64, e: f64| if d == 0.0 { 0.0 } else { d.abs() / e };
            let z = zq(mean.re - target.re, stderr[0]).max(zq(mean.im - target.im, stderr[1]));
            MCEntry {
                mode: [m, n],
                mean,
                stderr,
                target,
                z,
            }
        })
        .collect();
    Ok(MCEstimate {
        t,
        paths,
        seed,
        entries,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MScaling {
    /// `(M, RMS of ‖mean − target‖ over replicates)`.
    pub points: Vec<(usize, f64)>,
    /// Fitted `p` in `error ∝ M^{-p}`.
    pub exponent: f64,
    pub exponent_stderr: f64,
}

/// Error decay of the Monte Carlo mean in the path count.
pub fn m_scaling(
    a: &TorusElement,
    t: f64,
    counts: &[usize],
    replicates: usize,
    seed: u64,
) -> Result<MScaling> {
    if counts.len() < 2 || replicates == 0 {
        return Err(Error::InvalidParameter(
            "need ≥ 2 path counts and ≥ 1 replicate".into(),
        ));
    }
    let mut points = Vec::with_capacity(counts.len());
    for (ci, &m) in counts.iter().enumerate() {
        let errs: Result<Vec<f64>> = (0..replicates)
            .map(|r| {
                let s = seed.wrapping_add(
                    ((ci * replicates + r + 1) as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
                );
                mc_expectation(a, t, m, s).map(|e| e.error_norm().powi(2))
            })
            .collect();
        let ms = pairwise_sum(&errs?) / replicates as f64;
        points.push((m, ms.sqrt()));
    }
    let x: Vec<f64> = points.iter().map(|p| (p.0 as f64).ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (_, slope, se) = linear_fit(&x, &y);
    Ok(MScaling {
        points,
        exponent: -slope,
        exponent_stderr: se,
    })
}
