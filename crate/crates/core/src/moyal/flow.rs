use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::dilation::{path_rng, MCEntry, MCEstimate, CHUNK};
use crate::error::{Error, Result};
use crate::moyal::phase::PhaseFunction;
use crate::numeric::pairwise_sum;
use crate::torus::C64;

/// Modes with `|f̂| below this times max |f̂|` are not sampled.
pub const MODE_CUTOFF: f64 = 1e-8;

/// Pathwise flow `f̂(x) ↦ e^{-i(w₁x₁ + w₂x₂)}f̂(x)`, compared mode by mode with `e^{-t|x|²/2}f̂(x)`.
pub fn weyl_flow_mc(f: &PhaseFunction, t: f64, paths: usize, seed: u64) -> Result<MCEstimate> {
    if f.d() != 1 {
        return Err(Error::Unsupported(format!("flow for d = {}", f.d())));
    }
    if t < 0.0 || !t.is_finite() {
        return Err(Error::NonPositiveTime(t));
    }
    if paths < 2 {
        return Err(Error::InvalidParameter("need at least 2 paths".into()));
    }
    let n = f.points();
    let peak = f.hat().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let modes: Vec<(usize, usize, C64)> = f
        .hat()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() >= MODE_CUTOFF * peak && peak > 0.0)
        .map(|(i, v)| (i / n, i % n, *v))
        .collect();
    let freq: Vec<f64> = (0..n).map(|q| f.frequency(q)).collect();
    let rows: Vec<usize> = {
        let mut r: Vec<usize> = modes.iter().flat_map(|m| [m.0, m.1]).collect();
        r.sort_unstable();
        r.dedup();
        r
    };
    let sd = t.sqrt();
    let moments: Vec<Vec<[f64; 4]>> = (0..paths.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![[0.0; 4]; modes.len()];
            let mut t1 = vec![C64::default(); n];
            let mut t2 = vec![C64::default(); n];
            for i in c * CHUNK..((c + 1) * CHUNK).min(paths) {
                let mut rng = path_rng(seed, i as u64);
                let w1 = sd * rng.sample::<f64, _>(StandardNormal);
                let w2 = sd * rng.sample::<f64, _>(StandardNormal);
                for &q in &rows {
                    t1[q] = C64::from_polar(1.0, -w1 * freq[q]);
                    t2[q] = C64::from_polar(1.0, -w2 * freq[q]);
                }
                for (k, &(a, b, v)) in modes.iter().enumerate() {
                    let x = v * t1[a] * t2[b];
                    acc[k][0] += x.re;
                    acc[k][1] += x.im;
                    acc[k][2] += x.re * x.re;
                    acc[k][3] += x.im * x.im;
                }
            }
            acc
        })
        .collect();
    let mf = paths as f64;
    let half = (n / 2) as i64;
    let entries = modes
        .iter()
        .enumerate()
        .map(|(k, &(a, b, v))| {
            let target = v * (-0.5 * t * (freq[a] * freq[a] + freq[b] * freq[b])).exp();
            let s: Vec<f64> = (0..4)
                .map(|q| pairwise_sum(&moments.iter().map(|m| m[k][q]).collect::<Vec<_>>()))
                .collect();
            let (mean, stderr) = if t == 0.0 {
                (v, [0.0, 0.0])
            } else {
                let se =
                    |sum: f64, sq: f64| ((sq - sum * sum / mf).max(0.0) / (mf - 1.0) / mf).sqrt();
                (
                    C64::new(s[0] / mf, s[1] / mf),
                    [se(s[0], s[2]), se(s[1], s[3])],
                )
            };
            let zq = |d: f64, e: f64| if d == 0.0 { 0.0 } else { d.abs() / e };
            let z = zq(mean.re - target.re, stderr[0]).max(zq(mean.im - target.im, stderr[1]));
            MCEntry {
                mode: [a as i64 - half, b as i64 - half],
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
