use std::f64::consts::TAU;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::torus::C64;

#[derive(Clone, Debug, Serialize)]
pub struct CompactnessProfile {
    /// Descending.
    pub singular_values: Vec<f64>,
    /// First index with `σₖ < tol·σ₀`.
    pub decay_index: Option<usize>,
    pub dim: usize,
}

/// Singular values of `M_f e^{tΔ/2}` discretized on `n^d` nodes of `[−L, L)^d`.
pub fn compactness_profile(
    d: usize,
    half_width: f64,
    n: usize,
    t: f64,
    tol: f64,
    f: impl Fn(&[f64]) -> f64,
) -> Result<CompactnessProfile> {
    if !(d == 1 || d == 2) || n < 2 {
        return Err(Error::InvalidParameter(format!("d = {d}, n = {n}")));
    }
    if t <= 0.0 {
        return Err(Error::NonPositiveTime(t));
    }
    let h = 2.0 * half_width / n as f64;
    let dk = TAU / (n as f64 * h);
    let k = |q: usize| {
        if q < n / 2 {
            q as f64 * dk
        } else {
            (q as f64 - n as f64) * dk
        }
    };
    // one-axis smoothing F^H diag(e^{-tk²/2}) F
    let s1 = DMatrix::<C64>::from_fn(n, n, |i, j| {
        let mut acc = C64::default();
        for q in 0..n {
            let phase = TAU * (q as f64) * (i as f64 - j as f64) / n as f64;
            acc += C64::from_polar((-0.5 * t * k(q) * k(q)).exp(), phase);
        }
        acc / n as f64
    });
    let dim = n.pow(d as u32);
    let smooth = if d == 1 { s1 } else { s1.kronecker(&s1) };
    let mut x = vec![0.0; d];
    let weights: Vec<f64> = (0..dim)
        .map(|idx| {
            let mut rest = idx;
            for a in (0..d).rev() {
                x[a] = -half_width + (rest % n) as f64 * h;
                rest /= n;
            }
            f(&x)
        })
        .collect();
    let a = DMatrix::<C64>::from_fn(dim, dim, |i, j| smooth[(i, j)] * weights[i]);
    let mut sv: Vec<f64> = a.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let top = sv.first().copied().unwrap_or(0.0);
    let decay_index = sv.iter().position(|&s| s < tol * top);
    Ok(CompactnessProfile {
        singular_values: sv,
        decay_index,
        dim,
    })
}
