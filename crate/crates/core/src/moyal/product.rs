use std::f64::consts::TAU;

use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::moyal::phase::PhaseFunction;
use crate::torus::C64;

/// Pairs whose row norms multiply to less than this, relative to the largest pair, are skipped.
pub const PAIR_CUTOFF: f64 = 1e-20;

fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `(f⊙g)^(x) = ∫ f̂(x−x′)ĝ(x′)e^{(i/2)p(x,x′)}dx′` with `p(x,y) = x₁y₂ − x₂y₁`.
pub fn twisted_product(f: &PhaseFunction, g: &PhaseFunction) -> Result<PhaseFunction> {
    convolve(f, g, true)
}

/// The same integral with the symplectic phase set to 1; equals `(2π)^d f·g`.
pub fn untwisted_product(f: &PhaseFunction, g: &PhaseFunction) -> Result<PhaseFunction> {
    convolve(f, g, false)
}

/// Mixed representation: the second frequency variable is transformed to position,
/// where the `β`-convolution becomes a product and the phase becomes a shift.
fn convolve(f: &PhaseFunction, g: &PhaseFunction, twisted: bool) -> Result<PhaseFunction> {
    f.same_grid(g)?;
    if f.d() != 1 {
        return Err(Error::Unsupported(format!(
            "twisted product for d = {}",
            f.d()
        )));
    }
    let n = f.points();
    let half = n / 2;
    let dk = f.frequency_spacing();
    let h = f.spacing();
    let freq: Vec<f64> = (0..n).map(|q| f.frequency(q)).collect();
    let rows = |p: &PhaseFunction| -> Vec<f64> {
        p.hat()
            .chunks(n)
            .map(|r| r.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt())
            .collect()
    };
    let (fr, gr) = (rows(f), rows(g));
    let peak = fr.iter().cloned().fold(0.0, f64::max) * gr.iter().cloned().fold(0.0, f64::max);
    let mut planner = FftPlanner::<f64>::new();
    let inv = planner.plan_fft_inverse(n);
    let fwd = planner.plan_fft_forward(n);
    // F̌(y_j) = Δk Σ_q F_q e^{ik_q y_j}
    let to_y = |row: &[C64], phase: f64| -> Vec<C64> {
        let mut buf: Vec<C64> = row
            .iter()
            .enumerate()
            .map(|(q, v)| v * C64::from_polar(sign(q + half), phase * freq[q]))
            .collect();
        inv.process(&mut buf);
        buf.iter()
            .enumerate()
            .map(|(j, v)| v * (dk * sign(j)))
            .collect()
    };
    let out_rows: Vec<Vec<C64>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let alpha = freq[a];
            let mut acc = vec![C64::default(); n];
            let mut any = false;
            for ap in 0..n {
                let Some(ai) = (a + half).checked_sub(ap).filter(|&i| i < n) else {
                    continue;
                };
                if fr[ai] * gr[ap] <= PAIR_CUTOFF * peak {
                    continue;
                }
                any = true;
                let alpha_p = freq[ap];
                let (sf, sg) = if twisted {
                    (-0.5 * alpha_p, 0.5 * (alpha - alpha_p))
                } else {
                    (0.0, 0.0)
                };
                let fy = to_y(&f.hat()[ai * n..(ai + 1) * n], sf);
                let gy = to_y(&g.hat()[ap * n..(ap + 1) * n], sg);
                for ((s, x), y) in acc.iter_mut().zip(&fy).zip(&gy) {
                    *s += x * y * dk;
                }
            }
            if !any {
                return acc;
            }
            // H(β) = (h/2π) Σ_j Ȟ(y_j) e^{-iβy_j}
            for (j, v) in acc.iter_mut().enumerate() {
                *v *= sign(j);
            }
            fwd.process(&mut acc);
            acc.iter()
                .enumerate()
                .map(|(q, v)| v * (h / TAU * sign(q + half)))
                .collect()
        })
        .collect();
    PhaseFunction::from_hat(1, f.half_width(), n, out_rows.concat())
}
