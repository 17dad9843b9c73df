use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::heat::log_slope;
use crate::numeric::pairwise_sum;
use crate::torus::C64;

pub const MIN_EIGENVALUES: usize = 100_000;
const QUADRATURE_POINTS: usize = 256;

#[derive(Clone, Debug, Serialize)]
pub struct TorusDixmier {
    pub value: f64,
    pub error: f64,
    /// `∫_S f`.
    pub integral: f64,
    pub eps: f64,
    pub eigenvalue_count: usize,
    /// Whether at least `MIN_EIGENVALUES` eigenvalues entered the partial sums.
    pub sufficient: bool,
}

/// `∫_S f` on `S = [−ℓ/2, ℓ/2)²` by the periodic trapezoid rule.
pub fn square_integral(f: &impl Fn(f64, f64) -> f64, side: f64) -> f64 {
    let m = QUADRATURE_POINTS;
    let h = side / m as f64;
    let rows: Vec<f64> = (0..m)
        .map(|i| {
            let x = -0.5 * side + i as f64 * h;
            pairwise_sum(
                &(0..m)
                    .map(|j| f(x, -0.5 * side + j as f64 * h))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    pairwise_sum(&rows) * h * h
}

/// Log-averaged partial sums of `Tr(M_f(−Δ_S + ε)⁻¹)` over the plane-wave basis.
///
/// Plane waves `ℓ^{-1}e^{2πik·x/ℓ}` are taken with eigenvalues `|k|²/ℓ² + ε`;
/// the diagonal of `M_f` in this basis is `ℓ^{-2}∫_S f`.
pub fn torus_dixmier(
    f: impl Fn(f64, f64) -> f64,
    side: f64,
    eps: f64,
    cutoff: usize,
) -> Result<TorusDixmier> {
    if !(side > 0.0 && eps > 0.0) {
        return Err(Error::InvalidParameter(format!("side = {side}, ε = {eps}")));
    }
    let integral = square_integral(&f, side);
    let diag = integral / (side * side);
    let k = cutoff as i64;
    let mut mu: Vec<f64> = Vec::with_capacity((4 * k * k) as usize);
    for a in -k..=k {
        for b in -k..=k {
            if a * a + b * b <= k * k {
                mu.push((a * a + b * b) as f64 / (side * side) + eps);
            }
        }
    }
    mu.sort_by(f64::total_cmp);
    let mut acc = 0.0;
    let partial: Vec<C64> = mu
        .iter()
        .map(|m| {
            acc += diag / m;
            C64::new(acc, 0.0)
        })
        .collect();
    let s = log_slope(&partial);
    Ok(TorusDixmier {
        value: s.value.re,
        error: s.error,
        integral,
        eps,
        eigenvalue_count: mu.len(),
        sufficient: mu.len() >= MIN_EIGENVALUES,
    })
}

/// Smooth bump `C·exp(−1/(1 − |x|²/ρ²))` on the disc of radius `ρ`, normalized to `∫ = 1`.
pub fn unit_bump(radius: f64) -> impl Fn(f64, f64) -> f64 {
    let raw = move |x: f64, y: f64| {
        let s = (x * x + y * y) / (radius * radius);
        if s < 1.0 {
            (-1.0 / (1.0 - s)).exp()
        } else {
            0.0
        }
    };
    // ∫ = 2πρ² ∫₀¹ r e^{-1/(1−r²)} dr, by a fine midpoint rule
    let m = 200_000;
    let terms: Vec<f64> = (0..m)
        .map(|i| {
            let r = (i as f64 + 0.5) / m as f64;
            r * (-1.0 / (1.0 - r * r)).exp()
        })
        .collect();
    let norm = 2.0 * PI * radius * radius * pairwise_sum(&terms) / m as f64;
    move |x, y| raw(x, y) / norm
}
