use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::heat::extrapolate::{extrapolate, ExtrapolationResult};
use crate::heat::grid::TGrid;
use crate::numeric::{linear_fit, pairwise_sum};
use crate::operators::{
    build_lindbladian, derivation_sparse, heat_trace, BasisWindow, OperatorMatrix,
};
use crate::torus::{DerivationSpec, TorusElement};

fn zero_like(r: &TorusElement) -> TorusElement {
    r.zero_like()
}

/// Limit of `t·Tr e^{tL}` for an already assembled generator.
pub fn volume_from_operator(l: &OperatorMatrix, grid: &TGrid) -> Result<ExtrapolationResult> {
    grid.check_window(l.window())?;
    let samples = grid
        .values()
        .into_iter()
        .map(|t| Ok((t, t * heat_trace(l, t)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(extrapolate(&samples))
}

/// `V = lim t·Tr e^{tL}`.
pub fn volume_estimate(
    r1: &TorusElement,
    r2: &TorusElement,
    grid: &TGrid,
    window: BasisWindow,
) -> Result<ExtrapolationResult> {
    grid.check_window(window)?;
    let l = build_lindbladian(r1, r2, window)?;
    volume_from_operator(&l, grid)
}

/// `s = (1/6) lim (Tr e^{tL} − V/t)`.
pub fn curvature_estimate(
    r1: &TorusElement,
    r2: &TorusElement,
    v: f64,
    grid: &TGrid,
    window: BasisWindow,
) -> Result<ExtrapolationResult> {
    grid.check_window(window)?;
    let l = build_lindbladian(r1, r2, window)?;
    let samples = grid
        .values()
        .into_iter()
        .map(|t| Ok((t, (heat_trace(&l, t)? - v / t) / 6.0)))
        .collect::<Result<Vec<_>>>()?;
    Ok(extrapolate(&samples))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureShift {
    pub estimate: ExtrapolationResult,
    /// `(t, |Tr(A e^{tL₀})|)` at every grid point.
    pub cancellation: Vec<(f64, f64)>,
}

/// `(1/12) lim t·Tr((d_{r₁}² + d_{r₂}²) e^{tL₀})`, with the first-order term checked at each `t`.
pub fn curvature_shift(
    r1: &TorusElement,
    r2: &TorusElement,
    grid: &TGrid,
    window: BasisWindow,
) -> Result<CurvatureShift> {
    grid.check_window(window)?;
    build_lindbladian(r1, r2, window)?;
    let theta = r1.theta();
    let dr1 = derivation_sparse(&DerivationSpec::inner(r1.clone()), window);
    let dr2 = derivation_sparse(&DerivationSpec::inner(r2.clone()), window);
    let d1 = derivation_sparse(&DerivationSpec::canonical(theta, 1)?, window);
    let d2 = derivation_sparse(&DerivationSpec::canonical(theta, 2)?, window);
    let second = dr1.matmul(&dr1).add(&dr2.matmul(&dr2)).diagonal();
    let first = dr1
        .matmul(&d1)
        .add(&d1.matmul(&dr1))
        .add(&dr2.matmul(&d2))
        .add(&d2.matmul(&dr2))
        .scale(C64::new(-0.5, 0.0))
        .diagonal();
    let l0: Vec<f64> = window
        .points()
        .map(|(m, n)| -((m * m + n * n) as f64) / 2.0)
        .collect();
    let mut samples = Vec::new();
    let mut cancellation = Vec::new();
    for t in grid.values() {
        let weights: Vec<f64> = l0.iter().map(|&mu| (t * mu).exp()).collect();
        let s: Vec<f64> = second.iter().zip(&weights).map(|(a, w)| a.re * w).collect();
        let re: Vec<f64> = first.iter().zip(&weights).map(|(a, w)| a.re * w).collect();
        let im: Vec<f64> = first.iter().zip(&weights).map(|(a, w)| a.im * w).collect();
        samples.push((t, t * pairwise_sum(&s) / 12.0));
        cancellation.push((t, pairwise_sum(&re).hypot(pairwise_sum(&im))));
    }
    Ok(CurvatureShift {
        estimate: extrapolate(&samples),
        cancellation,
    })
}

/// `(t, |t·Tr(e^{tL} − e^{tL₀})|)` on the grid and the fitted power of `t`.
pub fn volume_invariance_profile(
    r1: &TorusElement,
    r2: &TorusElement,
    grid: &TGrid,
    window: BasisWindow,
) -> Result<(Vec<(f64, f64)>, f64)> {
    grid.check_window(window)?;
    let z = zero_like(r1);
    let l = build_lindbladian(r1, r2, window)?;
    let l0 = build_lindbladian(&z, &z, window)?;
    let mut out = Vec::new();
    for t in grid.values() {
        out.push((t, (t * (heat_trace(&l, t)? - heat_trace(&l0, t)?)).abs()));
    }
    let x: Vec<f64> = out.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = out.iter().map(|p| p.1.max(1e-300).ln()).collect();
    let (_, slope, _) = linear_fit(&x, &y);
    Ok((out, slope))
}
