use serde::{Deserialize, Serialize};

use crate::numeric::least_squares;

/// Exponents of `t` in the default small-`t` model `a₀ + a₁t + a₂t² + a₃t³`.
pub const DEFAULT_POWERS: [f64; 4] = [0.0, 1.0, 2.0, 3.0];

/// Exponents `k/2`, `k < terms`: the model `a₀ + a₁√t + a₂t + …`.
pub fn half_powers(terms: usize) -> Vec<f64> {
    (0..terms).map(|k| k as f64 / 2.0).collect()
}

/// A small-`t` limit fitted as `Σ a_k t^{p_k}` with `p₀ = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtrapolationResult {
    pub value: f64,
    pub error_estimate: f64,
    pub powers: Vec<f64>,
    pub coefficients: Vec<f64>,
    pub residual: f64,
    /// `(t, y)`, decreasing `t`.
    pub samples: Vec<(f64, f64)>,
    pub resolved: bool,
}

fn fit(samples: &[(f64, f64)], powers: &[f64]) -> (Vec<f64>, f64) {
    let k = powers.len().min(samples.len()).max(1);
    let rows: Vec<Vec<f64>> = samples
        .iter()
        .map(|&(t, _)| powers[..k].iter().map(|&p| t.powf(p)).collect())
        .collect();
    let y: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let f = least_squares(&rows, &y);
    (f.coefficients, f.rms)
}

/// Fit `Σ a_k t^{p_k}` and report `a₀`.
///
/// The error estimate adds the shift of `a₀` when the largest `t` is dropped,
/// the shift when the highest power is dropped, and the fit residual.
pub fn extrapolate_with(samples: &[(f64, f64)], powers: &[f64]) -> ExtrapolationResult {
    assert!(samples.len() >= 2, "need at least two samples");
    assert!(
        !powers.is_empty() && powers[0] == 0.0,
        "model must start with a constant"
    );
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
    let k = powers.len().min(sorted.len());
    let (coefficients, residual) = fit(&sorted, &powers[..k]);
    let (drop_sample, _) = fit(&sorted[1..], &powers[..k.min(sorted.len() - 1)]);
    let value = coefficients[0];
    let order_shift = if k > 1 {
        (value - fit(&sorted, &powers[..k - 1]).0[0]).abs()
    } else {
        0.0
    };
    let scale = sorted.iter().map(|s| s.1.abs()).fold(0.0, f64::max);
    let error_estimate = (value - drop_sample[0]).abs() + order_shift + residual + 1e-14 * scale;
    let resolved = error_estimate <= 0.05 * value.abs().max(scale) + 1e-10 * (1.0 + scale);
    ExtrapolationResult {
        value,
        error_estimate,
        powers: powers[..k].to_vec(),
        coefficients,
        residual,
        samples: sorted,
        resolved,
    }
}

pub fn extrapolate(samples: &[(f64, f64)]) -> ExtrapolationResult {
    extrapolate_with(samples, &DEFAULT_POWERS)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TS: [f64; 5] = [0.1, 0.05, 0.025, 0.0125, 0.00625];

    fn samples(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        TS.iter().map(|&t| (t, f(t))).collect()
    }

    #[test]
    fn exact_models_are_recovered() {
        let r = extrapolate_with(
            &samples(|t| 2.0 - 0.3 * t.sqrt() + 4.0 * t),
            &half_powers(4),
        );
        assert!((r.value - 2.0).abs() < 1e-12);
        assert!(r.resolved);
        let r = extrapolate(&samples(|t| 2.0 - 0.3 * t + 4.0 * t * t));
        assert!((r.value - 2.0).abs() < 1e-12);
        assert!(r.error_estimate < 1e-10);
    }

    #[test]
    fn error_bounds_last_difference_and_flags_oscillation() {
        let r = extrapolate_with(&samples(|t| 1.0 + t * t.ln()), &half_powers(3));
        let (d, _) = fit(&r.samples[1..], &half_powers(3));
        assert!(r.error_estimate >= (r.value - d[0]).abs());
        assert!(!extrapolate(&samples(|t| (1.0 / t).sin())).resolved);
    }
}
