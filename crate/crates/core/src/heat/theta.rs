use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;

/// `sin²(π x)`, exact at multiples of ½.
pub fn sin_sq_pi(x: f64) -> f64 {
    let f = x.rem_euclid(1.0);
    let s = if f == 0.0 {
        0.0
    } else if f == 0.5 {
        1.0
    } else {
        (std::f64::consts::PI * f).sin()
    };
    s * s
}

fn cutoff(t: f64) -> u64 {
    (80.0 / t).sqrt().ceil() as u64 + 1
}

/// `(Σ_{m∈Z} e^{-m²t/2}, Σ_{n≥1} sin²(πθn) e^{-n²t/2})`, tails below `e^{-40}`.
pub fn theta_sums(theta: f64, t: f64) -> Result<(f64, f64)> {
    if t <= 0.0 {
        return Err(Error::NonPositiveTime(t));
    }
    let k = cutoff(t);
    let gauss: Vec<f64> = (1..=k)
        .map(|n| (-(n as f64).powi(2) * t / 2.0).exp())
        .collect();
    let full = 1.0 + 2.0 * pairwise_sum(&gauss);
    let weighted: Vec<f64> = gauss
        .iter()
        .enumerate()
        .map(|(i, g)| sin_sq_pi(theta * (i + 1) as f64) * g)
        .collect();
    Ok((full, pairwise_sum(&weighted)))
}

/// `√t·Σ_{m≥1} e^{-m²t/2}`, which tends to `√(π/2)`.
pub fn connes_sum(t: f64) -> Result<f64> {
    let (full, _) = theta_sums(0.5, t)?;
    Ok(t.sqrt() * (full - 1.0) / 2.0)
}

/// Mean of `sin²(π{kθ})` over `k = 1..=⌊√(2/t)⌋`.
pub fn equidistribution_check(theta: f64, t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 2.0) {
        return Err(Error::InvalidParameter(format!(
            "t must lie in (0,2), got {t}"
        )));
    }
    let k = (2.0 / t).sqrt().floor() as u64;
    let vals: Vec<f64> = (1..=k).map(|j| sin_sq_pi(theta * j as f64)).collect();
    Ok(pairwise_sum(&vals) / k as f64)
}
