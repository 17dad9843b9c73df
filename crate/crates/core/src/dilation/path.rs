use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Two independent Brownian motions sampled on a uniform grid, starting at 0.
#[derive(Clone, Debug, PartialEq)]
pub struct BrownianPath {
    pub horizon: f64,
    pub steps: usize,
    pub seed: u64,
    pub index: u64,
    pub w1: Vec<f64>,
    pub w2: Vec<f64>,
}

/// Generator for path `index` of the stream family `seed`.
pub fn path_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn sample_brownian(horizon: f64, steps: usize, seed: u64) -> Result<BrownianPath> {
    sample_brownian_indexed(horizon, steps, seed, 0)
}

pub fn sample_brownian_indexed(
    horizon: f64,
    steps: usize,
    seed: u64,
    index: u64,
) -> Result<BrownianPath> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::NonPositiveTime(horizon));
    }
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be ≥ 1".into()));
    }
    let mut rng = path_rng(seed, index);
    let sd = (horizon / steps as f64).sqrt();
    let mut w1 = Vec::with_capacity(steps + 1);
    let mut w2 = Vec::with_capacity(steps + 1);
    let (mut a, mut b) = (0.0, 0.0);
    w1.push(a);
    w2.push(b);
    for _ in 0..steps {
        a += sd * rng.sample::<f64, _>(StandardNormal);
        b += sd * rng.sample::<f64, _>(StandardNormal);
        w1.push(a);
        w2.push(b);
    }
    Ok(BrownianPath {
        horizon,
        steps,
        seed,
        index,
        w1,
        w2,
    })
}

impl BrownianPath {
    pub fn step(&self) -> f64 {
        self.horizon / self.steps as f64
    }

    /// `(w₁(t), w₂(t))`; linear between grid points.
    pub fn at(&self, t: f64) -> Result<(f64, f64)> {
        if !(0.0..=self.horizon * (1.0 + 1e-12)).contains(&t) {
            return Err(Error::InvalidParameter(format!(
                "t = {t} outside [0, {}]",
                self.horizon
            )));
        }
        let s = (t / self.step()).min(self.steps as f64);
        let k = (s.floor() as usize).min(self.steps - 1);
        let f = s - k as f64;
        let lerp = |w: &[f64]| w[k] + f * (w[k + 1] - w[k]);
        Ok((lerp(&self.w1), lerp(&self.w2)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_distinct() {
        let a = sample_brownian(1.0, 16, 7).unwrap();
        assert_eq!(a, sample_brownian(1.0, 16, 7).unwrap());
        assert_ne!(a.w1, sample_brownian_indexed(1.0, 16, 7, 1).unwrap().w1);
        assert_eq!(a.at(0.0).unwrap(), (0.0, 0.0));
        assert_eq!(a.at(1.0).unwrap(), (a.w1[16], a.w2[16]));
        assert!(a.at(1.5).is_err());
    }

    #[test]
    fn invalid_sizes() {
        assert!(sample_brownian(0.0, 4, 1).is_err());
        assert!(sample_brownian(1.0, 0, 1).is_err());
    }

    #[test]
    fn endpoint_statistics() {
        let (t, m) = (0.7, 100_000);
        let ends: Vec<(f64, f64)> = (0..m)
            .map(|i| sample_brownian_indexed(t, 4, 3, i).unwrap().at(t).unwrap())
            .collect();
        let mf = m as f64;
        let mean1 = ends.iter().map(|e| e.0).sum::<f64>() / mf;
        let var1 = ends.iter().map(|e| e.0 * e.0).sum::<f64>() / mf;
        let cov = ends.iter().map(|e| e.0 * e.1).sum::<f64>() / mf;
        // Var(w²) = 2t², Var(w₁w₂) = t²
        assert!((var1 - t).abs() < 3.0 * (2.0f64).sqrt() * t / mf.sqrt());
        assert!(cov.abs() < 3.0 * t / mf.sqrt());
        assert!(mean1.abs() < 3.0 * (t / mf).sqrt());
    }
}
