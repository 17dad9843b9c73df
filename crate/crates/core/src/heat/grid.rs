use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::BasisWindow;

/// Geometric grid `t_k = t_max·ρ^k`, `k = 0..points`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TGrid {
    pub t_max: f64,
    pub ratio: f64,
    pub points: usize,
}

impl TGrid {
    pub fn new(t_max: f64, ratio: f64, points: usize) -> Result<Self> {
        if t_max.is_nan()
            || t_max <= 0.0
            || ratio.is_nan()
            || ratio <= 0.0
            || ratio >= 1.0
            || points < 2
        {
            return Err(Error::InvalidParameter(format!(
                "t-grid needs t_max > 0, ratio in (0,1), points >= 2 (got {t_max}, {ratio}, {points})"
            )));
        }
        Ok(Self {
            t_max,
            ratio,
            points,
        })
    }

    /// Default for matrix-backed traces at `N = 48`.
    pub fn matrix_default() -> Self {
        Self {
            t_max: 0.16,
            ratio: std::f64::consts::FRAC_1_SQRT_2,
            points: 5,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.points)
            .map(|k| self.t_max * self.ratio.powi(k as i32))
            .collect()
    }

    pub fn t_min(&self) -> f64 {
        self.t_max * self.ratio.powi(self.points as i32 - 1)
    }

    /// Truncation adequacy: `e^{-N² t_min / 2} < 1e-16`.
    pub fn check_window(&self, window: BasisWindow) -> Result<()> {
        let n = window.cutoff() as f64;
        if (-n * n * self.t_min() / 2.0).exp() < 1e-16 {
            Ok(())
        } else {
            Err(Error::InadequateWindow {
                n: window.cutoff(),
                t_min: self.t_min(),
            })
        }
    }
}
