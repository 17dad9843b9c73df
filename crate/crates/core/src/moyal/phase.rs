use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::torus::C64;

pub const DEFAULT_HALF_WIDTH: f64 = 12.0;
pub const DEFAULT_POINTS: usize = 256;
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Samples of `f` on `[−L, L)^{2d}` together with `f̂(ξ) = (2π)^{-d}∫f(x)e^{-iξ·x}dx`.
///
/// Spatial nodes `x_j = −L + jh`, `h = 2L/n`; frequencies `k_q = (q − n/2)π/L`.
/// Both arrays are row-major with axis 0 slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseFunction {
    d: usize,
    half_width: f64,
    n: usize,
    values: Vec<C64>,
    hat: Vec<C64>,
}

fn check_shape(d: usize, half_width: f64, n: usize) -> Result<()> {
    if d == 0 || d > 3 {
        return Err(Error::InvalidParameter(format!("d = {d} not in 1..=3")));
    }
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(Error::InvalidParameter(format!("half width {half_width}")));
    }
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "{n} points per axis; need a power of two ≥ 4"
        )));
    }
    Ok(())
}

fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Unnormalized DFT along every axis with the `(−1)^j`, `(−1)^{q−n/2}` centring.
fn transform(data: &mut [C64], n: usize, axes: usize, forward: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let fft = if forward {
        planner.plan_fft_forward(n)
    } else {
        planner.plan_fft_inverse(n)
    };
    let half = n / 2;
    let mut line = vec![C64::default(); n];
    for axis in 0..axes {
        let stride = n.pow((axes - 1 - axis) as u32);
        let block = stride * n;
        for start in 0..data.len() / n {
            let (outer, inner) = (start / stride, start % stride);
            let base = outer * block + inner;
            for (j, v) in line.iter_mut().enumerate() {
                *v = data[base + j * stride] * sign(j);
            }
            fft.process(&mut line);
            for (q, v) in line.iter().enumerate() {
                data[base + q * stride] = v * sign(q + half);
            }
        }
    }
}

impl PhaseFunction {
    pub fn from_values(d: usize, half_width: f64, n: usize, values: Vec<C64>) -> Result<Self> {
        check_shape(d, half_width, n)?;
        if values.len() != n.pow(2 * d as u32) {
            return Err(Error::GridMismatch(format!(
                "{} samples for n = {n}, d = {d}",
                values.len()
            )));
        }
        let mut hat = values.clone();
        transform(&mut hat, n, 2 * d, true);
        let h = 2.0 * half_width / n as f64;
        let c = h.powi(2 * d as i32) / TAU.powi(d as i32);
        hat.iter_mut().for_each(|v| *v *= c);
        Ok(Self {
            d,
            half_width,
            n,
            values,
            hat,
        })
    }

    pub fn from_hat(d: usize, half_width: f64, n: usize, hat: Vec<C64>) -> Result<Self> {
        check_shape(d, half_width, n)?;
        if hat.len() != n.pow(2 * d as u32) {
            return Err(Error::GridMismatch(format!(
                "{} modes for n = {n}, d = {d}",
                hat.len()
            )));
        }
        let mut values = hat.clone();
        transform(&mut values, n, 2 * d, false);
        let dk = PI / half_width;
        let c = dk.powi(2 * d as i32) / TAU.powi(d as i32);
        values.iter_mut().for_each(|v| *v *= c);
        Ok(Self {
            d,
            half_width,
            n,
            values,
            hat,
        })
    }

    pub fn from_fn(d: usize, half_width: f64, n: usize, f: impl Fn(&[f64]) -> C64) -> Result<Self> {
        check_shape(d, half_width, n)?;
        let size = n.pow(2 * d as u32);
        let h = 2.0 * half_width / n as f64;
        let mut x = vec![0.0; 2 * d];
        let values = (0..size)
            .map(|idx| {
                let mut rest = idx;
                for a in (0..2 * d).rev() {
                    x[a] = -half_width + (rest % n) as f64 * h;
                    rest /= n;
                }
                f(&x)
            })
            .collect();
        Self::from_values(d, half_width, n, values)
    }

    /// `c·e^{-|x − x₀|²/(2σ²)}`.
    pub fn gaussian(
        d: usize,
        half_width: f64,
        n: usize,
        center: &[f64],
        sigma: f64,
        c: C64,
    ) -> Result<Self> {
        if center.len() != 2 * d {
            return Err(Error::InvalidParameter(format!(
                "center needs {} coordinates",
                2 * d
            )));
        }
        Self::from_fn(d, half_width, n, |x| {
            let r2: f64 = x.iter().zip(center).map(|(a, b)| (a - b).powi(2)).sum();
            c * (-0.5 * r2 / (sigma * sigma)).exp()
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn frequency_spacing(&self) -> f64 {
        PI / self.half_width
    }

    pub fn node(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    pub fn frequency(&self, q: usize) -> f64 {
        (q as f64 - (self.n / 2) as f64) * self.frequency_spacing()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn hat(&self) -> &[C64] {
        &self.hat
    }

    pub fn same_grid(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.n != other.n || self.half_width != other.half_width {
            return Err(Error::GridMismatch(format!(
                "(d, L, n) = ({}, {}, {}) vs ({}, {}, {})",
                self.d, self.half_width, self.n, other.d, other.half_width, other.n
            )));
        }
        Ok(())
    }

    /// Flat index of the zero frequency.
    pub fn origin_index(&self) -> usize {
        (0..2 * self.d).fold(0, |acc, _| acc * self.n + self.n / 2)
    }

    /// `h^{2d} Σ f`.
    pub fn integral(&self) -> C64 {
        let s: C64 = self.values.iter().sum();
        s * self.spacing().powi(2 * self.d as i32)
    }

    /// Largest `|f|` on the outermost grid layer, relative to `max |f|`.
    pub fn boundary_mass(&self) -> f64 {
        let n = self.n;
        let mut edge: f64 = 0.0;
        let mut peak: f64 = 0.0;
        for (idx, v) in self.values.iter().enumerate() {
            let a = v.norm();
            peak = peak.max(a);
            let mut rest = idx;
            let on_edge = (0..2 * self.d).any(|_| {
                let j = rest % n;
                rest /= n;
                j == 0 || j == n - 1
            });
            if on_edge {
                edge = edge.max(a);
            }
        }
        if peak == 0.0 {
            0.0
        } else {
            edge / peak
        }
    }

    pub fn check_support(&self) -> Result<()> {
        let b = self.boundary_mass();
        if b >= BOUNDARY_TOL {
            return Err(Error::InvalidParameter(format!(
                "boundary mass {b:.2e} ≥ {BOUNDARY_TOL:e}: enlarge the box"
            )));
        }
        Ok(())
    }

    /// Relative error of transforming forward and back.
    pub fn roundtrip_error(&self) -> f64 {
        let back = Self::from_hat(self.d, self.half_width, self.n, self.hat.clone())
            .expect("shape checked");
        let num: f64 = back
            .values
            .iter()
            .zip(&self.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let den: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        if den == 0.0 {
            num.sqrt()
        } else {
            (num / den).sqrt()
        }
    }

    /// `f^♮ = f̄`, so that `b(f)* = b(f^♮)`.
    pub fn involution(&self) -> Self {
        let values = self.values.iter().map(|v| v.conj()).collect();
        Self::from_values(self.d, self.half_width, self.n, values).expect("same shape")
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * c).collect(),
            hat: self.hat.iter().map(|v| v * c).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        Ok(Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
            hat: self
                .hat
                .iter()
                .zip(&other.hat)
                .map(|(a, b)| a + b)
                .collect(),
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Pointwise product `f·g`.
    pub fn pointwise(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Self::from_values(self.d, self.half_width, self.n, values)
    }

    /// `(h^{2d} Σ |f|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (s * self.spacing().powi(2 * self.d as i32)).sqrt()
    }

    /// `max |f − g|` over the grid.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for PhaseFunction {
    /// `phase d=<d> L=<L> n=<n>`, then one `re im` line per sample, row-major.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "phase d={} L={} n={}", self.d, self.half_width, self.n)?;
        for v in &self.values {
            writeln!(f, "{} {}", v.re, v.im)?;
        }
        Ok(())
    }
}

impl FromStr for PhaseFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let mut f = header.split_whitespace();
        if f.next() != Some("phase") {
            return Err(Error::Parse("expected `phase` header".into()));
        }
        let mut field = |key: &str| -> Result<&str> {
            f.next()
                .and_then(|t| t.strip_prefix(key))
                .ok_or_else(|| Error::Parse(format!("missing `{key}`")))
        };
        let bad = |k: &str| Error::Parse(format!("bad {k}"));
        let d: usize = field("d=")?.parse().map_err(|_| bad("d"))?;
        let l: f64 = field("L=")?.parse().map_err(|_| bad("L"))?;
        let n: usize = field("n=")?.parse().map_err(|_| bad("n"))?;
        let values = lines
            .enumerate()
            .map(|(i, line)| {
                let mut it = line.split_whitespace().map(str::parse::<f64>);
                match (it.next(), it.next(), it.next()) {
                    (Some(Ok(re)), Some(Ok(im)), None) => Ok(C64::new(re, im)),
                    _ => Err(Error::Parse(format!("sample {i}: expected `re im`"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(d, l, n, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(d: usize, n: usize) -> PhaseFunction {
        PhaseFunction::gaussian(
            d,
            DEFAULT_HALF_WIDTH,
            n,
            &vec![0.0; 2 * d],
            1.0,
            C64::new(1.0, 0.0),
        )
        .unwrap()
    }

    #[test]
    fn gaussian_hat_is_gaussian() {
        let g = gauss(1, 128);
        assert!((g.hat()[g.origin_index()] - C64::new(1.0, 0.0)).norm() < 1e-13);
        for q in [40, 64, 70, 90] {
            for p in [60, 64, 66] {
                let (k1, k2) = (g.frequency(q), g.frequency(p));
                let want = (-0.5 * (k1 * k1 + k2 * k2)).exp();
                assert!((g.hat()[q * 128 + p] - want).norm() < 1e-13);
            }
        }
        assert!(g.boundary_mass() < BOUNDARY_TOL);
        assert!(g.roundtrip_error() < 1e-13);
    }

    #[test]
    fn shifted_gaussian_picks_up_phase() {
        let g =
            PhaseFunction::gaussian(1, 12.0, 64, &[1.5, -0.5], 1.0, C64::new(1.0, 0.0)).unwrap();
        let (q, p) = (35, 30);
        let (k1, k2) = (g.frequency(q), g.frequency(p));
        let want = C64::from_polar((-0.5 * (k1 * k1 + k2 * k2)).exp(), -(1.5 * k1 - 0.5 * k2));
        assert!((g.hat()[q * 64 + p] - want).norm() < 1e-13);
    }

    #[test]
    fn two_dimensional_phase_space() {
        let g = gauss(2, 32);
        assert!((g.hat()[g.origin_index()] - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(g.roundtrip_error() < 1e-12);
    }

    #[test]
    fn shape_errors() {
        assert!(PhaseFunction::from_values(1, 12.0, 100, vec![]).is_err());
        assert!(PhaseFunction::from_values(1, 12.0, 8, vec![C64::default(); 10]).is_err());
        assert!(PhaseFunction::from_values(0, 12.0, 8, vec![]).is_err());
        let wide =
            PhaseFunction::gaussian(1, 2.0, 16, &[0.0, 0.0], 1.0, C64::new(1.0, 0.0)).unwrap();
        assert!(wide.check_support().is_err());
        assert!(gauss(1, 16).same_grid(&gauss(1, 32)).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let g = PhaseFunction::gaussian(1, 6.0, 8, &[0.3, 0.0], 0.8, C64::new(1.0, -0.5)).unwrap();
        let back: PhaseFunction = g.to_string().parse().unwrap();
        assert_eq!(back.values(), g.values());
        assert!("phase d=1 L=1 n=4\n1 2 3\n"
            .parse::<PhaseFunction>()
            .is_err());
        assert!("grid d=1".parse::<PhaseFunction>().is_err());
    }
}
