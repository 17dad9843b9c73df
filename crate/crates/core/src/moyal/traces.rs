use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::moyal::phase::PhaseFunction;
use crate::numeric::pairwise_sum;
use crate::torus::C64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelTraceResult {
    pub t: f64,
    pub d: usize,
    pub value: f64,
    /// Grid-refinement difference.
    pub error: f64,
}

impl KernelTraceResult {
    /// `t^d·value`, which should equal `∫f`.
    pub fn scaled(&self) -> f64 {
        self.t.powi(self.d as i32) * self.value
    }
}

/// `τ(b(f)) = f̂(0)`.
pub fn weyl_trace(f: &PhaseFunction) -> C64 {
    f.hat()[f.origin_index()]
}

/// Trapezoid rule for `∫_R e^{-ty²/2}dy` at two step sizes.
fn gaussian_line_integral(t: f64) -> (f64, f64) {
    let reach = (80.0 / t).sqrt();
    let rule = |step: f64| {
        let m = (reach / step).ceil() as i64;
        let terms: Vec<f64> = (-m..=m)
            .map(|k| (-0.5 * t * (k as f64 * step).powi(2)).exp())
            .collect();
        pairwise_sum(&terms) * step
    };
    let s = 0.5 / t.sqrt();
    let fine = rule(s);
    (fine, (fine - rule(2.0 * s)).abs())
}

/// `h^{2d} Σ f` on the grid and on the grid of every other node.
fn direct_integral(f: &PhaseFunction) -> (f64, f64) {
    let n = f.points();
    let axes = 2 * f.d();
    let mut fine = Vec::with_capacity(f.values().len());
    let mut coarse = Vec::new();
    for (idx, v) in f.values().iter().enumerate() {
        fine.push(v.re);
        let mut rest = idx;
        if (0..axes).all(|_| {
            let even = (rest % n).is_multiple_of(2);
            rest /= n;
            even
        }) {
            coarse.push(v.re);
        }
    }
    let h = f.spacing().powi(axes as i32);
    let a = pairwise_sum(&fine) * h;
    let b = pairwise_sum(&coarse) * h * 2f64.powi(axes as i32);
    (a, (a - b).abs())
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveTime(t))
    }
}

fn assemble(f: &PhaseFunction, t: f64, fhat0: f64, fhat_err: f64) -> KernelTraceResult {
    let axes = 2 * f.d() as i32;
    let (g, g_err) = gaussian_line_integral(t);
    let gauss = g.powi(axes);
    let gauss_err = axes as f64 * g.powi(axes - 1) * g_err;
    KernelTraceResult {
        t,
        d: f.d(),
        value: fhat0 * gauss,
        error: fhat_err * gauss + fhat0.abs() * gauss_err,
    }
}

/// `Tr(M_f T_t) = ∫ f̂(0)e^{-t|y|²/2}dy`, with `f̂(0)` by direct spatial quadrature.
pub fn classical_heat_trace(f: &PhaseFunction, t: f64) -> Result<KernelTraceResult> {
    check_time(t)?;
    let (int, err) = direct_integral(f);
    let c = TAU.powi(f.d() as i32);
    Ok(assemble(f, t, int / c, err / c))
}

/// Diagonal of the noncommutative heat kernel, `f̂(0)e^{-t|x|²/2}`, integrated;
/// `f̂(0)` is read from the transform.
pub fn nc_heat_trace(f: &PhaseFunction, t: f64) -> Result<KernelTraceResult> {
    check_time(t)?;
    let (_, err) = direct_integral(f);
    Ok(assemble(
        f,
        t,
        weyl_trace(f).re,
        err / TAU.powi(f.d() as i32),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moyal::product::twisted_product;
    use std::f64::consts::PI;

    fn g1() -> PhaseFunction {
        PhaseFunction::gaussian(1, 12.0, 256, &[0.0, 0.0], 1.0, C64::new(1.0, 0.0)).unwrap()
    }

    #[test]
    fn gaussian_trace_is_one() {
        assert!((weyl_trace(&g1()) - C64::new(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn odd_function_has_zero_trace() {
        let f = PhaseFunction::from_fn(1, 12.0, 128, |x| {
            C64::new(x[0] * (-0.5 * (x[0] * x[0] + x[1] * x[1])).exp(), 0.0)
        })
        .unwrap();
        assert!(weyl_trace(&f).norm() < 1e-14);
        assert!(nc_heat_trace(&f, 0.1).unwrap().value.abs() < 1e-12);
    }

    #[test]
    fn classical_value() {
        let r = classical_heat_trace(&g1(), 0.1).unwrap();
        assert!((r.value - 20.0 * PI).abs() < 1e-9 * r.value);
        assert!(r.error < 1e-6 * r.value);
        for t in [0.05, 0.1, 0.2] {
            let c = classical_heat_trace(&g1(), t).unwrap();
            let q = nc_heat_trace(&g1(), t).unwrap();
            assert!((c.scaled() - 2.0 * PI).abs() < 1e-8);
            assert!((c.value - q.value).abs() <= 1e-6 * c.value);
        }
        assert!(classical_heat_trace(&g1(), 0.0).is_err());
    }

    #[test]
    fn linear_in_f() {
        let f = g1();
        let g =
            PhaseFunction::gaussian(1, 12.0, 256, &[1.0, -0.5], 0.7, C64::new(0.3, 0.0)).unwrap();
        let sum = classical_heat_trace(&f.add(&g).unwrap(), 0.2)
            .unwrap()
            .value;
        let parts = classical_heat_trace(&f, 0.2).unwrap().value
            + classical_heat_trace(&g, 0.2).unwrap().value;
        assert!((sum - parts).abs() < 1e-10 * sum);
    }

    #[test]
    fn d2_gaussian() {
        let f = PhaseFunction::gaussian(2, 12.0, 32, &[0.0; 4], 1.0, C64::new(1.0, 0.0)).unwrap();
        let t: f64 = 0.1;
        let r = nc_heat_trace(&f, t).unwrap();
        let want = t.powi(-2) * TAU.powi(2) * weyl_trace(&f).re;
        assert!((r.value - want).abs() < 1e-9 * want);
        assert!((r.scaled() - TAU.powi(2)).abs() < 1e-9);
    }

    #[test]
    fn trace_property_and_positivity() {
        let f =
            PhaseFunction::gaussian(1, 12.0, 128, &[0.7, -0.2], 1.0, C64::new(1.0, 0.5)).unwrap();
        let g =
            PhaseFunction::gaussian(1, 12.0, 128, &[-0.3, 0.4], 0.8, C64::new(0.2, -1.0)).unwrap();
        let fg = weyl_trace(&twisted_product(&f, &g).unwrap());
        let gf = weyl_trace(&twisted_product(&g, &f).unwrap());
        assert!((fg - gf).norm() < 1e-8);
        let p = weyl_trace(&twisted_product(&f, &f.involution()).unwrap());
        assert!(p.re > 0.0 && p.im.abs() < 1e-12);
    }
}
