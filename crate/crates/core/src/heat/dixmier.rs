use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::heat::extrapolate::{extrapolate, ExtrapolationResult};
use crate::heat::grid::TGrid;
use crate::numeric::{least_squares, pairwise_sum};
use crate::operators::{
    build_dirac, build_lindbladian, left_multiplication, BasisWindow, OperatorMatrix,
};
use crate::torus::TorusElement;

pub const KERNEL_TOL: f64 = 1e-10;
pub const DEFAULT_SHIFTS: [f64; 2] = [-1.0, -4.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogSlope {
    pub value: C64,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolventEstimate {
    pub z: f64,
    pub value: C64,
    pub error: f64,
}

/// Heat-regularized and partial-sum estimates of `Tr_ω(a T⁻¹)` from one spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DixmierEstimate {
    pub heat: C64,
    pub heat_error: f64,
    pub heat_fit: [ExtrapolationResult; 2],
    pub log_average: C64,
    pub log_error: f64,
    pub gap: f64,
    pub resolvent: Vec<ResolventEstimate>,
    pub eigenvalue_count: usize,
}

fn geometric_indices(lo: usize, hi: usize, count: usize) -> Vec<usize> {
    let lo = lo.max(1);
    let ratio = (hi as f64 / lo as f64).powf(1.0 / (count - 1) as f64);
    let mut idx: Vec<usize> = (0..count)
        .map(|k| ((lo as f64 * ratio.powi(k as i32)).round() as usize).clamp(lo, hi))
        .collect();
    idx.dedup();
    idx
}

/// Slope `b` of the partial sums fitted as `S_n ≈ a + b log n + c/n` over `n ∈ [len/16, len]`.
///
/// The error is the slope change when the range is narrowed to `[len/4, len]`
/// plus two regression standard errors.
pub fn log_slope(partial: &[C64]) -> LogSlope {
    let fit = |lo: usize| {
        let idx = geometric_indices(lo, partial.len(), 200);
        let rows: Vec<Vec<f64>> = idx
            .iter()
            .map(|&i| vec![1.0, (i as f64).ln(), 1.0 / i as f64])
            .collect();
        let re: Vec<f64> = idx.iter().map(|&i| partial[i - 1].re).collect();
        let im: Vec<f64> = idx.iter().map(|&i| partial[i - 1].im).collect();
        let fr = least_squares(&rows, &re);
        let fi = least_squares(&rows, &im);
        (
            C64::new(fr.coefficients[1], fi.coefficients[1]),
            fr.stderr[1].hypot(fi.stderr[1]),
        )
    };
    let k = partial.len();
    let (wide, se_wide) = fit(k / 16);
    let (narrow, se_narrow) = fit(k / 4);
    LogSlope {
        value: wide,
        error: (wide - narrow).norm() + 2.0 * se_wide.max(se_narrow),
    }
}

fn cumulative(terms: &[C64]) -> Vec<C64> {
    let mut acc = C64::default();
    terms
        .iter()
        .map(|t| {
            acc += t;
            acc
        })
        .collect()
}

/// `Tr_ω(a T⁻¹ P)` for a positive operator `T` whose spectrum is complete below `mu_cut`.
pub fn dixmier_for_operator(
    a: &TorusElement,
    t_op: &OperatorMatrix,
    grid: &TGrid,
    shifts: &[f64],
    mu_cut: f64,
) -> Result<DixmierEstimate> {
    let win = t_op.window();
    let mult = left_multiplication(a, win);
    let lifted = if t_op.multiplicity() == 1 {
        mult
    } else {
        let z = crate::operators::SparseMatrix::zeros(win.dim(), win.dim());
        crate::operators::SparseMatrix::block2(&mult, &z, &z, &mult)
    };
    let mut pairs = t_op.spectrum()?.diagonal_expectations(&lifted);
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut re = Vec::new();
    let mut im = Vec::new();
    for t in grid.values() {
        let w: Vec<C64> = pairs
            .iter()
            .filter(|p| p.0.abs() >= KERNEL_TOL)
            .map(|p| p.1 * (-t * p.0).exp())
            .collect();
        let sr = pairwise_sum(&w.iter().map(|c| c.re).collect::<Vec<_>>());
        let si = pairwise_sum(&w.iter().map(|c| c.im).collect::<Vec<_>>());
        re.push((t, t * sr));
        im.push((t, t * si));
    }
    let fit_re = extrapolate(&re);
    let fit_im = extrapolate(&im);
    let heat = C64::new(fit_re.value, fit_im.value);
    let heat_error = fit_re.error_estimate.hypot(fit_im.error_estimate);

    let inside: Vec<&(f64, C64)> = pairs.iter().filter(|p| p.0 <= mu_cut).collect();
    let log_terms: Vec<C64> = inside
        .iter()
        .filter(|p| p.0.abs() >= KERNEL_TOL)
        .map(|p| p.1 / p.0)
        .collect();
    let log = log_slope(&cumulative(&log_terms));

    let resolvent = shifts
        .iter()
        .map(|&z| {
            let terms: Vec<C64> = inside.iter().map(|p| p.1 / (p.0 - z)).collect();
            let s = log_slope(&cumulative(&terms));
            ResolventEstimate {
                z,
                value: s.value,
                error: s.error,
            }
        })
        .collect();

    Ok(DixmierEstimate {
        heat,
        heat_error,
        heat_fit: [fit_re, fit_im],
        log_average: log.value,
        log_error: log.error,
        gap: (heat - log.value).norm(),
        resolvent,
        eigenvalue_count: log_terms.len(),
    })
}

/// `Tr_ω(a(−2L)⁻¹P)` for the Lindbladian of `(r₁, r₂)`.
pub fn dixmier_heat(
    a: &TorusElement,
    r1: &TorusElement,
    r2: &TorusElement,
    grid: &TGrid,
    window: BasisWindow,
) -> Result<DixmierEstimate> {
    grid.check_window(window)?;
    let l = build_lindbladian(r1, r2, window)?;
    let n = window.cutoff() as f64;
    dixmier_for_operator(a, &l.scale(-2.0), grid, &DEFAULT_SHIFTS, n * n)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeForm {
    pub value: C64,
    pub error: f64,
    pub blocks: [DixmierEstimate; 2],
}

/// `v(a) = ½ Tr_ω(a|D|⁻²P)` from the blocks `XX*` and `X*X` of `D²`.
pub fn volume_form(
    a: &TorusElement,
    r: &TorusElement,
    grid: &TGrid,
    window: BasisWindow,
) -> Result<VolumeForm> {
    grid.check_window(window)?;
    let d = build_dirac(r, window);
    let (xy, yx) = d.square_blocks();
    let n = window.cutoff() as f64;
    let b1 = dixmier_for_operator(
        a,
        &OperatorMatrix::new(window, xy),
        grid,
        &DEFAULT_SHIFTS,
        n * n,
    )?;
    let b2 = dixmier_for_operator(
        a,
        &OperatorMatrix::new(window, yx),
        grid,
        &DEFAULT_SHIFTS,
        n * n,
    )?;
    Ok(VolumeForm {
        value: (b1.heat + b2.heat) * 0.5,
        error: 0.5 * (b1.heat_error + b2.heat_error),
        blocks: [b1, b2],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const TH: f64 = 0.37;

    fn zero() -> TorusElement {
        TorusElement::zero(TH).unwrap()
    }

    #[test]
    fn log_slope_of_exact_logarithm() {
        let partial: Vec<C64> = (1..=4000)
            .map(|n| C64::new(2.5 * (n as f64).ln() + 1.0, 0.0))
            .collect();
        let s = log_slope(&partial);
        assert!((s.value.re - 2.5).abs() < 1e-10);
        assert!(s.error < 1e-8);
    }

    #[test]
    fn unit_density_gives_pi() {
        let one = TorusElement::one(TH).unwrap();
        let g = TGrid::matrix_default();
        let d = dixmier_heat(&one, &zero(), &zero(), &g, BasisWindow::new(48)).unwrap();
        assert!((d.heat.re - PI).abs() < 1e-3 * PI, "{}", d.heat);
        assert!(
            (d.log_average.re - PI).abs() < 0.01 * PI,
            "{}",
            d.log_average
        );
        assert!(d.gap < 0.01 * PI);
    }

    #[test]
    fn off_diagonal_density_gives_zero() {
        let a = TorusElement::monomial(TH, 2, 1, C64::new(1.0, 0.0)).unwrap();
        let g = TGrid::matrix_default();
        let d = dixmier_heat(&a, &zero(), &zero(), &g, BasisWindow::new(48)).unwrap();
        assert!(d.heat.norm() < 1e-12);
        assert!(d.log_average.norm() < 1e-12);
        let v = volume_form(&a, &zero(), &g, BasisWindow::new(48)).unwrap();
        assert!(v.value.norm() < 1e-12);
    }

    #[test]
    fn flat_volume_form_of_one() {
        let one = TorusElement::one(TH).unwrap();
        let v = volume_form(
            &one,
            &zero(),
            &TGrid::matrix_default(),
            BasisWindow::new(48),
        )
        .unwrap();
        assert!((v.value.re - PI).abs() < 0.01 * PI);
    }
}
