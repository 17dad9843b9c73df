use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operators::build::build_lindbladian;
use crate::operators::window::BasisWindow;
use crate::torus::TorusElement;

const SPECTRUM_GAP: f64 = 1e-8;

/// Trace norm of `(L−z)⁻¹ − (L₀−z)⁻¹` at each window.
pub fn resolvent_difference_trace_norm(
    r1: &TorusElement,
    r2: &TorusElement,
    z: C64,
    windows: &[usize],
) -> Result<Vec<f64>> {
    let zero = r1.zero_like();
    windows
        .par_iter()
        .map(|&n| {
            let win = BasisWindow::new(n);
            let l = build_lindbladian(r1, r2, win)?;
            let l0 = build_lindbladian(&zero, &zero, win)?;
            let spec = l.spectrum()?;
            let gap = |mu: f64| (C64::new(mu, 0.0) - z).norm();
            let min_gap = spec
                .eigenvalues()
                .into_iter()
                .chain(l0.matrix().diagonal().iter().map(|c| c.re))
                .map(gap)
                .fold(f64::INFINITY, f64::min);
            if min_gap < SPECTRUM_GAP * (1.0 + z.norm()) {
                return Err(Error::NearSpectrum(z));
            }
            let diag0 = l0.matrix().diagonal();
            let total: f64 = spec
                .blocks()
                .iter()
                .map(|b| {
                    let k = b.indices.len();
                    let inv = DMatrix::from_fn(k, k, |i, j| {
                        if i == j {
                            C64::new(1.0, 0.0) / (C64::new(b.values[i], 0.0) - z)
                        } else {
                            C64::default()
                        }
                    });
                    let mut d = &b.vectors * inv * b.vectors.adjoint();
                    for (a, &i) in b.indices.iter().enumerate() {
                        d[(a, a)] -= C64::new(1.0, 0.0) / (diag0[i] - z);
                    }
                    d.singular_values().iter().sum::<f64>()
                })
                .sum();
            Ok(total)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_element;

    const TH: f64 = 0.37;

    #[test]
    fn unperturbed_difference_vanishes() {
        let z = TorusElement::zero(TH).unwrap();
        let v = resolvent_difference_trace_norm(&z, &z, C64::new(10.0, 0.0), &[4, 8]).unwrap();
        assert!(v.iter().all(|&x| x < 1e-14));
    }

    #[test]
    fn conjugate_point_gives_same_norm() {
        let r = parse_element("U+U^-1", TH).unwrap();
        let z = TorusElement::zero(TH).unwrap();
        let p = C64::new(-3.0, 2.0);
        let a = resolvent_difference_trace_norm(&r, &z, p, &[6]).unwrap();
        let b = resolvent_difference_trace_norm(&r, &z, p.conj(), &[6]).unwrap();
        assert!((a[0] - b[0]).abs() < 1e-12);
    }

    #[test]
    fn point_on_spectrum_is_rejected() {
        let z = TorusElement::zero(TH).unwrap();
        let r = parse_element("U+U^-1", TH).unwrap();
        let res = resolvent_difference_trace_norm(&r, &z, C64::new(-0.5, 0.0), &[3]);
        assert!(matches!(res, Err(Error::NearSpectrum(_))));
    }
}
