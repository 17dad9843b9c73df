use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::operators::build::{from_vector, to_vector};
use crate::operators::matrix::OperatorMatrix;
use crate::torus::TorusElement;

pub fn eig_hermitian(m: &OperatorMatrix) -> Result<&crate::operators::Spectrum> {
    m.spectrum()
}

/// `Tr e^{tL}`.
pub fn heat_trace(l: &OperatorMatrix, t: f64) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::NonPositiveTime(t));
    }
    Ok(l.spectrum()?.trace_fn(|mu| (t * mu).exp()))
}

/// `e^{tL} x`.
pub fn heat_apply(l: &OperatorMatrix, t: f64, x: &TorusElement) -> Result<TorusElement> {
    if t < 0.0 {
        return Err(Error::NonPositiveTime(t));
    }
    let win = l.window();
    let v = to_vector(x, win)?;
    if t == 0.0 {
        return Ok(x.clone());
    }
    let y = l
        .spectrum()?
        .apply_fn(|mu| C64::new((t * mu).exp(), 0.0), &v);
    Ok(from_vector(&y, win, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_element;
    use crate::operators::{build_lindbladian, BasisWindow, SparseMatrix};
    use proptest::prelude::*;

    const TH: f64 = 0.37;

    fn zero() -> TorusElement {
        TorusElement::zero(TH).unwrap()
    }

    #[test]
    fn eig_small_cases() {
        let win = BasisWindow::new(0);
        let d = OperatorMatrix::new(win, SparseMatrix::from_diagonal(&[C64::new(3.0, 0.0)]));
        assert_eq!(eig_hermitian(&d).unwrap().eigenvalues(), vec![3.0]);
        let one = C64::new(1.0, 0.0);
        let swap = SparseMatrix::from_triplets(2, 2, [(0, 1, one), (1, 0, one)]);
        let win2 = BasisWindow::new(0);
        let m = OperatorMatrix::new(win2, swap);
        let ev = m.spectrum().unwrap().eigenvalues();
        assert!((ev[0] + 1.0).abs() < 1e-15 && (ev[1] - 1.0).abs() < 1e-15);
        let bad = SparseMatrix::from_triplets(2, 2, [(0, 1, one)]);
        assert!(OperatorMatrix::new(win2, bad).spectrum().is_err());
    }

    #[test]
    fn diagonal_spectrum_is_sorted() {
        let win = BasisWindow::new(2);
        let l0 = build_lindbladian(&zero(), &zero(), win).unwrap();
        let ev = l0.spectrum().unwrap().eigenvalues();
        assert!(ev.windows(2).all(|p| p[0] <= p[1]));
        assert_eq!(ev[ev.len() - 1], 0.0);
        assert_eq!(ev[0], -4.0);
    }

    #[test]
    fn heat_trace_of_l0_is_theta_square() {
        let n = 10;
        let l0 = build_lindbladian(&zero(), &zero(), BasisWindow::new(n)).unwrap();
        let mut prev = f64::INFINITY;
        for t in [0.05, 0.1, 0.3, 1.0, 3.0] {
            let s: f64 = (-(n as i64)..=n as i64)
                .map(|m| (-(m * m) as f64 * t / 2.0).exp())
                .sum();
            let tr = heat_trace(&l0, t).unwrap();
            assert!((tr - s * s).abs() < 1e-12 * s * s);
            assert!(tr < prev);
            prev = tr;
        }
        assert!((heat_trace(&l0, 200.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(heat_trace(&l0, 0.0).is_err());
    }

    #[test]
    fn heat_apply_on_monomials() {
        let win = BasisWindow::new(4);
        let l0 = build_lindbladian(&zero(), &zero(), win).unwrap();
        let x = TorusElement::monomial(TH, 2, -1, C64::new(1.0, 0.0)).unwrap();
        let y = heat_apply(&l0, 0.4, &x).unwrap();
        assert!((y.get(2, -1).re - (-0.4 * 5.0 / 2.0f64).exp()).abs() < 1e-15);
        assert_eq!(heat_apply(&l0, 0.0, &x).unwrap(), x);
        let far = TorusElement::monomial(TH, 9, 0, C64::new(1.0, 0.0)).unwrap();
        assert!(matches!(
            heat_apply(&l0, 0.1, &far),
            Err(Error::OutsideWindow(..))
        ));
    }

    #[test]
    fn random_hermitian_reconstruction() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let win = BasisWindow::new(5);
        let n = win.dim();
        let mut t = Vec::new();
        for i in 0..n {
            for j in i..n {
                if rng.random::<f64>() < 0.05 || i == j {
                    let v = C64::new(
                        rng.random::<f64>() - 0.5,
                        if i == j {
                            0.0
                        } else {
                            rng.random::<f64>() - 0.5
                        },
                    );
                    t.push((i, j, v));
                    if i != j {
                        t.push((j, i, v.conj()));
                    }
                }
            }
        }
        let m = OperatorMatrix::new(win, SparseMatrix::from_triplets(n, n, t));
        let s = m.spectrum().unwrap();
        assert!(s.reconstruction_residual(m.matrix()) <= 1e-10 * m.matrix().max_abs());
        assert!(s.orthogonality_defect() <= 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn perturbed_semigroup_contracts(a in -0.5..0.5f64, b in -0.5..0.5f64, c in -0.5..0.5f64) {
            let r1 = parse_element(&format!("{a}*(U+U^-1) + {c}*V"), TH).unwrap();
            let r1 = (&r1 + &r1.adjoint()).scale_re(0.5);
            let r2 = parse_element(&format!("{b}*(V+V^-1)"), TH).unwrap();
            let win = BasisWindow::new(6);
            let l = build_lindbladian(&r1, &r2, win).unwrap();
            let s = l.spectrum().unwrap();
            prop_assert!(s.eigenvalues().last().copied().unwrap() <= 1e-12);
            let x = parse_element("1 + U - 2iV^2 + UV", TH).unwrap();
            let y = heat_apply(&l, 0.3, &x).unwrap();
            prop_assert!(y.norm() <= x.norm() * (1.0 + 1e-12));
        }
    }
}
