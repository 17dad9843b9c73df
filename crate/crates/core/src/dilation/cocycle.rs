use crate::error::{Error, Result};
use crate::torus::{DerivationSpec, TorusElement};

const SELF_ADJOINT_TOL: f64 = 1e-12;

fn pair(r1: &TorusElement, r2: &TorusElement) -> Result<[DerivationSpec; 2]> {
    r1.checked_add(r2)?;
    for r in [r1, r2] {
        if !r.is_self_adjoint(SELF_ADJOINT_TOL) {
            return Err(Error::NotSelfAdjoint(r.self_adjoint_defect()));
        }
    }
    Ok([
        DerivationSpec::perturbed(1, r1.clone()),
        DerivationSpec::perturbed(2, r2.clone()),
    ])
}

/// `L(x) = −½(δ₁²x + δ₂²x)` in exact coefficient arithmetic.
pub fn lindbladian_apply(
    r1: &TorusElement,
    r2: &TorusElement,
    x: &TorusElement,
) -> Result<TorusElement> {
    let [d1, d2] = pair(r1, r2)?;
    let sq = |d: &DerivationSpec| d.apply(&d.apply(x)?);
    Ok((&sq(&d1)? + &sq(&d2)?).scale_re(-0.5))
}

/// `L(x*y) − L(x)*y − x*L(y) − Σⱼ δⱼ(x)*δⱼ(y)`.
pub fn cocycle_residual(
    r1: &TorusElement,
    r2: &TorusElement,
    x: &TorusElement,
    y: &TorusElement,
) -> Result<TorusElement> {
    let ds = pair(r1, r2)?;
    x.checked_add(r1)?;
    y.checked_add(r1)?;
    let xs = x.adjoint();
    let mut out = lindbladian_apply(r1, r2, &(&xs * y))?;
    out = &out - &(&lindbladian_apply(r1, r2, x)?.adjoint() * y);
    out = &out - &(&xs * &lindbladian_apply(r1, r2, y)?);
    for d in &ds {
        out = &out - &(&d.apply(x)?.adjoint() * &d.apply(y)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{build_lindbladian, from_vector, to_vector, BasisWindow};
    use crate::torus::C64;
    use proptest::prelude::*;

    const TH: f64 = 0.37;

    fn e(s: &str) -> TorusElement {
        crate::expr::parse_element(s, TH).unwrap()
    }

    fn arb_elem() -> impl Strategy<Value = TorusElement> {
        prop::collection::vec(((-3i64..=3, -3i64..=3), (-1.0..1.0f64, -1.0..1.0f64)), 1..6)
            .prop_map(|v| {
                TorusElement::from_terms(TH, v.into_iter().map(|(k, (a, b))| (k, C64::new(a, b))))
                    .unwrap()
            })
    }

    #[test]
    fn flat_u_v() {
        assert!(
            cocycle_residual(&e("0"), &e("0"), &e("U"), &e("V"))
                .unwrap()
                .norm()
                < 1e-12
        );
    }

    #[test]
    fn unit_gives_exact_zero() {
        let (r1, r2) = (e("U + U^-1"), e("V + V^-1"));
        assert!(cocycle_residual(&r1, &r2, &e("1"), &e("U^2 - 0.3 V"))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn rejects_non_self_adjoint() {
        assert!(matches!(
            cocycle_residual(&e("U"), &e("0"), &e("U"), &e("V")),
            Err(Error::NotSelfAdjoint(_))
        ));
    }

    #[test]
    fn matches_matrix_lindbladian() {
        let (r1, r2) = (e("U + U^-1"), e("0.5V + 0.5V^-1"));
        let w = BasisWindow::new(8);
        let l = build_lindbladian(&r1, &r2, w).unwrap();
        let x = e("U^-1 V + 0.2 i");
        let got = from_vector(&l.matrix().apply(&to_vector(&x, w).unwrap()), w, &x);
        assert!(got.distance(&lindbladian_apply(&r1, &r2, &x).unwrap()) < 1e-12);
    }

    #[test]
    fn flat_derivation_leibniz() {
        // δ₀(xy) = δ₀(x)y + xδ₀(y) componentwise for δ₀ = d₁ ⊕ d₂
        let (x, y) = (e("U + 2 V^-1"), e("U^-2 V - i"));
        for j in [1, 2] {
            let lhs = (&x * &y).derivation(j);
            let rhs = &(&x.derivation(j) * &y) + &(&x * &y.derivation(j));
            assert!(lhs.distance(&rhs) < 1e-13);
        }
    }

    proptest! {
        #[test]
        fn vanishes_for_perturbed_pair(x in arb_elem(), y in arb_elem()) {
            for (r1, r2) in [(e("0"), e("0")), (e("U + U^-1"), e("V + V^-1"))] {
                let res = cocycle_residual(&r1, &r2, &x, &y).unwrap();
                prop_assert!(res.norm() < 1e-12, "{}", res.norm());
            }
        }
    }
}
