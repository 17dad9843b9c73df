use crate::error::{Error, Result};
use crate::torus::element::{TorusElement, C64};

/// The derivation `c₁d₁ + c₂d₂ + [r,·]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivationSpec {
    pub c1: C64,
    pub c2: C64,
    r: TorusElement,
    r_constant: C64,
}

impl DerivationSpec {
    pub fn new(c1: C64, c2: C64, r: TorusElement) -> Self {
        let r_constant = r.trace();
        Self {
            c1,
            c2,
            r: r.without_constant(),
            r_constant,
        }
    }

    pub fn zero(theta: f64) -> Result<Self> {
        Ok(Self::new(
            C64::default(),
            C64::default(),
            TorusElement::zero(theta)?,
        ))
    }

    pub fn canonical(theta: f64, j: u8) -> Result<Self> {
        let one = C64::new(1.0, 0.0);
        let (c1, c2) = if j == 1 {
            (one, C64::default())
        } else {
            (C64::default(), one)
        };
        Ok(Self::new(c1, c2, TorusElement::zero(theta)?))
    }

    pub fn inner(r: TorusElement) -> Self {
        Self::new(C64::default(), C64::default(), r)
    }

    /// `dⱼ + [r,·]`.
    pub fn perturbed(j: u8, r: TorusElement) -> Self {
        let mut s = Self::canonical(r.theta(), j).expect("theta already validated");
        s.r_constant = r.trace();
        s.r = r.without_constant();
        s
    }

    pub fn theta(&self) -> f64 {
        self.r.theta()
    }

    /// The inner part, constant stripped.
    pub fn r(&self) -> &TorusElement {
        &self.r
    }

    /// The constant part removed from `r` at construction.
    pub fn r_constant(&self) -> C64 {
        self.r_constant
    }

    /// Coordinates along `δ_{mn}`: the Fourier amplitudes of `r` off the origin.
    pub fn coordinates(&self) -> impl Iterator<Item = ((i64, i64), C64)> + '_ {
        self.r.iter()
    }

    pub fn apply(&self, a: &TorusElement) -> Result<TorusElement> {
        let mut out = self.r.commutator(a)?;
        if self.c1 != C64::default() {
            out = &out + &a.d1().scale(self.c1);
        }
        if self.c2 != C64::default() {
            out = &out + &a.d2().scale(self.c2);
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.c1 == C64::default() && self.c2 == C64::default() && self.r.is_zero()
    }
}

/// `[p, q]` as a derivation: always inner, with `[dᵢ, d_s] = d_{dᵢ s}` and `[d_r, d_s] = d_{[r,s]}`.
pub fn derivation_commutator(p: &DerivationSpec, q: &DerivationSpec) -> Result<DerivationSpec> {
    if p.theta() != q.theta() {
        return Err(Error::ThetaMismatch(p.theta(), q.theta()));
    }
    let mut r = p.r.commutator(&q.r)?;
    r = &r + &q.r.d1().scale(p.c1);
    r = &r + &q.r.d2().scale(p.c2);
    r = &r - &p.r.d1().scale(q.c1);
    r = &r - &p.r.d2().scale(q.c2);
    Ok(DerivationSpec::inner(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::element::lambda_pow;
    use proptest::prelude::*;

    const TH: f64 = 0.37;

    fn arb_elem() -> impl Strategy<Value = TorusElement> {
        prop::collection::vec(((-3i64..=3, -3i64..=3), (-1.0..1.0f64, -1.0..1.0f64)), 1..6)
            .prop_map(|v| {
                TorusElement::from_terms(TH, v.into_iter().map(|(k, (a, b))| (k, C64::new(a, b))))
                    .unwrap()
            })
    }

    fn arb_spec() -> impl Strategy<Value = DerivationSpec> {
        (-2.0..2.0f64, -2.0..2.0f64, arb_elem())
            .prop_map(|(a, b, r)| DerivationSpec::new(C64::new(a, 0.0), C64::new(0.0, b), r))
    }

    fn basis() -> Vec<TorusElement> {
        let mut out = vec![];
        for m in -2..=2 {
            for n in -2..=2 {
                out.push(TorusElement::monomial(TH, m, n, C64::new(1.0, 0.0)).unwrap());
            }
        }
        out
    }

    fn pointwise(p: &DerivationSpec, q: &DerivationSpec, x: &TorusElement) -> TorusElement {
        let a = p.apply(&q.apply(x).unwrap()).unwrap();
        let b = q.apply(&p.apply(x).unwrap()).unwrap();
        &a - &b
    }

    #[test]
    fn constant_is_stripped() {
        let r = TorusElement::from_terms(
            TH,
            [((0, 0), C64::new(3.0, 0.0)), ((1, 0), C64::new(1.0, 0.0))],
        )
        .unwrap();
        let s = DerivationSpec::inner(r);
        assert_eq!(s.r_constant(), C64::new(3.0, 0.0));
        assert_eq!(s.r().trace(), C64::default());
        assert_eq!(s.coordinates().count(), 1);
    }

    #[test]
    fn d1_d2_commute() {
        let d1 = DerivationSpec::canonical(TH, 1).unwrap();
        let d2 = DerivationSpec::canonical(TH, 2).unwrap();
        assert!(derivation_commutator(&d1, &d2).unwrap().is_zero());
    }

    #[test]
    fn d1_with_inner_v() {
        let d1 = DerivationSpec::canonical(TH, 1).unwrap();
        let v = TorusElement::v(TH).unwrap();
        let dr = DerivationSpec::inner(v.clone());
        let cm = derivation_commutator(&d1, &dr).unwrap();
        assert_eq!(cm.r(), &v.d1());
        for x in [TorusElement::u(TH).unwrap(), v.clone()] {
            assert!(cm.apply(&x).unwrap().distance(&pointwise(&d1, &dr, &x)) < 1e-14);
        }
    }

    #[test]
    fn perturbed_pair_gives_inner_uv() {
        let p = DerivationSpec::perturbed(1, TorusElement::u(TH).unwrap());
        let q = DerivationSpec::perturbed(2, TorusElement::v(TH).unwrap());
        let cm = derivation_commutator(&p, &q).unwrap();
        assert_eq!(cm.c1, C64::default());
        assert_eq!(cm.c2, C64::default());
        assert_eq!(cm.r().len(), 1);
        let expected = C64::new(1.0, 0.0) - lambda_pow(TH, -1);
        assert!((cm.r().get(1, 1) - expected).norm() < 1e-15);
        for x in basis() {
            assert!(cm.apply(&x).unwrap().distance(&pointwise(&p, &q, &x)) < 1e-13);
        }
    }

    proptest! {
        #[test]
        fn leibniz(s in arb_spec(), a in arb_elem(), b in arb_elem()) {
            let lhs = s.apply(&(&a * &b)).unwrap();
            let rhs = &(&s.apply(&a).unwrap() * &b) + &(&a * &s.apply(&b).unwrap());
            prop_assert!(lhs.distance(&rhs) < 1e-12);
        }

        #[test]
        fn commutator_matches_pointwise(p in arb_spec(), q in arb_spec(), x in arb_elem()) {
            let cm = derivation_commutator(&p, &q).unwrap();
            prop_assert!(cm.apply(&x).unwrap().distance(&pointwise(&p, &q, &x)) < 1e-11);
        }
    }
}
