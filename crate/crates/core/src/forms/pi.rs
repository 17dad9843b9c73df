use crate::error::Result;
use crate::forms::universal::{UniversalOneForm, UniversalTwoForm};
use crate::torus::{DerivationSpec, TorusElement, C64};

const I: C64 = C64::new(0.0, 1.0);

/// `ω₁γ₁ + ω₂γ₂` with `γ₁ = −iσx`, `γ₂ = iσy`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiOneImage {
    pub omega1: TorusElement,
    pub omega2: TorusElement,
}

/// `scalar·1 + gamma12·γ₁₂` with `γ₁₂ = γ₁γ₂ = iσz`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiTwoImage {
    pub scalar: TorusElement,
    pub gamma12: TorusElement,
}

/// The pair `δⱼ = dⱼ + [rⱼ,·]` with `r₁ = (r + r*)/2`, `r₂ = (r − r*)/2i`.
#[derive(Clone, Debug)]
pub struct PerturbedPair {
    pub delta1: DerivationSpec,
    pub delta2: DerivationSpec,
}

impl PerturbedPair {
    pub fn new(r: &TorusElement) -> Self {
        let rs = r.adjoint();
        let r1 = (r + &rs).scale_re(0.5);
        let r2 = (r - &rs).scale(C64::new(0.0, -0.5));
        Self {
            delta1: DerivationSpec::perturbed(1, r1),
            delta2: DerivationSpec::perturbed(2, r2),
        }
    }

    pub fn apply(&self, j: u8, a: &TorusElement) -> TorusElement {
        let d = if j == 1 { &self.delta1 } else { &self.delta2 };
        d.apply(a).expect("theta checked by caller")
    }

    /// `[δ₁, δ₂]` as an inner derivation.
    pub fn commutator(&self) -> DerivationSpec {
        crate::torus::derivation_commutator(&self.delta1, &self.delta2)
            .expect("same theta by construction")
    }
}

impl PiOneImage {
    pub fn zero_like(x: &TorusElement) -> Self {
        Self {
            omega1: x.zero_like(),
            omega2: x.zero_like(),
        }
    }

    /// Off-diagonal blocks `(p, q)` of `[[0, p], [q, 0]]`.
    pub fn blocks(&self) -> (TorusElement, TorusElement) {
        let w1 = self.omega1.scale(-I);
        (&w1 + &self.omega2, &w1 - &self.omega2)
    }

    pub fn from_blocks(p: &TorusElement, q: &TorusElement) -> Self {
        Self {
            omega1: (p + q).scale(C64::new(0.0, 0.5)),
            omega2: (p - q).scale_re(0.5),
        }
    }

    pub fn right_mul(&self, a: &TorusElement) -> Self {
        Self {
            omega1: &self.omega1 * a,
            omega2: &self.omega2 * a,
        }
    }

    pub fn left_mul(&self, a: &TorusElement) -> Self {
        Self {
            omega1: a * &self.omega1,
            omega2: a * &self.omega2,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            omega1: &self.omega1 + &other.omega1,
            omega2: &self.omega2 + &other.omega2,
        }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.omega1.norm() <= tol && self.omega2.norm() <= tol
    }

    /// Block product: `[[0,p],[q,0]]·[[0,p'],[q',0]] = diag(pq', qp')`.
    pub fn mul(&self, other: &Self) -> PiTwoImage {
        let (p, q) = self.blocks();
        let (p2, q2) = other.blocks();
        PiTwoImage::from_diagonal(&(&p * &q2), &(&q * &p2))
    }
}

impl PiTwoImage {
    pub fn zero_like(x: &TorusElement) -> Self {
        Self {
            scalar: x.zero_like(),
            gamma12: x.zero_like(),
        }
    }

    pub fn from_diagonal(a: &TorusElement, b: &TorusElement) -> Self {
        Self {
            scalar: (a + b).scale_re(0.5),
            gamma12: (a - b).scale(C64::new(0.0, -0.5)),
        }
    }

    pub fn diagonal(&self) -> (TorusElement, TorusElement) {
        let g = self.gamma12.scale(I);
        (&self.scalar + &g, &self.scalar - &g)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            scalar: &self.scalar + &other.scalar,
            gamma12: &self.gamma12 + &other.gamma12,
        }
    }

    pub fn left_mul(&self, a: &TorusElement) -> Self {
        Self {
            scalar: a * &self.scalar,
            gamma12: a * &self.gamma12,
        }
    }
}

/// `π(δb) = iδ₁(b)γ₁ + iδ₂(b)γ₂`.
pub fn pi_delta(b: &TorusElement, pair: &PerturbedPair) -> PiOneImage {
    PiOneImage {
        omega1: pair.apply(1, b).scale(I),
        omega2: pair.apply(2, b).scale(I),
    }
}

pub fn pi_one(w: &UniversalOneForm, r: &TorusElement) -> Result<PiOneImage> {
    let pair = PerturbedPair::new(r);
    let mut out = PiOneImage::zero_like(r);
    for (a, b) in &w.terms {
        a.checked_add(r)?;
        b.checked_add(r)?;
        out = out.add(&pi_delta(b, &pair).left_mul(a));
    }
    Ok(out)
}

pub fn pi_two(w: &UniversalTwoForm, r: &TorusElement) -> Result<PiTwoImage> {
    let pair = PerturbedPair::new(r);
    let mut out = PiTwoImage::zero_like(r);
    for (a, b, c) in &w.terms {
        for e in [a, b, c] {
            e.checked_add(r)?;
        }
        let prod = pi_delta(b, &pair).mul(&pi_delta(c, &pair));
        out = out.add(&prod.left_mul(a));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_element;
    use crate::operators::{build_dirac, left_multiplication, BasisWindow, SparseMatrix};
    use proptest::prelude::*;

    const TH: f64 = 0.37;

    fn e(s: &str) -> TorusElement {
        parse_element(s, TH).unwrap()
    }

    fn arb_elem(k: i64) -> impl Strategy<Value = TorusElement> {
        prop::collection::vec(((-k..=k, -k..=k), (-1.0..1.0f64, -1.0..1.0f64)), 1..5).prop_map(
            |v| {
                TorusElement::from_terms(TH, v.into_iter().map(|(k, (a, b))| (k, C64::new(a, b))))
                    .unwrap()
            },
        )
    }

    fn x_form() -> UniversalOneForm {
        UniversalOneForm {
            terms: vec![(e("U^-1"), e("U")), (e("U"), e("U^-1"))],
        }
    }

    #[test]
    fn delta_u_flat() {
        let img = pi_one(&UniversalOneForm::term(e("1"), e("U")), &e("0")).unwrap();
        assert!(img.omega1.distance(&e("i*U")) < 1e-15);
        assert!(img.omega2.is_zero());
    }

    #[test]
    fn x_is_junk_and_lift_is_two() {
        for m in 1..=3 {
            let r = TorusElement::monomial(TH, m, 0, C64::new(1.0, 0.0)).unwrap();
            assert!(pi_one(&x_form(), &r).unwrap().is_zero(1e-13));
            let two = pi_two(&x_form().delta_lift(), &r).unwrap();
            assert!(two.scalar.distance(&e("-2")) < 1e-13);
            assert!(two.gamma12.norm() < 1e-13);
        }
    }

    #[test]
    fn zero_form() {
        let t = pi_two(&UniversalTwoForm::new(), &e("U")).unwrap();
        assert!(t.scalar.is_zero() && t.gamma12.is_zero());
    }

    #[test]
    fn scalar_and_gamma_parts_match_formula() {
        let r = e("0.3U + 0.2i*V^-1");
        let pair = PerturbedPair::new(&r);
        let (a, b) = (e("U + V^2"), e("0.5 U^-1 V - i*V"));
        let t = pi_delta(&a, &pair).mul(&pi_delta(&b, &pair));
        let (d1a, d2a, d1b, d2b) = (
            pair.apply(1, &a),
            pair.apply(2, &a),
            pair.apply(1, &b),
            pair.apply(2, &b),
        );
        let scalar = &(&d1a * &d1b) + &(&d2a * &d2b);
        let g12 = -&(&(&d1a * &d2b) - &(&d2a * &d1b));
        assert!(t.scalar.distance(&scalar) < 1e-12);
        assert!(t.gamma12.distance(&g12) < 1e-12);
        let back = PiTwoImage::from_diagonal(&t.diagonal().0, &t.diagonal().1);
        assert!(
            back.scalar.distance(&t.scalar) < 1e-14 && back.gamma12.distance(&t.gamma12) < 1e-14
        );
    }

    #[test]
    fn matches_dirac_commutator() {
        let w = BasisWindow::new(10);
        let r = e("U - 0.4 V + 0.25 i*U^-1V");
        let d = build_dirac(&r, w);
        let [_, x, y, _] = d.blocks();
        for a in [e("U+V^-1"), e("0.3 U^2 V - i*V + 2"), e("U^-1 V^-1")] {
            let (p, q) = pi_delta(&a, &PerturbedPair::new(&r)).blocks();
            let la = left_multiplication(&a, w);
            let cx = x.matmul(&la).sub(&la.matmul(&x));
            let cy = y.matmul(&la).sub(&la.matmul(&y));
            // compare on vectors deep inside the window
            for (m, n) in [(0, 0), (1, -1), (-2, 1)] {
                let mut v = vec![C64::default(); w.dim()];
                v[w.index(m, n).unwrap()] = C64::new(1.0, 0.0);
                let xi = TorusElement::monomial(TH, m, n, C64::new(1.0, 0.0)).unwrap();
                let check = |c: &SparseMatrix, g: &TorusElement| {
                    let got = c.apply(&v);
                    let want = crate::operators::to_vector(&(g * &xi), w).unwrap();
                    got.iter()
                        .zip(&want)
                        .map(|(a, b)| (a - b).norm())
                        .fold(0.0, f64::max)
                };
                assert!(check(&cx, &p) < 1e-12);
                assert!(check(&cy, &q) < 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn right_module(a in arb_elem(2), b in arb_elem(2), c in arb_elem(2), r in arb_elem(1)) {
            let w = UniversalOneForm::term(a, b);
            let lhs = pi_one(&w.right_mul(&c), &r).unwrap();
            let rhs = pi_one(&w, &r).unwrap().right_mul(&c);
            prop_assert!(lhs.omega1.distance(&rhs.omega1) < 1e-11);
            prop_assert!(lhs.omega2.distance(&rhs.omega2) < 1e-11);
        }

        #[test]
        fn blocks_roundtrip(a in arb_elem(2), b in arb_elem(2)) {
            let img = PiOneImage { omega1: a, omega2: b };
            let (p, q) = img.blocks();
            let back = PiOneImage::from_blocks(&p, &q);
            prop_assert!(back.omega1.distance(&img.omega1) < 1e-14);
            prop_assert!(back.omega2.distance(&img.omega2) < 1e-14);
        }
    }
}
