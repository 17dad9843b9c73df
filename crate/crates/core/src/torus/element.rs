use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const DEFAULT_PRUNE: f64 = 1e-15;

/// `e^{2πi x}`, exact at multiples of a quarter turn.
pub fn unit_phase(x: f64) -> C64 {
    let f = x.rem_euclid(1.0);
    let scaled = 4.0 * f;
    let q = scaled.floor();
    let (s, c) = ((scaled - q) * FRAC_PI_2).sin_cos();
    match q as i64 {
        0 => C64::new(c, s),
        1 => C64::new(-s, c),
        2 => C64::new(-c, -s),
        _ => C64::new(s, -c),
    }
}

/// `λ^k` with `λ = e^{2πiθ}`.
pub fn lambda_pow(theta: f64, k: i64) -> C64 {
    if k == 0 {
        return C64::new(1.0, 0.0);
    }
    let p = (theta * (k.unsigned_abs() as f64)).rem_euclid(1.0);
    let z = unit_phase(p);
    if k < 0 {
        z.conj()
    } else {
        z
    }
}

/// A finitely supported element `Σ a_{mn} U^m V^n` of the noncommutative torus.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusElement {
    theta: f64,
    prune: f64,
    coeffs: BTreeMap<(i64, i64), C64>,
}

impl TorusElement {
    pub fn zero(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::InvalidTheta(theta));
        }
        Ok(Self {
            theta,
            prune: DEFAULT_PRUNE,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn monomial(theta: f64, m: i64, n: i64, c: C64) -> Result<Self> {
        let mut e = Self::zero(theta)?;
        e.insert(m, n, c);
        Ok(e)
    }

    pub fn one(theta: f64) -> Result<Self> {
        Self::monomial(theta, 0, 0, C64::new(1.0, 0.0))
    }

    pub fn u(theta: f64) -> Result<Self> {
        Self::monomial(theta, 1, 0, C64::new(1.0, 0.0))
    }

    pub fn v(theta: f64) -> Result<Self> {
        Self::monomial(theta, 0, 1, C64::new(1.0, 0.0))
    }

    pub fn from_terms<I>(theta: f64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((i64, i64), C64)>,
    {
        let mut e = Self::zero(theta)?;
        for ((m, n), c) in terms {
            *e.coeffs.entry((m, n)).or_insert(C64::new(0.0, 0.0)) += c;
        }
        e.prune_small();
        Ok(e)
    }

    pub fn with_prune(mut self, threshold: f64) -> Self {
        self.prune = threshold.max(0.0);
        self.prune_small();
        self
    }

    /// Same theta and prune threshold, empty support.
    pub fn zero_like(&self) -> Self {
        Self {
            theta: self.theta,
            prune: self.prune,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn scalar_like(&self, c: C64) -> Self {
        let mut e = self.zero_like();
        e.insert(0, 0, c);
        e
    }

    pub fn monomial_like(&self, m: i64, n: i64, c: C64) -> Self {
        let mut e = self.zero_like();
        e.insert(m, n, c);
        e
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn prune_threshold(&self) -> f64 {
        self.prune
    }

    pub fn lambda(&self) -> C64 {
        lambda_pow(self.theta, 1)
    }

    pub fn get(&self, m: i64, n: i64) -> C64 {
        self.coeffs.get(&(m, n)).copied().unwrap_or_default()
    }

    pub fn insert(&mut self, m: i64, n: i64, c: C64) {
        if self.negligible(c) {
            self.coeffs.remove(&(m, n));
        } else {
            self.coeffs.insert((m, n), c);
        }
    }

    /// Entries in lexicographic `(m, n)` order.
    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), C64)> + '_ {
        self.coeffs.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest `N` with the support inside `|m|, |n| ≤ N`.
    pub fn radius(&self) -> usize {
        self.coeffs
            .keys()
            .map(|&(m, n)| m.unsigned_abs().max(n.unsigned_abs()) as usize)
            .max()
            .unwrap_or(0)
    }

    fn negligible(&self, c: C64) -> bool {
        (c.re == 0.0 && c.im == 0.0) || c.norm() < self.prune
    }

    fn prune_small(&mut self) {
        let prune = self.prune;
        self.coeffs
            .retain(|_, c| !((c.re == 0.0 && c.im == 0.0) || c.norm() < prune));
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.theta != other.theta {
            Err(Error::ThetaMismatch(self.theta, other.theta))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            *out.coeffs.entry(*k).or_default() += c;
        }
        out.prune_small();
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            *out.coeffs.entry(*k).or_default() -= c;
        }
        out.prune_small();
        Ok(out)
    }

    /// Product with the reordering rule `(U^aV^b)(U^mV^n) = λ^{-bm} U^{a+m}V^{b+n}`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut acc: BTreeMap<(i64, i64), C64> = BTreeMap::new();
        for (&(a, b), &x) in &self.coeffs {
            for (&(m, n), &y) in &other.coeffs {
                let phase = lambda_pow(self.theta, -b * m);
                *acc.entry((a + m, b + n)).or_default() += x * y * phase;
            }
        }
        let mut out = self.zero_like();
        out.coeffs = acc;
        out.prune_small();
        Ok(out)
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v *= c;
        }
        out.prune_small();
        out
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    /// `(cU^mV^n)* = c̄ λ^{-mn} U^{-m}V^{-n}`.
    pub fn adjoint(&self) -> Self {
        let mut out = self.zero_like();
        for (&(m, n), &c) in &self.coeffs {
            out.coeffs
                .insert((-m, -n), c.conj() * lambda_pow(self.theta, -m * n));
        }
        out
    }

    pub fn trace(&self) -> C64 {
        self.get(0, 0)
    }

    /// `⟨a, b⟩ = τ(a* b)`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check(other)?;
        Ok(self
            .coeffs
            .iter()
            .filter_map(|(k, a)| other.coeffs.get(k).map(|b| a.conj() * b))
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn derivation(&self, j: u8) -> Self {
        let mut out = self.zero_like();
        for (&(m, n), &c) in &self.coeffs {
            let k = if j == 1 { m } else { n };
            out.insert(m, n, c * k as f64);
        }
        out
    }

    pub fn d1(&self) -> Self {
        self.derivation(1)
    }

    pub fn d2(&self) -> Self {
        self.derivation(2)
    }

    /// `[self, a]`.
    pub fn commutator(&self, a: &Self) -> Result<Self> {
        self.checked_mul(a)?.checked_sub(&a.checked_mul(self)?)
    }

    /// `a_{mn} ↦ z₁^m z₂^n a_{mn}`.
    pub fn torus_action(&self, z1: C64, z2: C64) -> Result<Self> {
        for z in [z1, z2] {
            if (z.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::NotUnimodular(z.norm()));
            }
        }
        let mut out = self.zero_like();
        for (&(m, n), &c) in &self.coeffs {
            out.insert(m, n, c * z1.powi(m as i32) * z2.powi(n as i32));
        }
        Ok(out)
    }

    /// Drop amplitudes outside `|m|, |n| ≤ n_max`.
    pub fn truncate(&self, n_max: usize) -> Self {
        let n = n_max as i64;
        let mut out = self.clone();
        out.coeffs.retain(|&(a, b), _| a.abs() <= n && b.abs() <= n);
        out
    }

    /// `r` with its constant part removed.
    pub fn without_constant(&self) -> Self {
        let mut out = self.clone();
        out.coeffs.remove(&(0, 0));
        out
    }

    pub fn self_adjoint_defect(&self) -> f64 {
        (self - &self.adjoint()).norm()
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.self_adjoint_defect() <= tol * (1.0 + self.norm())
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut out = self.scalar_like(C64::new(1.0, 0.0));
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

impl Add for &TorusElement {
    type Output = TorusElement;
    fn add(self, rhs: Self) -> TorusElement {
        self.checked_add(rhs).expect("theta mismatch")
    }
}

impl Sub for &TorusElement {
    type Output = TorusElement;
    fn sub(self, rhs: Self) -> TorusElement {
        self.checked_sub(rhs).expect("theta mismatch")
    }
}

impl Mul for &TorusElement {
    type Output = TorusElement;
    fn mul(self, rhs: Self) -> TorusElement {
        self.checked_mul(rhs).expect("theta mismatch")
    }
}

impl Mul<C64> for &TorusElement {
    type Output = TorusElement;
    fn mul(self, rhs: C64) -> TorusElement {
        self.scale(rhs)
    }
}

impl Neg for &TorusElement {
    type Output = TorusElement;
    fn neg(self) -> TorusElement {
        self.scale_re(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TH: f64 = 0.37;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    type Term = ((i64, i64), (f64, f64));

    fn elem(terms: &[Term]) -> TorusElement {
        TorusElement::from_terms(TH, terms.iter().map(|&(k, (a, b))| (k, c(a, b)))).unwrap()
    }

    fn arb_elem() -> impl Strategy<Value = TorusElement> {
        prop::collection::vec(((-3i64..=3, -3i64..=3), (-1.0..1.0f64, -1.0..1.0f64)), 1..6)
            .prop_map(|v| elem(&v))
    }

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(unit_phase(0.25), c(0.0, 1.0));
        assert_eq!(unit_phase(0.5), c(-1.0, 0.0));
        assert_eq!(unit_phase(-0.25), c(0.0, -1.0));
        assert_eq!(lambda_pow(0.25, 3), c(0.0, -1.0));
    }

    #[test]
    fn uv_is_normal_ordered() {
        let u = TorusElement::u(TH).unwrap();
        let v = TorusElement::v(TH).unwrap();
        let uv = &u * &v;
        assert_eq!(uv.len(), 1);
        assert_eq!(uv.get(1, 1), c(1.0, 0.0));
    }

    #[test]
    fn vu_picks_up_inverse_lambda() {
        let u = TorusElement::u(TH).unwrap();
        let v = TorusElement::v(TH).unwrap();
        let vu = &v * &u;
        let expected = (-C64::i() * 2.0 * std::f64::consts::PI * TH).exp();
        assert!((vu.get(1, 1) - expected).norm() < 1e-15);
    }

    #[test]
    fn uv_times_inverse_has_trace_lambda() {
        let uv = elem(&[((1, 1), (1.0, 0.0))]);
        let inv = elem(&[((-1, -1), (1.0, 0.0))]);
        let p = &uv * &inv;
        assert_eq!(p.len(), 1);
        let expected = (C64::i() * 2.0 * std::f64::consts::PI * TH).exp();
        assert!((p.trace() - expected).norm() < 1e-15);
    }

    #[test]
    fn mismatched_theta_is_rejected() {
        let a = TorusElement::u(0.3).unwrap();
        let b = TorusElement::u(0.4).unwrap();
        assert!(matches!(a.checked_mul(&b), Err(Error::ThetaMismatch(..))));
        assert!(TorusElement::zero(1.0).is_err());
    }

    #[test]
    fn adjoint_examples() {
        let u = TorusElement::u(TH).unwrap();
        let ua = u.adjoint();
        assert_eq!(ua.get(-1, 0), c(1.0, 0.0));
        assert_eq!(ua.len(), 1);
        let x = TorusElement::monomial(0.25, 1, 1, C64::i()).unwrap();
        let xa = x.adjoint();
        assert_eq!(xa.len(), 1);
        assert_eq!(xa.get(-1, -1), c(-1.0, 0.0));
    }

    #[test]
    fn trace_examples() {
        assert_eq!(TorusElement::one(TH).unwrap().trace(), c(1.0, 0.0));
        let m = elem(&[((2, -1), (3.0, 1.0))]);
        assert_eq!(m.trace(), c(0.0, 0.0));
    }

    #[test]
    fn derivation_examples() {
        let a = elem(&[((2, 3), (1.0, 0.0))]);
        assert_eq!(a.d1().get(2, 3), c(2.0, 0.0));
        assert!(TorusElement::u(TH).unwrap().d2().is_zero());
    }

    #[test]
    fn commutator_with_u() {
        let u = TorusElement::u(TH).unwrap();
        for (m, n) in [(0, 1), (2, -3), (-1, 4)] {
            let x = elem(&[((m, n), (1.0, 0.0))]);
            let cm = u.commutator(&x).unwrap();
            let expected = c(1.0, 0.0) - lambda_pow(TH, -n);
            assert!((cm.get(m + 1, n) - expected).norm() < 1e-15);
            assert!(cm.len() <= 1);
        }
    }

    #[test]
    fn commutator_u_plus_inverse_with_v() {
        let r = elem(&[((1, 0), (1.0, 0.0)), ((-1, 0), (1.0, 0.0))]);
        let v = TorusElement::v(TH).unwrap();
        let cm = r.commutator(&v).unwrap();
        let one = c(1.0, 0.0);
        assert!((cm.get(1, 1) - (one - lambda_pow(TH, -1))).norm() < 1e-15);
        assert!((cm.get(-1, 1) - (one - lambda_pow(TH, 1))).norm() < 1e-15);
        assert_eq!(cm.len(), 2);
    }

    #[test]
    fn torus_action_generator_matches_i_d1() {
        let u = TorusElement::u(TH).unwrap();
        let h = 1e-5;
        let plus = u
            .torus_action(C64::from_polar(1.0, h), c(1.0, 0.0))
            .unwrap();
        let minus = u
            .torus_action(C64::from_polar(1.0, -h), c(1.0, 0.0))
            .unwrap();
        let fd = (&plus - &minus).scale_re(0.5 / h);
        let expected = u.d1().scale(C64::i());
        assert!(fd.distance(&expected) < 1e-9);
        assert!(u.torus_action(c(2.0, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn prune_threshold_removes_small_amplitudes() {
        let a = elem(&[((0, 0), (1.0, 0.0)), ((1, 0), (1e-10, 0.0))]).with_prune(1e-8);
        assert_eq!(a.len(), 1);
    }

    proptest! {
        #[test]
        fn associative(a in arb_elem(), b in arb_elem(), c3 in arb_elem()) {
            let l = &(&a * &b) * &c3;
            let r = &a * &(&b * &c3);
            prop_assert!(l.distance(&r) < 1e-12);
        }

        #[test]
        fn unital(a in arb_elem()) {
            let one = TorusElement::one(TH).unwrap();
            prop_assert_eq!(&(&one * &a), &a);
            prop_assert_eq!(&(&a * &one), &a);
        }

        #[test]
        fn adjoint_involution(a in arb_elem()) {
            let aa = a.adjoint().adjoint();
            for ((m, n), x) in a.iter() {
                let y = aa.get(m, n);
                prop_assert!((x - y).norm() <= 4.0 * f64::EPSILON * x.norm());
            }
            prop_assert_eq!(aa.len(), a.len());
        }

        #[test]
        fn adjoint_reverses_products(a in arb_elem(), b in arb_elem()) {
            let l = (&a * &b).adjoint();
            let r = &b.adjoint() * &a.adjoint();
            prop_assert!(l.distance(&r) < 1e-12);
        }

        #[test]
        fn trace_positive_and_tracial(a in arb_elem(), b in arb_elem()) {
            let p = (&a * &a.adjoint()).trace();
            prop_assert!(p.im.abs() < 1e-12);
            prop_assert!(p.re > 0.0);
            prop_assert!(((&a * &b).trace() - (&b * &a).trace()).norm() < 1e-12);
            prop_assert!(a.commutator(&b).unwrap().trace().norm() < 1e-12);
        }

        #[test]
        fn monomials_orthonormal(m in -4i64..4, n in -4i64..4, p in -4i64..4, q in -4i64..4) {
            let x = TorusElement::monomial(TH, m, n, c(1.0, 0.0)).unwrap();
            let y = TorusElement::monomial(TH, p, q, c(1.0, 0.0)).unwrap();
            let ip = (&x.adjoint() * &y).trace();
            let expected = if (m, n) == (p, q) { 1.0 } else { 0.0 };
            prop_assert!((ip - c(expected, 0.0)).norm() < 1e-14);
            prop_assert!((x.inner(&y).unwrap() - ip).norm() < 1e-14);
        }

        #[test]
        fn canonical_derivations_leibniz_and_skew(a in arb_elem(), b in arb_elem()) {
            for j in [1u8, 2] {
                let lhs = (&a * &b).derivation(j);
                let rhs = &(&a.derivation(j) * &b) + &(&a * &b.derivation(j));
                prop_assert!(lhs.distance(&rhs) < 1e-12);
                let skew = &a.adjoint().derivation(j) + &a.derivation(j).adjoint();
                prop_assert!(skew.norm() < 1e-12);
            }
        }

        #[test]
        fn inner_derivation_skew_for_self_adjoint(r in arb_elem(), x in arb_elem()) {
            let rs = (&r + &r.adjoint()).scale_re(0.5);
            let lhs = rs.commutator(&x.adjoint()).unwrap();
            let rhs = -&rs.commutator(&x).unwrap().adjoint();
            prop_assert!(lhs.distance(&rhs) < 1e-12);
            prop_assert!(rs.commutator(&(&rs * &rs)).unwrap().norm() < 1e-12);
        }

        #[test]
        fn torus_action_is_star_automorphism(a in arb_elem(), b in arb_elem(), s in -3.0..3.0f64, u in -3.0..3.0f64, s2 in -3.0..3.0f64) {
            let z1 = C64::from_polar(1.0, s);
            let z2 = C64::from_polar(1.0, u);
            let act = |x: &TorusElement| x.torus_action(z1, z2).unwrap();
            prop_assert!(act(&(&a * &b)).distance(&(&act(&a) * &act(&b))) < 1e-12);
            prop_assert!(act(&a.adjoint()).distance(&act(&a).adjoint()) < 1e-12);
            prop_assert!((act(&a).trace() - a.trace()).norm() < 1e-15);
            let w = C64::from_polar(1.0, s2);
            let twice = act(&a).torus_action(w, c(1.0, 0.0)).unwrap();
            let once = a.torus_action(z1 * w, z2).unwrap();
            prop_assert!(twice.distance(&once) < 1e-12);
            prop_assert_eq!(&a.torus_action(c(1.0, 0.0), c(1.0, 0.0)).unwrap(), &a);
        }
    }
}
