use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::inverse::{invert, Inverse};
use crate::forms::pi::{pi_one, pi_two, PerturbedPair};
use crate::forms::universal::UniversalOneForm;
use crate::torus::{TorusElement, C64};

pub const J1_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct JunkProbe {
    pub n0: i64,
    pub l: i64,
    /// `[r₁, V^{n₀}]`.
    pub first: TorusElement,
    /// `δ₂(V^{n₀})δ₂(V^l)⁻¹[r₁, V^l]`.
    pub second: TorusElement,
    pub form: UniversalOneForm,
    /// γ₁₂ part of `π(δ form)`.
    pub gamma12: TorusElement,
    pub condition: f64,
}

fn v_pow(r: &TorusElement, l: i64) -> TorusElement {
    r.monomial_like(0, l, C64::new(1.0, 0.0))
}

pub fn delta2_v_inverse(r: &TorusElement, l: i64) -> Result<Inverse> {
    let pair = PerturbedPair::new(r);
    invert(&pair.apply(2, &v_pow(r, l)))
}

/// Smallest `l ≥ 1` with `δ₂(V^l)` invertible within the condition bound.
pub fn detect_n0(r: &TorusElement, l_max: i64) -> Result<i64> {
    (1..=l_max)
        .find(|&l| delta2_v_inverse(r, l).is_ok())
        .ok_or_else(|| Error::InvalidParameter(format!("δ₂(V^l) not invertible for l ≤ {l_max}")))
}

/// `a₁δ(b₁) + a₂δ(V^l) + a₃δ(U)` with `a₂, a₃` chosen so that `π` vanishes.
/// Needs `δ₂(U) = 0`, i.e. `r` a function of `U`.
pub fn j1_element(
    a1: &TorusElement,
    b1: &TorusElement,
    l: i64,
    r: &TorusElement,
) -> Result<(UniversalOneForm, f64)> {
    let pair = PerturbedPair::new(r);
    let u = r.monomial_like(1, 0, C64::new(1.0, 0.0));
    let vl = v_pow(r, l);
    let inv2 = invert(&pair.apply(2, &vl))?;
    let a2 = -&(&(a1 * &pair.apply(2, b1)) * &inv2.element);
    let rest = &(a1 * &pair.apply(1, b1)) + &(&a2 * &pair.apply(1, &vl));
    let inv1 = invert(&pair.apply(1, &u))?;
    let a3 = -&(&rest * &inv1.element);
    let mut w = UniversalOneForm::term(a1.clone(), b1.clone());
    w.push(a2, vl);
    w.push(a3, u);
    let img = pi_one(&w, r)?;
    let scale = 1.0 + a1.norm() * b1.norm();
    if !img.is_zero(J1_TOL * scale) {
        return Err(Error::Unsupported(
            "δ₂(U) ≠ 0: r must commute with U for this construction".into(),
        ));
    }
    Ok((w, inv2.condition))
}

/// Largest violation of `Σδₖ(aᵢ)δⱼ(bᵢ) + Σaᵢδₖδⱼ(bᵢ) = 0`.
pub fn j1_constraint_residual(w: &UniversalOneForm, r: &TorusElement) -> f64 {
    let pair = PerturbedPair::new(r);
    let mut worst: f64 = 0.0;
    for (k, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let mut acc = r.zero_like();
        for (a, b) in &w.terms {
            let djb = pair.apply(j, b);
            acc = &acc + &(&pair.apply(k, a) * &djb);
            acc = &acc + &(a * &pair.apply(k, &djb));
        }
        worst = worst.max(acc.norm());
    }
    worst
}

/// `Σ aᵢ[δ₁,δ₂](bᵢ)`.
pub fn commutator_contraction(w: &UniversalOneForm, r: &TorusElement) -> TorusElement {
    let c = PerturbedPair::new(r).commutator();
    w.terms.iter().fold(r.zero_like(), |acc, (a, b)| {
        &acc + &(a * &c.apply(b).expect("same theta"))
    })
}

pub fn junk_probe_with(r: &TorusElement, n0: i64, l: i64) -> Result<JunkProbe> {
    if l < n0 {
        return Err(Error::InvalidParameter(format!(
            "l = {l} below threshold n₀ = {n0}"
        )));
    }
    let pair = PerturbedPair::new(r);
    let r1 = pair.delta1.r();
    let vn = v_pow(r, n0);
    let vl = v_pow(r, l);
    let inv = delta2_v_inverse(r, l)?;
    let first = r1.commutator(&vn)?;
    let second = &(&pair.apply(2, &vn) * &inv.element) * &r1.commutator(&vl)?;
    let (form, condition) = j1_element(&r.scalar_like(C64::new(1.0, 0.0)), &vn, l, r)?;
    let gamma12 = pi_two(&form.delta_lift(), r)?.gamma12;
    Ok(JunkProbe {
        n0,
        l,
        first,
        second,
        form,
        gamma12,
        condition,
    })
}

pub fn junk_probe(r: &TorusElement, l: i64) -> Result<JunkProbe> {
    let n0 = detect_n0(r, 64)?;
    junk_probe_with(r, n0, l)
}

/// Probes over several `l`, in parallel.
pub fn junk_ladder(r: &TorusElement, ls: &[i64]) -> Result<Vec<JunkProbe>> {
    let n0 = detect_n0(r, 64)?;
    ls.par_iter().map(|&l| junk_probe_with(r, n0, l)).collect()
}

/// `(k, max ‖second‖ over l ∈ [2ᵏ, 2ᵏ⁺¹))` for every block the probes touch.
pub fn dyadic_envelope(probes: &[JunkProbe]) -> Vec<(u32, f64)> {
    let mut out: Vec<(u32, f64)> = Vec::new();
    for p in probes {
        let k = (p.l.max(1) as u64).ilog2();
        let v = p.second.norm();
        match out.iter_mut().find(|(b, _)| *b == k) {
            Some(e) => e.1 = e.1.max(v),
            None => out.push((k, v)),
        }
    }
    out.sort_by_key(|e| e.0);
    out
}
