use rand::Rng;

use crate::torus::{TorusElement, C64};

/// `terms` monomials with indices in `[−radius, radius]²` and coefficients uniform in the unit square.
pub fn random_element(rng: &mut impl Rng, theta: f64, radius: i64, terms: usize) -> TorusElement {
    let mut out = TorusElement::zero(theta).expect("theta validated by config");
    for _ in 0..terms {
        let m = rng.random_range(-radius..=radius);
        let n = rng.random_range(-radius..=radius);
        let c = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        out.insert(m, n, out.get(m, n) + c);
    }
    out
}

/// Self-adjoint with zero trace.
pub fn random_self_adjoint(
    rng: &mut impl Rng,
    theta: f64,
    radius: i64,
    terms: usize,
) -> TorusElement {
    let x = random_element(rng, theta, radius, terms);
    (&x + &x.adjoint()).scale_re(0.5).without_constant()
}
