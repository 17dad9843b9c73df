use crate::error::Result;
use crate::torus::{derivation_commutator, DerivationSpec, TorusElement};

/// `∇ⱼξ = dⱼξ + ωⱼξ` on the free rank-one right module.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionSpec {
    pub omega1: TorusElement,
    pub omega2: TorusElement,
}

impl ConnectionSpec {
    pub fn new(omega1: TorusElement, omega2: TorusElement) -> Result<Self> {
        omega1.checked_add(&omega2)?;
        Ok(Self { omega1, omega2 })
    }

    pub fn flat(theta: f64) -> Result<Self> {
        let z = TorusElement::zero(theta)?;
        Ok(Self {
            omega1: z.clone(),
            omega2: z,
        })
    }

    pub fn nabla(&self, j: u8, xi: &TorusElement) -> TorusElement {
        let w = if j == 1 { &self.omega1 } else { &self.omega2 };
        &xi.derivation(j) + &(w * xi)
    }
}

/// `c₁∇₁ξ + c₂∇₂ξ − ξr`.
pub fn covariant_derivative(
    conn: &ConnectionSpec,
    xi: &TorusElement,
    dir: &DerivationSpec,
) -> Result<TorusElement> {
    xi.checked_add(&conn.omega1)?;
    xi.checked_add(dir.r())?;
    let mut out = -&(xi * dir.r());
    if dir.c1 != Default::default() {
        out = &out + &conn.nabla(1, xi).scale(dir.c1);
    }
    if dir.c2 != Default::default() {
        out = &out + &conn.nabla(2, xi).scale(dir.c2);
    }
    Ok(out)
}

/// `R(δa, δb)ξ = c_{[δa,δb]}∇ξ − [c_{δa}∇, c_{δb}∇]ξ`.
pub fn curvature_two_form(
    conn: &ConnectionSpec,
    da: &DerivationSpec,
    db: &DerivationSpec,
    xi: &TorusElement,
) -> Result<TorusElement> {
    let bracket = derivation_commutator(da, db)?;
    let ab = covariant_derivative(conn, &covariant_derivative(conn, xi, db)?, da)?;
    let ba = covariant_derivative(conn, &covariant_derivative(conn, xi, da)?, db)?;
    Ok(&covariant_derivative(conn, xi, &bracket)? - &(&ab - &ba))
}
