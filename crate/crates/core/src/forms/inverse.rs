use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::torus::{TorusElement, C64};

pub const INVERSE_TOL: f64 = 1e-8;
pub const CONDITION_BOUND: f64 = 1e6;
const RADII: [i64; 6] = [4, 8, 16, 24, 32, 48];
const PLANAR_RADIUS: i64 = 16;
const REFINED_TOL: f64 = 1e-13;

#[derive(Clone, Debug)]
pub struct Inverse {
    pub element: TorusElement,
    pub condition: f64,
    /// `max(‖x·y − 1‖₂, ‖y·x − 1‖₂)`.
    pub residual: f64,
    pub radius: i64,
}

fn extent(x: &TorusElement) -> ((i64, i64), (i64, i64)) {
    let mut m = (i64::MAX, i64::MIN);
    let mut n = (i64::MAX, i64::MIN);
    for ((a, b), _) in x.iter() {
        m = (m.0.min(a), m.1.max(a));
        n = (n.0.min(b), n.1.max(b));
    }
    (m, n)
}

fn attempt(x: &TorusElement, radius: i64) -> (TorusElement, f64) {
    let ((cm, cn), _) = x
        .iter()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("nonzero element");
    let ((m0, m1), (n0, n1)) = extent(x);
    let rm = if m1 > m0 { radius } else { 0 };
    let rn = if n1 > n0 { radius } else { 0 };
    let dom_m = (-cm - rm, -cm + rm);
    let dom_n = (-cn - rn, -cn + rn);
    let (wm, wn) = (dom_m.1 - dom_m.0 + 1, dom_n.1 - dom_n.0 + 1);
    let img_m = (dom_m.0 + m0, dom_m.1 + m1);
    let img_n = (dom_n.0 + n0, dom_n.1 + n1);
    let hm = img_m.1 - img_m.0 + 1;
    let rows = (hm * (img_n.1 - img_n.0 + 1)) as usize;
    let cols = (wm * wn) as usize;
    let row_of = |m: i64, n: i64| ((n - img_n.0) * hm + (m - img_m.0)) as usize;
    let mut mat = DMatrix::<C64>::zeros(rows, cols);
    for q in dom_n.0..=dom_n.1 {
        for p in dom_m.0..=dom_m.1 {
            let col = ((q - dom_n.0) * wm + (p - dom_m.0)) as usize;
            let y = x.monomial_like(p, q, C64::new(1.0, 0.0));
            for ((m, n), c) in (x * &y).iter() {
                mat[(row_of(m, n), col)] += c;
            }
        }
    }
    let mut rhs = DVector::<C64>::zeros(rows);
    rhs[row_of(0, 0)] = C64::new(1.0, 0.0);
    let svd = mat.svd(true, true);
    let sv = &svd.singular_values;
    let (smax, smin) = (sv.max(), sv.min());
    let cond = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    let sol = svd
        .solve(&rhs, smax * 1e-14)
        .unwrap_or_else(|_| DVector::zeros(cols));
    let mut y = x.zero_like();
    for q in dom_n.0..=dom_n.1 {
        for p in dom_m.0..=dom_m.1 {
            let col = ((q - dom_n.0) * wm + (p - dom_m.0)) as usize;
            y.insert(p, q, sol[col]);
        }
    }
    (y, cond)
}

/// Two-sided inverse in the algebra, by least squares on growing windows.
/// Accepted once the residual is below `INVERSE_TOL`; larger windows are tried while they improve it.
pub fn invert(x: &TorusElement) -> Result<Inverse> {
    if x.is_zero() {
        return Err(Error::NotInvertible(f64::INFINITY));
    }
    let one = x.scalar_like(C64::new(1.0, 0.0));
    let ((m0, m1), (n0, n1)) = extent(x);
    let planar = m1 > m0 && n1 > n0;
    let mut last_cond = f64::INFINITY;
    let mut best: Option<Inverse> = None;
    for radius in RADII {
        if planar && radius > PLANAR_RADIUS {
            break;
        }
        let (y, cond) = attempt(x, radius);
        last_cond = cond;
        let residual = (x * &y).distance(&one).max((&y * x).distance(&one));
        if residual <= INVERSE_TOL && cond < CONDITION_BOUND {
            let done = residual <= REFINED_TOL;
            if best.as_ref().is_none_or(|b| residual < b.residual) {
                best = Some(Inverse {
                    element: y,
                    condition: cond,
                    residual,
                    radius,
                });
            }
            if done {
                break;
            }
        } else if best.is_some() {
            break;
        }
    }
    if let Some(b) = best {
        return Ok(b);
    }
    Err(Error::NotInvertible(last_cond))
}
