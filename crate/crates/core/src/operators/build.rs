use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::operators::matrix::OperatorMatrix;
use crate::operators::sparse::SparseMatrix;
use crate::operators::window::BasisWindow;
use crate::torus::{lambda_pow, DerivationSpec, TorusElement};

const SELF_ADJOINT_TOL: f64 = 1e-12;

/// Matrix of `c₁d₁ + c₂d₂ + [r,·]` with out-of-window images dropped.
pub fn derivation_sparse(spec: &DerivationSpec, window: BasisWindow) -> SparseMatrix {
    let theta = spec.theta();
    let mut t = Vec::new();
    for col in 0..window.dim() {
        let (m, n) = window.point(col);
        let diag = spec.c1 * m as f64 + spec.c2 * n as f64;
        if diag != C64::default() {
            t.push((col, col, diag));
        }
        for ((a, b), r) in spec.r().iter() {
            if let Some(row) = window.index(m + a, n + b) {
                let v = r * (lambda_pow(theta, -b * m) - lambda_pow(theta, -a * n));
                if v != C64::default() {
                    t.push((row, col, v));
                }
            }
        }
    }
    SparseMatrix::from_triplets(window.dim(), window.dim(), t)
}

pub fn build_derivation_matrix(spec: &DerivationSpec, window: BasisWindow) -> OperatorMatrix {
    OperatorMatrix::new(window, derivation_sparse(spec, window))
}

/// Left multiplication by `a`, truncated to the window.
pub fn left_multiplication(a: &TorusElement, window: BasisWindow) -> SparseMatrix {
    let theta = a.theta();
    let mut t = Vec::new();
    for col in 0..window.dim() {
        let (m, n) = window.point(col);
        for ((p, q), c) in a.iter() {
            if let Some(row) = window.index(m + p, n + q) {
                t.push((row, col, c * lambda_pow(theta, -q * m)));
            }
        }
    }
    SparseMatrix::from_triplets(window.dim(), window.dim(), t)
}

/// Coefficient vector of `x` on the window.
pub fn to_vector(x: &TorusElement, window: BasisWindow) -> Result<Vec<C64>> {
    let mut v = vec![C64::default(); window.dim()];
    for ((m, n), c) in x.iter() {
        let i = window
            .index(m, n)
            .ok_or(Error::OutsideWindow(m, n, window.cutoff()))?;
        v[i] = c;
    }
    Ok(v)
}

pub fn from_vector(v: &[C64], window: BasisWindow, like: &TorusElement) -> TorusElement {
    let mut out = like.zero_like();
    for (i, &c) in v.iter().enumerate() {
        let (m, n) = window.point(i);
        out.insert(m, n, c);
    }
    out
}

fn check_self_adjoint(r: &TorusElement) -> Result<()> {
    if r.is_self_adjoint(SELF_ADJOINT_TOL) {
        Ok(())
    } else {
        Err(Error::NotSelfAdjoint(r.self_adjoint_defect()))
    }
}

/// `δⱼ = dⱼ + d_{rⱼ}` on the window.
pub fn perturbed_derivation(j: u8, r: &TorusElement, window: BasisWindow) -> SparseMatrix {
    derivation_sparse(&DerivationSpec::perturbed(j, r.clone()), window)
}

/// `L = −½(δ₁² + δ₂²)`, each `δⱼ` truncated before squaring.
pub fn build_lindbladian(
    r1: &TorusElement,
    r2: &TorusElement,
    window: BasisWindow,
) -> Result<OperatorMatrix> {
    if r1.theta() != r2.theta() {
        return Err(Error::ThetaMismatch(r1.theta(), r2.theta()));
    }
    check_self_adjoint(r1)?;
    check_self_adjoint(r2)?;
    let d1 = perturbed_derivation(1, r1, window);
    let d2 = perturbed_derivation(2, r2, window);
    let sq = d1.matmul(&d1).add(&d2.matmul(&d2));
    Ok(OperatorMatrix::new(window, sq.scale(C64::new(-0.5, 0.0))))
}

/// `D = [[0, X], [Y, 0]]` with `X = d₁ + i d₂ + d_r`, `Y = d₁ − i d₂ + d_{r*}`.
#[derive(Clone, Debug)]
pub struct DiracBlock {
    window: BasisWindow,
    x: SparseMatrix,
    y: SparseMatrix,
}

pub fn build_dirac(r: &TorusElement, window: BasisWindow) -> DiracBlock {
    let one = C64::new(1.0, 0.0);
    let x = derivation_sparse(&DerivationSpec::new(one, C64::i(), r.clone()), window);
    let y = derivation_sparse(&DerivationSpec::new(one, -C64::i(), r.adjoint()), window);
    DiracBlock { window, x, y }
}

impl DiracBlock {
    pub fn window(&self) -> BasisWindow {
        self.window
    }

    pub fn x(&self) -> &SparseMatrix {
        &self.x
    }

    pub fn y(&self) -> &SparseMatrix {
        &self.y
    }

    /// The four blocks `[D₀₀, D₀₁, D₁₀, D₁₁]`.
    pub fn blocks(&self) -> [SparseMatrix; 4] {
        let z = SparseMatrix::zeros(self.window.dim(), self.window.dim());
        [z.clone(), self.x.clone(), self.y.clone(), z]
    }

    pub fn operator(&self) -> OperatorMatrix {
        let [a, b, c, d] = self.blocks();
        OperatorMatrix::new(self.window, SparseMatrix::block2(&a, &b, &c, &d))
    }

    /// `Γ = diag(I, −I)`.
    pub fn grading(&self) -> SparseMatrix {
        let n = self.window.dim();
        let id = SparseMatrix::identity(n);
        let z = SparseMatrix::zeros(n, n);
        SparseMatrix::block2(&id, &z, &z, &id.scale(C64::new(-1.0, 0.0)))
    }

    /// Diagonal blocks `(XY, YX)` of `D²`.
    pub fn square_blocks(&self) -> (SparseMatrix, SparseMatrix) {
        (self.x.matmul(&self.y), self.y.matmul(&self.x))
    }
}
