use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::numeric::pairwise_sum;
use crate::operators::sparse::SparseMatrix;

/// One invariant block of a block-diagonal Hermitian matrix.
#[derive(Clone, Debug)]
pub struct SpectralBlock {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

/// Eigenpairs of a Hermitian matrix, stored per connected block.
#[derive(Clone, Debug)]
pub struct Spectrum {
    dim: usize,
    blocks: Vec<SpectralBlock>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Index sets of the connected components of the sparsity graph.
pub fn connected_blocks(m: &SparseMatrix) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    for (i, j, _) in m.triplets() {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut slot = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[root]].push(i);
    }
    blocks
}

pub fn dense(m: &SparseMatrix) -> DMatrix<C64> {
    let mut d = DMatrix::zeros(m.nrows(), m.ncols());
    for (i, j, v) in m.triplets() {
        d[(i, j)] = v;
    }
    d
}

impl Spectrum {
    pub fn compute(m: &SparseMatrix) -> Self {
        let blocks: Vec<SpectralBlock> = connected_blocks(m)
            .into_par_iter()
            .map(|indices| {
                let sub = dense(&m.extract(&indices, &indices));
                let h = (&sub + sub.adjoint()) * C64::new(0.5, 0.0);
                let eig = nalgebra::SymmetricEigen::new(h);
                SpectralBlock {
                    indices,
                    values: eig.eigenvalues.iter().copied().collect(),
                    vectors: eig.eigenvectors,
                }
            })
            .collect();
        Self {
            dim: m.nrows(),
            blocks,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[SpectralBlock] {
        &self.blocks
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .blocks
            .iter()
            .flat_map(|b| b.values.iter().copied())
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// `Σ f(μ)` with pairwise summation over the ascending spectrum.
    pub fn trace_fn(&self, f: impl Fn(f64) -> f64) -> f64 {
        let vals: Vec<f64> = self.eigenvalues().into_iter().map(f).collect();
        pairwise_sum(&vals)
    }

    /// `f(M) x`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> C64 + Sync, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.dim);
        let mut out = vec![C64::default(); self.dim];
        for b in &self.blocks {
            let xb =
                nalgebra::DVector::from_iterator(b.indices.len(), b.indices.iter().map(|&i| x[i]));
            let mut coef = b.vectors.adjoint() * xb;
            for (k, c) in coef.iter_mut().enumerate() {
                *c *= f(b.values[k]);
            }
            let yb = &b.vectors * coef;
            for (k, &i) in b.indices.iter().enumerate() {
                out[i] = yb[k];
            }
        }
        out
    }

    /// Pairs `(μ, ⟨v, A v⟩)` for every eigenvector `v`, in block order.
    pub fn diagonal_expectations(&self, a: &SparseMatrix) -> Vec<(f64, C64)> {
        self.blocks
            .par_iter()
            .map(|b| {
                let ab = dense(&a.extract(&b.indices, &b.indices));
                let prod = b.vectors.adjoint() * ab * &b.vectors;
                b.values
                    .iter()
                    .enumerate()
                    .map(|(k, &mu)| (mu, prod[(k, k)]))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    }

    /// `max |M − QΛQ†|` over the stored blocks plus any entries coupling different blocks.
    pub fn reconstruction_residual(&self, m: &SparseMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        let mut owner = vec![usize::MAX; self.dim];
        for (bi, b) in self.blocks.iter().enumerate() {
            for &i in &b.indices {
                owner[i] = bi;
            }
            let lam = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                b.values.len(),
                b.values.iter().map(|&v| C64::new(v, 0.0)),
            ));
            let rec = &b.vectors * lam * b.vectors.adjoint();
            let sub = dense(&m.extract(&b.indices, &b.indices));
            worst = worst.max((rec - sub).iter().map(|c| c.norm()).fold(0.0, f64::max));
        }
        for (i, j, v) in m.triplets() {
            if owner[i] != owner[j] {
                worst = worst.max(v.norm());
            }
        }
        worst
    }

    /// `max |Q†Q − I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let g = b.vectors.adjoint() * &b.vectors;
                let id = DMatrix::<C64>::identity(g.nrows(), g.ncols());
                (g - id).iter().map(|c| c.norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}
