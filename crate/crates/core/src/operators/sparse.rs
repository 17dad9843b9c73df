use num_complex::Complex64 as C64;

/// Row-compressed complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, C64)>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![C64::new(1.0, 0.0); n])
    }

    pub fn from_diagonal(d: &[C64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            if v != C64::default() {
                m.rows[i].push((i, v));
            }
        }
        m
    }

    /// Duplicates are summed; exact zeros are dropped.
    pub fn from_triplets<I>(nrows: usize, ncols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, C64)>,
    {
        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); nrows];
        for (i, j, v) in triplets {
            assert!(i < nrows && j < ncols, "triplet out of range");
            rows[i].push((j, v));
        }
        for row in &mut rows {
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, C64)> = Vec::with_capacity(row.len());
            for &(j, v) in row.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == j => last.1 += v,
                    _ => merged.push((j, v)),
                }
            }
            merged.retain(|e| e.1 != C64::default());
            *row = merged;
        }
        Self { nrows, ncols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, i: usize) -> &[(usize, C64)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.rows[i]
            .binary_search_by_key(&j, |e| e.0)
            .map(|k| self.rows[i][k].1)
            .unwrap_or_default()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, v)| (i, j, v)))
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.nrows.min(self.ncols))
            .map(|i| self.get(i, i))
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(
            self.ncols,
            self.nrows,
            self.triplets().map(|(i, j, v)| (j, i, v.conj())),
        )
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        for row in &mut out.rows {
            for e in row.iter_mut() {
                e.1 *= c;
            }
            row.retain(|e| e.1 != C64::default());
        }
        out
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: C64, other: &Self, b: C64) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        Self::from_triplets(
            self.nrows,
            self.ncols,
            self.triplets()
                .map(|(i, j, v)| (i, j, a * v))
                .chain(other.triplets().map(|(i, j, v)| (i, j, b * v))),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(C64::new(1.0, 0.0), other, C64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(C64::new(1.0, 0.0), other, C64::new(-1.0, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch");
        let mut acc = vec![C64::default(); other.ncols];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; other.ncols];
        let mut rows = Vec::with_capacity(self.nrows);
        for row in &self.rows {
            for &(k, a) in row {
                for &(j, b) in &other.rows[k] {
                    if !mark[j] {
                        mark[j] = true;
                        touched.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for &j in &touched {
                if acc[j] != C64::default() {
                    out.push((j, acc[j]));
                }
                acc[j] = C64::default();
                mark[j] = false;
            }
            touched.clear();
            rows.push(out);
        }
        Self {
            nrows: self.nrows,
            ncols: other.ncols,
            rows,
        }
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.ncols);
        self.rows
            .iter()
            .map(|r| r.iter().map(|&(j, v)| v * x[j]).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.triplets().map(|e| e.2.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }

    /// `max |M − M†|`.
    pub fn hermitian_defect(&self) -> f64 {
        if self.nrows != self.ncols {
            return f64::INFINITY;
        }
        self.triplets()
            .map(|(i, j, v)| (v - self.get(j, i).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// `[[a, b], [c, d]]`; blocks must be square of equal size.
    pub fn block2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.nrows;
        let shifted = |m: &Self, di: usize, dj: usize| {
            m.triplets()
                .map(move |(i, j, v)| (i + di, j + dj, v))
                .collect::<Vec<_>>()
        };
        let mut all = shifted(a, 0, 0);
        all.extend(shifted(b, 0, n));
        all.extend(shifted(c, n, 0));
        all.extend(shifted(d, n, n));
        Self::from_triplets(2 * n, 2 * n, all)
    }

    /// Submatrix on rows `ri` and columns `ci`.
    pub fn extract(&self, ri: &[usize], ci: &[usize]) -> Self {
        let mut pos = std::collections::HashMap::with_capacity(ci.len());
        for (k, &j) in ci.iter().enumerate() {
            pos.insert(j, k);
        }
        let mut t = Vec::new();
        for (a, &i) in ri.iter().enumerate() {
            for &(j, v) in &self.rows[i] {
                if let Some(&b) = pos.get(&j) {
                    t.push((a, b, v));
                }
            }
        }
        Self::from_triplets(ri.len(), ci.len(), t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn matmul_and_adjoint() {
        let a = SparseMatrix::from_triplets(2, 2, [(0, 1, c(2.0)), (1, 0, C64::new(0.0, 1.0))]);
        let p = a.matmul(&a);
        assert_eq!(p.get(0, 0), C64::new(0.0, 2.0));
        assert_eq!(p.get(1, 1), C64::new(0.0, 2.0));
        assert_eq!(p.nnz(), 2);
        let adj = a.adjoint();
        assert_eq!(adj.get(0, 1), C64::new(0.0, -1.0));
        assert!(a.hermitian_defect() > 1.0);
        let h = a.add(&a.adjoint());
        assert_eq!(h.hermitian_defect(), 0.0);
    }

    #[test]
    fn duplicates_merge() {
        let a = SparseMatrix::from_triplets(1, 1, [(0, 0, c(1.0)), (0, 0, c(-1.0))]);
        assert_eq!(a.nnz(), 0);
        let b = SparseMatrix::block2(
            &SparseMatrix::identity(2),
            &SparseMatrix::zeros(2, 2),
            &SparseMatrix::zeros(2, 2),
            &SparseMatrix::identity(2).scale(c(-1.0)),
        );
        assert_eq!(b.diagonal(), vec![c(1.0), c(1.0), c(-1.0), c(-1.0)]);
        assert_eq!(
            b.apply(&[c(1.0); 4]),
            vec![c(1.0), c(1.0), c(-1.0), c(-1.0)]
        );
    }
}
