use std::fmt::Write as _;
use std::sync::OnceLock;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::operators::sparse::SparseMatrix;
use crate::operators::spectrum::Spectrum;
use crate::operators::window::BasisWindow;

pub const HERMITIAN_TOL: f64 = 1e-12;

/// An operator on `multiplicity` copies of the truncated `L²(τ)`.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    window: BasisWindow,
    multiplicity: usize,
    matrix: SparseMatrix,
    hermitian: bool,
    spectrum: OnceLock<Spectrum>,
}

fn field<T: std::str::FromStr>(s: &str, line: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("bad entry `{line}`")))
}

impl OperatorMatrix {
    pub fn new(window: BasisWindow, matrix: SparseMatrix) -> Self {
        let multiplicity = matrix.nrows() / window.dim().max(1);
        assert_eq!(matrix.nrows(), multiplicity * window.dim(), "size mismatch");
        assert_eq!(matrix.nrows(), matrix.ncols(), "operator must be square");
        let defect = matrix.hermitian_defect();
        let hermitian = defect <= HERMITIAN_TOL * matrix.max_abs();
        Self {
            window,
            multiplicity,
            matrix,
            hermitian,
            spectrum: OnceLock::new(),
        }
    }

    pub fn window(&self) -> BasisWindow {
        self.window
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(self.window, self.matrix.scale(C64::new(c, 0.0)))
    }

    /// Cached Hermitian eigendecomposition.
    pub fn spectrum(&self) -> Result<&Spectrum> {
        if let Some(s) = self.spectrum.get() {
            return Ok(s);
        }
        if !self.hermitian {
            return Err(Error::NotHermitian(self.matrix.hermitian_defect()));
        }
        let s = Spectrum::compute(&self.matrix);
        Ok(self.spectrum.get_or_init(|| s))
    }

    /// Coordinate text: `dim=<n> hermitian=<0|1>` then `row col re im`.
    pub fn to_coo_string(&self) -> String {
        let mut out = format!(
            "dim={} hermitian={}\n",
            self.dim(),
            u8::from(self.hermitian)
        );
        for (i, j, v) in self.matrix.triplets() {
            writeln!(out, "{i} {j} {} {}", v.re, v.im).unwrap();
        }
        out
    }

    /// Parse the coordinate text; the flag is recomputed and must agree with the header.
    pub fn from_coo_str(window: BasisWindow, s: &str) -> Result<Self> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix".into()))?;
        let mut dim = None;
        let mut herm = None;
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("dim", v)) => dim = v.parse::<usize>().ok(),
                Some(("hermitian", v)) => herm = Some(v == "1"),
                _ => return Err(Error::Parse(format!("bad header field `{field}`"))),
            }
        }
        let dim = dim.ok_or_else(|| Error::Parse("missing dim".into()))?;
        let herm = herm.ok_or_else(|| Error::Parse("missing hermitian flag".into()))?;
        if dim % window.dim() != 0 {
            return Err(Error::Parse("dim does not match the window".into()));
        }
        let mut t = Vec::new();
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 4 {
                return Err(Error::Parse(format!("bad entry `{line}`")));
            }
            let i: usize = field(f[0], line)?;
            let j: usize = field(f[1], line)?;
            let re: f64 = field(f[2], line)?;
            let im: f64 = field(f[3], line)?;
            if i >= dim || j >= dim {
                return Err(Error::Parse(format!("index out of range in `{line}`")));
            }
            t.push((i, j, C64::new(re, im)));
        }
        let m = Self::new(window, SparseMatrix::from_triplets(dim, dim, t));
        if m.hermitian != herm {
            return Err(Error::Parse("hermitian flag disagrees with entries".into()));
        }
        Ok(m)
    }
}
