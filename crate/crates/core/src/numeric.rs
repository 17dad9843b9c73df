use nalgebra::{DMatrix, DVector};

/// Pairwise (cascade) summation in slice order.
pub fn pairwise_sum(x: &[f64]) -> f64 {
    if x.len() <= 16 {
        return x.iter().sum();
    }
    let (a, b) = x.split_at(x.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// A linear least-squares fit.
#[derive(Clone, Debug, PartialEq)]
pub struct LsFit {
    pub coefficients: Vec<f64>,
    /// Root-mean-square residual.
    pub rms: f64,
    /// Standard error of each coefficient (zero when the fit interpolates).
    pub stderr: Vec<f64>,
}

/// Least-squares coefficients of `y ≈ Σ c_k row_k`.
pub fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> LsFit {
    let n = rows.len();
    let p = rows.first().map_or(0, Vec::len);
    let a = DMatrix::from_fn(n, p, |i, j| rows[i][j]);
    let b = DVector::from_column_slice(y);
    let svd = a.clone().svd(true, true);
    let c = svd.solve(&b, 1e-14).expect("svd with vectors");
    let r = &a * &c - b;
    let rms = (r.norm_squared() / n.max(1) as f64).sqrt();
    let stderr = if n > p {
        let sigma2 = r.norm_squared() / (n - p) as f64;
        let gram = a.transpose() * &a;
        match gram.try_inverse() {
            Some(inv) => (0..p)
                .map(|k| (sigma2 * inv[(k, k)]).max(0.0).sqrt())
                .collect(),
            None => vec![0.0; p],
        }
    } else {
        vec![0.0; p]
    };
    LsFit {
        coefficients: c.iter().copied().collect(),
        rms,
        stderr,
    }
}

/// Ordinary least-squares line `y = a + b x`; returns `(a, b, stderr(b))`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let sse: f64 = x.iter().zip(y).map(|(u, v)| (v - a - b * u).powi(2)).sum();
    let se = if x.len() > 2 {
        (sse / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    (a, b, se)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_small_input() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(pairwise_sum(&v), 5050.0);
    }

    #[test]
    fn fits_recover_coefficients() {
        let x: Vec<f64> = (0..10).map(|i| i as f64 * 0.1).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 - 3.0 * v).collect();
        let (a, b, se) = linear_fit(&x, &y);
        assert!((a - 2.0).abs() < 1e-12 && (b + 3.0).abs() < 1e-12 && se < 1e-10);
        let rows: Vec<Vec<f64>> = x.iter().map(|&v| vec![1.0, v.sqrt(), v]).collect();
        let y2: Vec<f64> = x.iter().map(|&v| 1.0 + 0.5 * v.sqrt() - v).collect();
        let f = least_squares(&rows, &y2);
        let c = &f.coefficients;
        assert!((c[0] - 1.0).abs() < 1e-10 && (c[1] - 0.5).abs() < 1e-10 && f.rms < 1e-12);
        assert!(f.stderr.iter().all(|&e| e < 1e-10));
    }
}
