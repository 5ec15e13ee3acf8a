//! Small dense linear algebra: symmetric eigendecomposition (cyclic Jacobi),
//! Cholesky factorization and solves. Sized for the cohort scale handled
//! here (matrices up to a few hundred columns).

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// Dense symmetric matrix stored as a full row-major square buffer.
#[derive(Clone, Debug)]
pub struct SymMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues (descending) and matching eigenvectors as rows.
pub fn sym_eigen(a: &SymMatrix) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.n;
    let mut m = a.data.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let max_sweeps = 64;
    for _ in 0..max_sweeps {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += m[i * n + j] * m[i * n + j];
            }
        }
        if off.sqrt() <= 1e-13 * (1.0 + frobenius(&m, n)) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (m[i * n + i], i)).collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let values: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let vectors: Vec<Vec<f64>> = pairs
        .iter()
        .map(|&(_, col)| (0..n).map(|row| v[row * n + col]).collect())
        .collect();
    (values, vectors)
}

fn frobenius(m: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n * n {
        s += m[i] * m[i];
    }
    s.sqrt()
}

/// Lower-triangular Cholesky factor of a positive-definite matrix.
/// Fails (returns None) when a pivot is not strictly positive.
pub fn cholesky(a: &SymMatrix) -> Option<SymMatrix> {
    let n = a.n;
    let mut l = SymMatrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a.at(i, j);
            for k in 0..j {
                sum -= l.at(i, k) * l.at(j, k);
            }
            if i == j {
                if sum <= 0.0 || !sum.is_finite() {
                    return None;
                }
                l.set(i, j, sum.sqrt());
            } else {
                l.set(i, j, sum / l.at(j, j));
            }
        }
    }
    Some(l)
}

/// Solve L z = b for lower-triangular L (forward substitution).
pub fn solve_lower(l: &SymMatrix, b: &[f64]) -> Vec<f64> {
    let mut z = vec![0.0; l.n];
    solve_lower_into(l, b, &mut z);
    z
}

/// Forward substitution into a caller-provided buffer (no allocation).
pub fn solve_lower_into(l: &SymMatrix, b: &[f64], out: &mut [f64]) {
    let n = l.n;
    for i in 0..n {
        let mut s = b[i];
        let row = &l.data[i * n..i * n + i];
        for (k, lik) in row.iter().enumerate() {
            s -= lik * out[k];
        }
        out[i] = s / l.data[i * n + i];
    }
}

/// Solve A x = b for symmetric positive-definite A via Cholesky.
pub fn solve_spd(a: &SymMatrix, b: &[f64]) -> Option<Vec<f64>> {
    let l = cholesky(a)?;
    let z = solve_lower(&l, b);
    // back substitution with L^T
    let n = l.n;
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = z[i];
        for k in (i + 1)..n {
            s -= l.at(k, i) * x[k];
        }
        x[i] = s / l.at(i, i);
    }
    Some(x)
}

/// Least squares on columns (each column a predictor) with a small ridge
/// for numerical safety. Returns (intercept, coefficients).
pub fn ridge_lstsq(cols: &[Vec<f64>], y: &[f64], ridge: f64) -> Option<(f64, Vec<f64>)> {
    let p = cols.len();
    let n = y.len();
    if p == 0 {
        let mean = y.iter().sum::<f64>() / n as f64;
        return Some((mean, Vec::new()));
    }
    let y_mean = y.iter().sum::<f64>() / n as f64;
    let means: Vec<f64> = cols.iter().map(|c| c.iter().sum::<f64>() / n as f64).collect();
    let mut gram = SymMatrix::zeros(p);
    let mut rhs = vec![0.0; p];
    for i in 0..p {
        for j in 0..=i {
            let mut s = 0.0;
            for r in 0..n {
                s += (cols[i][r] - means[i]) * (cols[j][r] - means[j]);
            }
            gram.set(i, j, s);
            gram.set(j, i, s);
        }
        let mut s = 0.0;
        for r in 0..n {
            s += (cols[i][r] - means[i]) * (y[r] - y_mean);
        }
        rhs[i] = s;
    }
    for i in 0..p {
        let d = gram.at(i, i);
        gram.set(i, i, d + ridge * (1.0 + d));
    }
    let beta = solve_spd(&gram, &rhs)?;
    let intercept = y_mean - beta.iter().zip(&means).map(|(b, m)| b * m).sum::<f64>();
    Some((intercept, beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn eigen_recovers_diagonal() {
        let mut a = SymMatrix::zeros(3);
        a.set(0, 0, 3.0);
        a.set(1, 1, 1.0);
        a.set(2, 2, 2.0);
        let (vals, _) = sym_eigen(&a);
        assert_abs_diff_eq!(vals[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(vals[1], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(vals[2], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn eigen_reconstructs_matrix() {
        // A = Q diag Q^T for a hand 2x2
        let mut a = SymMatrix::zeros(2);
        a.set(0, 0, 2.0);
        a.set(0, 1, 1.0);
        a.set(1, 0, 1.0);
        a.set(1, 1, 2.0);
        let (vals, vecs) = sym_eigen(&a);
        assert_abs_diff_eq!(vals[0], 3.0, epsilon = 1e-10);
        assert_abs_diff_eq!(vals[1], 1.0, epsilon = 1e-10);
        for (val, vec) in vals.iter().zip(&vecs) {
            // A v = lambda v
            for i in 0..2 {
                let av = a.at(i, 0) * vec[0] + a.at(i, 1) * vec[1];
                assert_abs_diff_eq!(av, val * vec[i], epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn cholesky_solve_roundtrip() {
        let mut a = SymMatrix::zeros(3);
        let vals = [[4.0, 2.0, 0.6], [2.0, 5.0, 1.0], [0.6, 1.0, 3.0]];
        for i in 0..3 {
            for j in 0..3 {
                a.set(i, j, vals[i][j]);
            }
        }
        let b = [1.0, -2.0, 0.5];
        let x = solve_spd(&a, &b).unwrap();
        for i in 0..3 {
            let mut s = 0.0;
            for j in 0..3 {
                s += a.at(i, j) * x[j];
            }
            assert_abs_diff_eq!(s, b[i], epsilon = 1e-10);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let mut a = SymMatrix::identity(2);
        a.set(1, 1, -1.0);
        assert!(cholesky(&a).is_none());
    }

    #[test]
    fn lstsq_exact_on_planted_line() {
        let x: Vec<f64> = (0..50).map(|i| i as f64 / 10.0).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 + 2.0 * v).collect();
        let (b0, b) = ridge_lstsq(&[x], &y, 1e-12).unwrap();
        assert_abs_diff_eq!(b0, 3.0, epsilon = 1e-6);
        assert_abs_diff_eq!(b[0], 2.0, epsilon = 1e-6);
    }
}
