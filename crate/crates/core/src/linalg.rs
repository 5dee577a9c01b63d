//! Small dense kernels: cyclic Jacobi eigensolvers and pivoted Gaussian elimination.
//!
//! All matrices are square, row-major, and small (Gram matrices have at most `2m² + 3m + 1` rows;
//! truncated Hamiltonians a few hundred). Rotations are skipped for exactly-zero off-diagonal
//! entries, so block-diagonal inputs keep exactly block-diagonal eigenvectors.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

const MAX_SWEEPS: usize = 100;

/// Jacobi rotation `(c, s)` that annihilates the off-diagonal entry of `[[app, apq], [apq, aqq]]`.
fn rotation(app: f64, aqq: f64, apq: f64) -> (f64, f64) {
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + Float::sqrt(theta * theta + 1.0))
    };
    let c = 1.0 / Float::sqrt(t * t + 1.0);
    (c, t * c)
}

/// A nonzero entry this small next to both diagonal entries can be dropped without changing them.
fn negligible(apq: f64, app: f64, aqq: f64) -> bool {
    let g = 100.0 * apq;
    app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs()
}

/// Eigenvalues of a real symmetric `n × n` matrix, in descending order.
pub fn symmetric_eigenvalues(n: usize, matrix: &[f64]) -> Vec<f64> {
    assert_eq!(matrix.len(), n * n, "matrix is not n x n");
    let mut a = matrix.to_vec();
    let frob2: f64 = a.iter().map(|x| x * x).sum();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n).flat_map(|p| (p + 1..n).map(move |q| (p, q))).map(|(p, q)| a[p * n + q] * a[p * n + q]).sum();
        if off == 0.0 || off <= 1e-32 * frob2 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[p * n + p], a[q * n + q]);
                if negligible(apq, app, aqq) {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let (c, s) = rotation(app, aqq, apq);
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    eig
}

/// Eigendecomposition `A = V diag(λ) V†` of a complex Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub n: usize,
    /// Eigenvalues, unsorted; `values[j]` belongs to column `j` of `vectors`.
    pub values: Vec<f64>,
    /// Row-major unitary whose columns are the eigenvectors.
    pub vectors: Vec<Complex64>,
}

impl HermitianEigen {
    pub fn new(n: usize, matrix: &[Complex64]) -> Self {
        assert_eq!(matrix.len(), n * n, "matrix is not n x n");
        let mut a = matrix.to_vec();
        let mut v = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            v[i * n + i] = Complex64::new(1.0, 0.0);
            // Hermitian input: the diagonal is real up to rounding.
            a[i * n + i] = Complex64::new(a[i * n + i].re, 0.0);
        }
        let frob2: f64 = a.iter().map(|x| x.norm_sqr()).sum();
        for _ in 0..MAX_SWEEPS {
            let off: f64 =
                (0..n).flat_map(|p| (p + 1..n).map(move |q| (p, q))).map(|(p, q)| a[p * n + q].norm_sqr()).sum();
            if off == 0.0 || off <= 1e-32 * frob2 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let beta = a[p * n + q];
                    if beta.re == 0.0 && beta.im == 0.0 {
                        continue;
                    }
                    let (app, aqq) = (a[p * n + p].re, a[q * n + q].re);
                    let mag = beta.norm();
                    if negligible(mag, app, aqq) {
                        a[p * n + q] = Complex64::new(0.0, 0.0);
                        a[q * n + p] = Complex64::new(0.0, 0.0);
                        continue;
                    }
                    let phase = beta / mag;
                    let (c, s) = rotation(app, aqq, mag);
                    // G = diag(1, conj(phase)) · [[c, s], [-s, c]] on the (p, q) plane.
                    let gqp = -phase.conj() * s;
                    let gqq = phase.conj() * c;
                    for k in 0..n {
                        let (akp, akq) = (a[k * n + p], a[k * n + q]);
                        a[k * n + p] = akp * c + akq * gqp;
                        a[k * n + q] = akp * s + akq * gqq;
                        let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                        v[k * n + p] = vkp * c + vkq * gqp;
                        v[k * n + q] = vkp * s + vkq * gqq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                        a[p * n + k] = apk * c + aqk * gqp.conj();
                        a[q * n + k] = apk * s + aqk * gqq.conj();
                    }
                    a[p * n + q] = Complex64::new(0.0, 0.0);
                    a[q * n + p] = Complex64::new(0.0, 0.0);
                    a[p * n + p] = Complex64::new(a[p * n + p].re, 0.0);
                    a[q * n + q] = Complex64::new(a[q * n + q].re, 0.0);
                }
            }
        }
        let values = (0..n).map(|i| a[i * n + i].re).collect();
        Self { n, values, vectors: v }
    }

    /// `V f(λ) V†` for a complex spectral function `f`.
    pub fn spectral_map(&self, f: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
        let n = self.n;
        let fv: Vec<Complex64> = self.values.iter().map(|&x| f(x)).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, fk) in fv.iter().enumerate() {
                    let vik = self.vectors[i * n + k];
                    if vik.re == 0.0 && vik.im == 0.0 {
                        continue;
                    }
                    acc += vik * fk * self.vectors[j * n + k].conj();
                }
                out[i * n + j] = acc;
            }
        }
        out
    }
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot falls to zero.
pub fn solve_pivoted(n: usize, matrix: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
    assert_eq!(matrix.len(), n * n);
    assert_eq!(rhs.len(), n);
    let mut a = matrix.to_vec();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))?;
        if a[pivot * n + col] == 0.0 {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            b.swap(col, pivot);
        }
        let diag = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / diag;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row * n + k] -= factor * a[col * n + k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row * n + k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row * n + row];
    }
    Some(x)
}
