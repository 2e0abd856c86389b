//! Dense and Lanczos extremal eigensolvers for Hermitian operators.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::stream;

/// Largest dimension solved densely.
pub const DENSE_LIMIT: usize = 512;

/// Assembles the matrix of a linear map on `C^n` column by column.
pub fn assemble(n: usize, apply: impl Fn(&[Complex64]) -> Vec<Complex64>) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(n, n);
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        e[k] = Complex64::new(1.0, 0.0);
        let col = apply(&e);
        for (r, v) in col.into_iter().enumerate() {
            m[(r, k)] = v;
        }
        e[k] = Complex64::new(0.0, 0.0);
    }
    m
}

/// Largest entry of `|M - M^*|`.
pub fn asymmetry(m: &DMatrix<Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// `(lambda_min, lambda_max)` of a Hermitian matrix (symmetrized first).
pub fn dense_extremes(m: &DMatrix<Complex64>) -> Result<(f64, f64)> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let vals = eig.eigenvalues;
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("dense eigensolve produced non-finite values".into()));
    }
    Ok((vals.min(), vals.max()))
}

/// Extremal eigenvalues of a real symmetric operator by Lanczos with full
/// reorthogonalization. Converged when both Ritz residuals fall below
/// `tol * max(|lambda|, 1)`.
pub fn lanczos_extremes(
    n: usize,
    apply: impl Fn(&[f64]) -> Vec<f64>,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::Numerical("empty operator".into()));
    }
    let mut rng = stream(seed, "lanczos");
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let nq = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    q.iter_mut().for_each(|x| *x /= nq);
    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let limit = max_iter.min(n);
    for it in 0..limit {
        let mut w = apply(&basis[it]);
        let a: f64 = w.iter().zip(&basis[it]).map(|(x, y)| x * y).sum();
        alpha.push(a);
        // two passes of Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for v in &basis {
                let c: f64 = w.iter().zip(v).map(|(x, y)| x * y).sum();
                w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let m = alpha.len();
        let breakdown = b <= 1e-14 * alpha.iter().fold(1.0f64, |x, y| x.max(y.abs()));
        if m % 10 != 0 && !breakdown && m < limit {
            beta.push(b);
            basis.push(w.into_iter().map(|x| x / b).collect());
            continue;
        }
        let t = DMatrix::from_fn(m, m, |r, c| {
            if r == c {
                alpha[r]
            } else if r + 1 == c {
                beta[r]
            } else if c + 1 == r {
                beta[c]
            } else {
                0.0
            }
        });
        let eig = t.symmetric_eigen();
        let (imin, imax) = (eig.eigenvalues.imin(), eig.eigenvalues.imax());
        let (lmin, lmax) = (eig.eigenvalues[imin], eig.eigenvalues[imax]);
        let last: DVector<f64> = eig.eigenvectors.row(m - 1).transpose();
        let rmin = (b * last[imin]).abs();
        let rmax = (b * last[imax]).abs();
        let done = rmin <= tol * lmin.abs().max(1.0) && rmax <= tol * lmax.abs().max(1.0);
        if done || breakdown || m == n {
            return Ok((lmin, lmax));
        }
        beta.push(b);
        basis.push(w.into_iter().map(|x| x / b).collect());
    }
    Err(Error::Numerical(format!(
        "Lanczos did not converge in {limit} iterations"
    )))
}

/// Extremal eigenvalues of a Hermitian map on `C^n` via its real symmetric embedding.
pub fn hermitian_extremes(
    n: usize,
    apply: impl Fn(&[Complex64]) -> Vec<Complex64>,
    tol: f64,
    seed: u64,
) -> Result<(f64, f64)> {
    if n <= DENSE_LIMIT {
        return dense_extremes(&assemble(n, apply));
    }
    let real = |x: &[f64]| {
        let z: Vec<Complex64> = (0..n).map(|i| Complex64::new(x[i], x[n + i])).collect();
        let y = apply(&z);
        let mut out = vec![0.0; 2 * n];
        for i in 0..n {
            out[i] = y[i].re;
            out[n + i] = y[i].im;
        }
        out
    };
    lanczos_extremes(2 * n, real, tol, 2 * n, seed)
}
