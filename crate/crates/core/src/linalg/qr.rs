//! Householder thin QR with a nonnegative diagonal on `R`.

use super::{axpy, dot, DenseMatrix};
use crate::error::{shape_err, Result};

/// `M = Q R` with `Q` column-orthonormal (`m x p`) and `R` upper triangular
/// (`p x p`) carrying a nonnegative diagonal.
#[derive(Clone, Debug)]
pub struct QrPair {
    pub q: DenseMatrix,
    pub r: DenseMatrix,
}

/// Reduces `x` to `beta * e1`. On return `x[1..]` holds the reflector tail
/// (the head is implicitly 1) and the result is `(beta, tau)`.
fn make_reflector(x: &mut [f64]) -> (f64, f64) {
    let alpha = x[0];
    let tail_sq = dot(&x[1..], &x[1..]);
    if tail_sq == 0.0 {
        return (alpha, 0.0);
    }
    let norm = (alpha * alpha + tail_sq).sqrt();
    let beta = if alpha >= 0.0 { -norm } else { norm };
    let tau = (beta - alpha) / beta;
    let scale = 1.0 / (alpha - beta);
    for v in &mut x[1..] {
        *v *= scale;
    }
    x[0] = 1.0;
    (beta, tau)
}

/// `c -= tau * v * (vᵀ c)`.
#[inline]
fn apply_reflector(v: &[f64], tau: f64, c: &mut [f64]) {
    let s = dot(v, c);
    if s != 0.0 {
        axpy(-tau * s, v, c);
    }
}

pub fn qr_thin(m: &DenseMatrix) -> Result<QrPair> {
    let (rows, cols) = m.shape();
    if rows < cols {
        return shape_err(format!("thin QR needs rows >= cols, got {rows}x{cols}"));
    }
    // Column-major working copy: column j lives at work[j*rows..(j+1)*rows].
    let mut work = m.transpose().into_vec();
    let mut taus = vec![0.0; cols];
    let mut r = DenseMatrix::zeros(cols, cols);

    for k in 0..cols {
        let (head, tail) = work.split_at_mut((k + 1) * rows);
        let v = &mut head[k * rows + k..];
        let (beta, tau) = make_reflector(v);
        taus[k] = tau;
        r[(k, k)] = beta;
        if tau != 0.0 {
            for col in tail.chunks_exact_mut(rows) {
                apply_reflector(v, tau, &mut col[k..]);
            }
        } else {
            // No reflection: the stored vector must still read as e1 below.
            v[1..].iter_mut().for_each(|x| *x = 0.0);
            v[0] = 1.0;
        }
        for (off, col) in tail.chunks_exact(rows).enumerate() {
            r[(k, k + 1 + off)] = col[k];
        }
    }

    // Accumulate Q = H_0 H_1 ... H_{p-1} [I_p; 0], backwards.
    let mut q = vec![0.0; rows * cols];
    for j in 0..cols {
        q[j * rows + j] = 1.0;
    }
    for k in (0..cols).rev() {
        let tau = taus[k];
        if tau == 0.0 {
            continue;
        }
        let v = &work[k * rows + k..(k + 1) * rows];
        for col in q[k * rows..].chunks_exact_mut(rows) {
            apply_reflector(v, tau, &mut col[k..]);
        }
    }

    for k in 0..cols {
        if r[(k, k)] < 0.0 {
            for j in k..cols {
                r[(k, j)] = -r[(k, j)];
            }
            for x in &mut q[k * rows..(k + 1) * rows] {
                *x = -*x;
            }
        }
    }

    let q = DenseMatrix::from_vec(cols, rows, q)?.transpose();
    Ok(QrPair { q, r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{gaussian_matrix, RngState};
    use crate::Error;

    fn residual(m: &DenseMatrix, qr: &QrPair) -> f64 {
        qr.q.matmul(&qr.r).unwrap().sub(m).unwrap().frob_norm()
    }

    #[test]
    fn identity_factors_trivially() {
        let qr = qr_thin(&DenseMatrix::identity(3)).unwrap();
        assert_eq!(qr.q, DenseMatrix::identity(3));
        assert_eq!(qr.r, DenseMatrix::identity(3));
    }

    #[test]
    fn orthonormal_input_gives_unit_r() {
        let q0 = qr_thin(&gaussian_matrix(12, 4, &mut RngState::new(3)))
            .unwrap()
            .q;
        let qr = qr_thin(&q0).unwrap();
        assert!(qr.r.sub(&DenseMatrix::identity(4)).unwrap().max_abs() < 1e-13);
        for j in 0..4 {
            let same: f64 = (0..12)
                .map(|i| (qr.q[(i, j)] - q0[(i, j)]).abs())
                .fold(0.0, f64::max);
            let flip: f64 = (0..12)
                .map(|i| (qr.q[(i, j)] + q0[(i, j)]).abs())
                .fold(0.0, f64::max);
            assert!(same.min(flip) < 1e-13);
        }
    }

    #[test]
    fn gaussian_residual_and_structure() {
        let m = gaussian_matrix(50, 20, &mut RngState::new(11));
        let qr = qr_thin(&m).unwrap();
        assert!(residual(&m, &qr) / m.frob_norm() <= 1e-13);
        assert!(qr.q.orthonormality_defect() <= 1e-12);
        for i in 0..20 {
            assert!(qr.r[(i, i)] >= 0.0);
            for j in 0..i {
                assert_eq!(qr.r[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn wide_input_is_rejected() {
        assert!(matches!(
            qr_thin(&DenseMatrix::zeros(2, 3)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn zero_columns_keep_q_orthonormal() {
        let mut m = gaussian_matrix(10, 4, &mut RngState::new(1));
        for i in 0..10 {
            m[(i, 1)] = 0.0;
            m[(i, 3)] = 2.0 * m[(i, 0)];
        }
        let qr = qr_thin(&m).unwrap();
        assert!(qr.q.orthonormality_defect() <= 1e-12);
        assert!(residual(&m, &qr) <= 1e-12 * m.frob_norm());
        assert_eq!(qr.r[(1, 1)], 0.0);
    }

    #[test]
    fn empty_matrix() {
        let qr = qr_thin(&DenseMatrix::zeros(5, 0)).unwrap();
        assert_eq!(qr.q.shape(), (5, 0));
        assert_eq!(qr.r.shape(), (0, 0));
    }
}
