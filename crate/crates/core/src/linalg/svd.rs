//! Reference SVD: Householder QR followed by one-sided (Hestenes) Jacobi on
//! `Rᵀ`. Columns of `Rᵀ` whose norm falls below `max(m, n)·ε·‖A‖_F` are
//! treated as zero and never rotated, which keeps rank-deficient inputs cheap.
//! This is an accuracy oracle, not a fast path.

use super::{dot, qr_thin, DenseMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SvdTriple {
    /// `m x k` left singular vectors, `k = min(m, n)` unless truncated.
    pub u: DenseMatrix,
    /// Singular values, descending.
    pub s: Vec<f64>,
    /// `n x k` right singular vectors.
    pub v: DenseMatrix,
}

impl SvdTriple {
    pub fn rank(&self) -> usize {
        self.s.len()
    }

    /// Keeps the leading `k` triplets.
    pub fn truncated(&self, k: usize) -> SvdTriple {
        let k = k.min(self.s.len());
        SvdTriple {
            u: self.u.leading_columns(k),
            s: self.s[..k].to_vec(),
            v: self.v.leading_columns(k),
        }
    }

    /// `U · diag(S) · Vᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let mut us = self.u.clone();
        let k = self.s.len();
        for i in 0..us.rows() {
            for j in 0..k {
                us[(i, j)] *= self.s[j];
            }
        }
        us.matmul_tr(&self.v).expect("conforming factors")
    }
}

pub fn svd_reference(m: &DenseMatrix) -> Result<SvdTriple> {
    let cap = 100 * m.rows().min(m.cols()).max(1);
    svd_reference_with_cap(m, cap)
}

/// Same as [`svd_reference`] with an explicit cap on Jacobi sweeps.
pub fn svd_reference_with_cap(m: &DenseMatrix, max_sweeps: usize) -> Result<SvdTriple> {
    m.ensure_finite()?;
    if m.rows() < m.cols() {
        let t = svd_reference_with_cap(&m.transpose(), max_sweeps)?;
        return Ok(SvdTriple {
            u: t.v,
            s: t.s,
            v: t.u,
        });
    }
    let (rows, n) = m.shape();
    let qr = qr_thin(m)?;
    if n == 0 {
        return Ok(SvdTriple {
            u: qr.q,
            s: Vec::new(),
            v: DenseMatrix::zeros(0, 0),
        });
    }

    // Column j of X = Rᵀ is row j of R, so R's row-major buffer is X in
    // column-major layout.
    let mut x = qr.r.into_vec();
    let mut w = vec![0.0; n * n];
    for j in 0..n {
        w[j * n + j] = 1.0;
    }

    let scale = m.frob_norm();
    let negligible = rows.max(n) as f64 * f64::EPSILON * scale;
    let tol = n as f64 * f64::EPSILON;
    let mut norms = vec![0.0; n];

    let mut converged = false;
    for _ in 0..max_sweeps {
        for (j, nj) in norms.iter_mut().enumerate() {
            let c = &x[j * n..(j + 1) * n];
            *nj = dot(c, c);
        }
        let mut rotated = false;
        for p in 0..n - 1 {
            if norms[p].sqrt() <= negligible {
                continue;
            }
            for q in p + 1..n {
                let (a, b) = (norms[p], norms[q]);
                if b.sqrt() <= negligible {
                    continue;
                }
                let (lo, hi) = x.split_at_mut(q * n);
                let xp = &mut lo[p * n..(p + 1) * n];
                let xq = &mut hi[..n];
                let g = dot(xp, xq);
                if g.abs() <= tol * (a * b).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (b - a) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(xp, xq, c, s);
                norms[p] = a - t * g;
                norms[q] = b + t * g;

                let (lo, hi) = w.split_at_mut(q * n);
                rotate(&mut lo[p * n..(p + 1) * n], &mut hi[..n], c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence {
            iterations: max_sweeps,
        });
    }

    let mut sigma: Vec<f64> = (0..n)
        .map(|j| {
            let c = &x[j * n..(j + 1) * n];
            let s = dot(c, c).sqrt();
            if s <= negligible {
                0.0
            } else {
                s
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]).then(i.cmp(&j)));

    let w = DenseMatrix::from_vec(n, n, w)?.transpose();
    let u = qr.q.matmul(&w)?.select_columns(&order);

    let mut v = DenseMatrix::zeros(n, n);
    let mut filled = Vec::with_capacity(n);
    for (dst, &j) in order.iter().enumerate() {
        if sigma[j] > 0.0 {
            for i in 0..n {
                v[(i, dst)] = x[j * n + i] / sigma[j];
            }
            filled.push(dst);
        }
    }
    complete_orthonormal(&mut v, &filled);
    sigma = order.iter().map(|&j| sigma[j]).collect();

    Ok(SvdTriple { u, s: sigma, v })
}

#[inline]
fn rotate(xp: &mut [f64], xq: &mut [f64], c: f64, s: f64) {
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let (ap, aq) = (*a, *b);
        *a = c * ap - s * aq;
        *b = s * ap + c * aq;
    }
}

/// Fills the columns of `v` not listed in `filled` with unit vectors
/// orthogonal to all others, drawn from the canonical basis.
fn complete_orthonormal(v: &mut DenseMatrix, filled: &[usize]) {
    let n = v.rows();
    let k = v.cols();
    if filled.len() == k {
        return;
    }
    let mut basis: Vec<Vec<f64>> = filled.iter().map(|&j| v.column(j)).collect();
    let mut missing = (0..k).filter(|j| !filled.contains(j));
    let mut target = missing.next();
    for e in 0..n {
        let Some(dst) = target else { break };
        let mut cand = vec![0.0; n];
        cand[e] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &cand);
                for (x, y) in cand.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let norm = dot(&cand, &cand).sqrt();
        if norm > 0.5 {
            cand.iter_mut().for_each(|x| *x /= norm);
            for i in 0..n {
                v[(i, dst)] = cand[i];
            }
            basis.push(cand);
            target = missing.next();
        }
    }
}
