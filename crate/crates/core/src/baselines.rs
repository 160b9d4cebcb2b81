//! Fixed-rank comparators: randomized SVD with a user-chosen sample size and
//! the truncated SVD (best rank-`r` approximation).

use crate::decomp::UtvFactors;
use crate::error::{shape_err, Error, Result};
use crate::linalg::{gaussian_matrix, qr_thin, svd_reference, DenseMatrix, RngState, SvdTriple};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixedRankParams {
    pub target: usize,
    pub power_iters: usize,
}

/// Randomized SVD: sketch with `d` Gaussian columns, `τ` rounds of subspace
/// iteration, then an exact SVD of the `d x n` projection.
pub fn rsvd_fixed_rank(
    a: &DenseMatrix,
    p: &FixedRankParams,
    rng: &mut RngState,
) -> Result<SvdTriple> {
    let (m, n) = a.shape();
    let d = p.target;
    if d == 0 || d > m.min(n) {
        return Err(Error::InvalidParam(format!(
            "target rank {d} outside 1..={}",
            m.min(n)
        )));
    }
    let omega = gaussian_matrix(n, d, rng);
    let mut q = qr_thin(&a.matmul(&omega)?)?.q;
    for _ in 0..p.power_iters {
        let q_tilde = qr_thin(&a.tr_matmul(&q)?)?.q;
        q = qr_thin(&a.matmul(&q_tilde)?)?.q;
    }
    let b = q.tr_matmul(a)?;
    let small = svd_reference(&b)?;
    Ok(SvdTriple {
        u: q.matmul(&small.u)?,
        s: small.s,
        v: small.v,
    }
    .truncated(d))
}

/// Best rank-`r` approximation packaged as UTV factors with a diagonal `D`.
pub fn truncated_svd(a: &DenseMatrix, r: usize) -> Result<UtvFactors> {
    let (m, n) = a.shape();
    if r > m.min(n) {
        return shape_err(format!("rank {r} exceeds min({m}, {n})"));
    }
    let t = svd_reference(a)?.truncated(r);
    Ok(UtvFactors {
        u: t.u,
        d: DenseMatrix::from_diag(&t.s),
        v: t.v,
        rank: r,
        transposed: false,
    })
}

/// `‖A − A_r‖_F` from a precomputed spectrum.
pub fn eckart_young_error(singular_values: &[f64], r: usize) -> f64 {
    singular_values
        .iter()
        .skip(r)
        .map(|s| s * s)
        .sum::<f64>()
        .sqrt()
}
