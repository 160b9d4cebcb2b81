//! Dense kernels: Gaussian sketching, Householder QR, projection, norms and
//! a Jacobi SVD used as the reference oracle.

mod matrix;
mod ops;
mod qr;
mod rng;
mod svd;

pub use matrix::DenseMatrix;
pub use ops::{frob_norm, matmul, project_out, spectral_norm_est, transpose};
pub use qr::{qr_thin, QrPair};
pub use rng::{gaussian_matrix, RngState};
pub use svd::{svd_reference, svd_reference_with_cap, SvdTriple};

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let tail: f64 = ca
        .remainder()
        .iter()
        .zip(cb.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// `y += alpha * x`
#[inline]
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
