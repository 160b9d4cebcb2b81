//! Image quality metrics on 8-bit-range data: PSNR, global SSIM and the
//! relative Frobenius error.

use crate::error::{shape_err, Error, Result};
use crate::linalg::DenseMatrix;

const PEAK: f64 = 255.0;
const C1: f64 = (0.01 * PEAK) * (0.01 * PEAK);
const C2: f64 = (0.03 * PEAK) * (0.03 * PEAK);

fn same_shape(a: &DenseMatrix, b: &DenseMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        return shape_err(format!("{:?} vs {:?}", a.shape(), b.shape()));
    }
    Ok(())
}

fn sq_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn sq_sum(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum()
}

pub(crate) fn psnr_slices(a: &[f64], b: &[f64]) -> f64 {
    let err = sq_diff(a, b);
    if err == 0.0 {
        return f64::INFINITY;
    }
    10.0 * (PEAK * PEAK * a.len() as f64 / err).log10()
}

pub(crate) fn ssim_slices(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let mx = a.iter().sum::<f64>() / n;
    let my = b.iter().sum::<f64>() / n;
    let cov = |u: &[f64], mu: f64, v: &[f64], mv: f64| {
        u.iter()
            .zip(v)
            .map(|(x, y)| (x - mu) * (y - mv))
            .sum::<f64>()
            / n
    };
    let vx = cov(a, mx, a, mx);
    let vy = cov(b, my, b, my);
    let vxy = cov(a, mx, b, my);
    ((2.0 * mx * my + C1) * (2.0 * vxy + C2)) / ((mx * mx + my * my + C1) * (vx + vy + C2))
}

/// `10·log₁₀(255²·N / ‖Â − A‖²_F)`; `+∞` for identical inputs.
pub fn psnr(a: &DenseMatrix, ahat: &DenseMatrix) -> Result<f64> {
    same_shape(a, ahat)?;
    Ok(psnr_slices(a.as_slice(), ahat.as_slice()))
}

/// Global (single-window) SSIM over all entries.
pub fn ssim(a: &DenseMatrix, ahat: &DenseMatrix) -> Result<f64> {
    same_shape(a, ahat)?;
    if a.as_slice().is_empty() {
        return shape_err("empty image");
    }
    Ok(ssim_slices(a.as_slice(), ahat.as_slice()))
}

/// `‖A − Â‖_F / ‖A‖_F`.
pub fn rel_err(a: &DenseMatrix, ahat: &DenseMatrix) -> Result<f64> {
    same_shape(a, ahat)?;
    let base = sq_sum(a.as_slice());
    if base == 0.0 {
        return Err(Error::DivideByZero("relative error of a zero matrix"));
    }
    Ok((sq_diff(a.as_slice(), ahat.as_slice()) / base).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricSet {
    pub psnr_db: f64,
    pub ssim: f64,
    pub rel_err: f64,
}

impl MetricSet {
    /// All three metrics over equally long sample vectors. A zero reference
    /// gives a relative error of 0 when matched exactly and `+∞` otherwise.
    pub(crate) fn from_slices(a: &[f64], b: &[f64]) -> Self {
        let base = sq_sum(a);
        let diff = sq_diff(a, b);
        let rel_err = if base > 0.0 {
            (diff / base).sqrt()
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        Self {
            psnr_db: psnr_slices(a, b),
            ssim: ssim_slices(a, b),
            rel_err,
        }
    }
}
